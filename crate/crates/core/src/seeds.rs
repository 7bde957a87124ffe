//! Quantum seeds: compatible pairs, matrix and seed mutation, and the
//! exhaustive closure that lists every cluster variable of a finite type seed.
//!
//! Directions `k` are 0-based here; the CLI speaks 1-based indices.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::qscalar::qbinomial;
use crate::qtorus::{SkewForm, TorusElement};

pub const DEFAULT_SEED_BUDGET: usize = 10_000;

/// An `m x n` exchange matrix whose principal `n x n` block is skew-symmetric.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExchangeMatrix {
    matrix: IntMatrix,
}

impl ExchangeMatrix {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        let (m, n) = (matrix.rows(), matrix.cols());
        if n == 0 || n > m {
            return Err(Error::Dimension(format!("exchange matrix must have 0 < n <= m, got {m}x{n}")));
        }
        for i in 0..n {
            for j in 0..=i {
                if matrix[(i, j)] != -matrix[(j, i)] {
                    return Err(Error::Domain(format!(
                        "principal part is not skew-symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { matrix })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(IntMatrix::from_rows(rows)?)
    }

    /// Number of rows (all variables).
    pub fn m(&self) -> usize {
        self.matrix.rows()
    }

    /// Number of columns (mutable variables).
    pub fn n(&self) -> usize {
        self.matrix.cols()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[(i, j)]
    }

    pub fn column(&self, k: usize) -> Vec<i64> {
        self.matrix.column(k)
    }

    fn check_direction(&self, k: usize) -> Result<()> {
        if k >= self.n() {
            return Err(Error::Domain(format!("mutation direction {} outside 1..={}", k + 1, self.n())));
        }
        Ok(())
    }
}

/// Returns `D = diag(d_1..d_n)` when `B^T Λ = (D | 0)` with positive `d_i`.
/// No row or column permutation is tried.
pub fn check_compatible(lambda: &SkewForm, b: &ExchangeMatrix) -> Result<Vec<i64>> {
    if lambda.size() != b.m() {
        return Err(Error::Dimension(format!(
            "form of size {} paired with exchange matrix with {} rows",
            lambda.size(),
            b.m()
        )));
    }
    let prod = b.matrix().transpose().mul(lambda.matrix())?;
    let mut d = Vec::with_capacity(b.n());
    for i in 0..b.n() {
        for j in 0..b.m() {
            let x = prod[(i, j)];
            let ok = if i == j { x > 0 } else { x == 0 };
            if !ok {
                return Err(Error::Incompatible(format!(
                    "(B^T Λ)[{}][{}] = {x}, expected {}",
                    i + 1,
                    j + 1,
                    if i == j { "a positive integer" } else { "0" }
                )));
            }
        }
        d.push(prod[(i, i)]);
    }
    Ok(d)
}

/// The `m x m` matrix `E` attached to direction `k`.
pub fn e_matrix(b: &ExchangeMatrix, k: usize) -> Result<IntMatrix> {
    b.check_direction(k)?;
    let mut e = IntMatrix::identity(b.m());
    for i in 0..b.m() {
        e[(i, k)] = if i == k { -1 } else { 0.max(-b.entry(i, k)) };
    }
    Ok(e)
}

pub fn mutate_matrix(b: &ExchangeMatrix, k: usize) -> Result<ExchangeMatrix> {
    b.check_direction(k)?;
    let (m, n) = (b.m(), b.n());
    let mut out = IntMatrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            let bij = b.entry(i, j);
            out[(i, j)] = if i == k || j == k {
                -bij
            } else {
                let (bik, bkj) = (b.entry(i, k), b.entry(k, j));
                bij + (bik.abs() * bkj + bik * bkj.abs()) / 2
            };
        }
    }
    ExchangeMatrix::new(out)
}

/// `Λ' = E^T Λ E`, validated against the mutated exchange matrix.
pub fn mutate_lambda(lambda: &SkewForm, b: &ExchangeMatrix, k: usize) -> Result<SkewForm> {
    let e = e_matrix(b, k)?;
    let next = SkewForm::new(e.transpose().mul(lambda.matrix())?.mul(&e)?)?;
    check_compatible(&next, &mutate_matrix(b, k)?)?;
    Ok(next)
}

/// A quantum seed whose variables are expressed in the initial quantum torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumSeed {
    base: Arc<SkewForm>,
    lambda: SkewForm,
    b: ExchangeMatrix,
    vars: Vec<TorusElement>,
}

impl QuantumSeed {
    /// The initial seed: variables `X^{e_1}, ..., X^{e_m}` of the torus of `lambda`.
    pub fn initial(lambda: SkewForm, b: ExchangeMatrix) -> Result<Self> {
        check_compatible(&lambda, &b)?;
        let m = lambda.size();
        let vars = (0..m)
            .map(|i| {
                let mut e = vec![0; m];
                e[i] = 1;
                TorusElement::basis(e)
            })
            .collect();
        Ok(Self { base: Arc::new(lambda.clone()), lambda, b, vars })
    }

    /// Reassembles a seed from its parts, checking compatibility and ranks.
    pub fn from_parts(
        base: SkewForm,
        lambda: SkewForm,
        b: ExchangeMatrix,
        vars: Vec<TorusElement>,
    ) -> Result<Self> {
        check_compatible(&lambda, &b)?;
        if base.size() != lambda.size() || vars.len() != lambda.size() {
            return Err(Error::Dimension("seed parts have inconsistent sizes".into()));
        }
        if vars.iter().any(|x| x.rank() != base.size()) {
            return Err(Error::Dimension("seed variable of wrong rank".into()));
        }
        Ok(Self { base: Arc::new(base), lambda, b, vars })
    }

    pub fn base(&self) -> &SkewForm {
        &self.base
    }

    pub fn lambda(&self) -> &SkewForm {
        &self.lambda
    }

    pub fn exchange_matrix(&self) -> &ExchangeMatrix {
        &self.b
    }

    pub fn vars(&self) -> &[TorusElement] {
        &self.vars
    }

    pub fn m(&self) -> usize {
        self.b.m()
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }

    pub fn cluster(&self) -> &[TorusElement] {
        &self.vars[..self.n()]
    }

    pub fn frozen(&self) -> &[TorusElement] {
        &self.vars[self.n()..]
    }

    /// Sorted cluster variables; two seeds with the same key are identified.
    pub fn key(&self) -> Vec<TorusElement> {
        let mut key = self.cluster().to_vec();
        key.sort();
        key
    }

    /// `M(c)` for `c >= 0` in this seed's frame:
    /// `v^{Σ_{i<j} c_i c_j λ_ji} Y_1^{c_1} ... Y_m^{c_m}`.
    pub fn frame_monomial(&self, c: &[i64]) -> Result<TorusElement> {
        if c.len() != self.m() {
            return Err(Error::Dimension("frame exponent of wrong length".into()));
        }
        if c.iter().any(|&x| x < 0) {
            return Err(Error::Domain(format!(
                "frame monomial {c:?} needs inverses of non-monomial variables"
            )));
        }
        let mut out = TorusElement::one(self.m());
        for (y, &ci) in self.vars.iter().zip(c) {
            for _ in 0..ci {
                out = self.base.mul(&out, y)?;
            }
        }
        Ok(out.scale_v(self.lambda.normalization(c)))
    }

    /// The image `M'(c)` of a frame monomial under mutation in direction `k`,
    /// `Σ_p [c_k p] M(E c + p b^k)`, for `c >= 0`.
    ///
    /// Each summand is rewritten as `v^{Λ(y_p, c_k e_k)} M(y_p) Y_k^{-c_k}`
    /// with `y_p = E c + p b^k + c_k e_k >= 0`, and the common right factor
    /// `Y_k^{-c_k}` is removed by exact division.
    pub fn frame_mutation_image(&self, c: &[i64], k: usize) -> Result<TorusElement> {
        self.b.check_direction(k)?;
        if c.len() != self.m() || c.iter().any(|&x| x < 0) {
            return Err(Error::Domain(format!(
                "frame mutation image needs a nonnegative vector of length {}, got {c:?}",
                self.m()
            )));
        }
        let e = e_matrix(&self.b, k)?;
        let bk = self.b.column(k);
        let ec = e.mul_vec(c)?;
        let ck = c[k];
        let mut shift = vec![0; self.m()];
        shift[k] = ck;
        let mut numerator = TorusElement::zero(self.m());
        for p in 0..=ck {
            let y: Vec<i64> = (0..self.m()).map(|i| ec[i] + p * bk[i] + shift[i]).collect();
            let twist = self.lambda.eval(&y, &shift)?;
            let binom = qbinomial(ck, p)?;
            numerator += &self.frame_monomial(&y)?.scale(&binom.shift(twist));
        }
        let denom = self.base.pow(&self.vars[k], ck as u32)?;
        self.base.exact_div(&numerator, &denom)
    }

    /// Mutation in direction `k`. Frozen variables are untouched.
    pub fn mutate(&self, k: usize) -> Result<QuantumSeed> {
        self.b.check_direction(k)?;
        let lambda = mutate_lambda(&self.lambda, &self.b, k)?;
        let b = mutate_matrix(&self.b, k)?;
        let mut unit = vec![0; self.m()];
        unit[k] = 1;
        let fresh = self.frame_mutation_image(&unit, k)?;
        if !fresh.has_nonnegative_coefficients() {
            log::warn!("cluster variable with a negative coefficient: {fresh}");
        }
        let mut vars = self.vars.clone();
        vars[k] = fresh;
        Ok(QuantumSeed { base: Arc::clone(&self.base), lambda, b, vars })
    }

    pub fn mutate_sequence(&self, dirs: &[usize]) -> Result<QuantumSeed> {
        let mut seed = self.clone();
        for &k in dirs {
            seed = seed.mutate(k)?;
        }
        Ok(seed)
    }
}

pub fn mutate_seed(s: &QuantumSeed, k: usize) -> Result<QuantumSeed> {
    s.mutate(k)
}

/// Breadth-first closure of `s0` under all mutations, one seed per cluster.
pub fn explore(s0: &QuantumSeed, budget: usize) -> Result<Vec<QuantumSeed>> {
    let mut seen: HashSet<Vec<TorusElement>> = HashSet::new();
    let mut seeds = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(s0.key());
    queue.push_back(s0.clone());
    while let Some(seed) = queue.pop_front() {
        for k in 0..seed.n() {
            let next = seed.mutate(k)?;
            if seen.insert(next.key()) {
                if seen.len() > budget {
                    return Err(Error::BudgetExceeded(format!(
                        "more than {budget} seeds reached without closing the exchange graph"
                    )));
                }
                queue.push_back(next);
            }
        }
        seeds.push(seed);
    }
    Ok(seeds)
}

/// Every cluster variable reachable from `s0`.
pub fn enumerate_cluster_variables(s0: &QuantumSeed, budget: usize) -> Result<BTreeSet<TorusElement>> {
    Ok(explore(s0, budget)?.iter().flat_map(|s| s.cluster().iter().cloned()).collect())
}

#[derive(Serialize, Deserialize)]
struct SeedJson {
    lambda: IntMatrix,
    btilde: IntMatrix,
    vars: Vec<TorusElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    initial_lambda: Option<IntMatrix>,
}

impl Serialize for QuantumSeed {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeedJson {
            lambda: self.lambda.matrix().clone(),
            btilde: self.b.matrix().clone(),
            vars: self.vars.clone(),
            initial_lambda: (*self.base != self.lambda).then(|| self.base.matrix().clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuantumSeed {
    /// `initial_lambda` defaults to `lambda`, i.e. the seed is read as the
    /// initial seed of its own torus.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SeedJson::deserialize(d)?;
        let build = || -> Result<QuantumSeed> {
            let lambda = SkewForm::new(raw.lambda.clone())?;
            let base = match &raw.initial_lambda {
                Some(m) => SkewForm::new(m.clone())?,
                None => lambda.clone(),
            };
            QuantumSeed::from_parts(base, lambda, ExchangeMatrix::new(raw.btilde.clone())?, raw.vars.clone())
        };
        build().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn a2_seed() -> QuantumSeed {
        let b = ExchangeMatrix::from_rows(&[vec![0, 1], vec![-1, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let l =
            SkewForm::from_rows(&[vec![0, 0, -1, 0], vec![0, 0, 0, -1], vec![1, 0, 0, -1], vec![0, 1, 1, 0]])
                .unwrap();
        QuantumSeed::initial(l, b).unwrap()
    }

    fn x(e: &[i64]) -> TorusElement {
        TorusElement::basis(e.to_vec())
    }

    #[test]
    fn compatibility_of_a2_frame() {
        let s = a2_seed();
        assert_eq!(check_compatible(s.lambda(), s.exchange_matrix()).unwrap(), vec![1, 1]);
        let zero = SkewForm::zero(4);
        assert!(matches!(check_compatible(&zero, s.exchange_matrix()), Err(Error::Incompatible(_))));
    }

    #[test]
    fn perturbing_a_frozen_row_breaks_compatibility() {
        let s = a2_seed();
        let mut rows = s.exchange_matrix().matrix().to_rows();
        rows[2][0] = -rows[2][0];
        let b = ExchangeMatrix::from_rows(&rows).unwrap();
        // Recompute B^T Λ independently to see whether the product changed.
        let l = s.lambda().matrix();
        let changed = (0..4).any(|j| {
            let old: i64 = (0..4).map(|i| s.exchange_matrix().entry(i, 0) * l[(i, j)]).sum();
            let new: i64 = (0..4).map(|i| b.entry(i, 0) * l[(i, j)]).sum();
            old != new
        });
        assert!(changed);
        assert!(check_compatible(s.lambda(), &b).is_err());
    }

    #[test]
    fn e_matrix_examples() {
        let s = a2_seed();
        let e = e_matrix(s.exchange_matrix(), 0).unwrap();
        let mut expected = IntMatrix::identity(4);
        expected[(0, 0)] = -1;
        expected[(1, 0)] = 1;
        assert_eq!(e, expected);

        let b = ExchangeMatrix::from_rows(&[vec![0, -1], vec![1, 0], vec![2, 0]]).unwrap();
        let e = e_matrix(&b, 0).unwrap();
        let mut expected = IntMatrix::identity(3);
        expected[(0, 0)] = -1;
        assert_eq!(e, expected);
        assert!(e_matrix(&b, 2).is_err());
    }

    #[test]
    fn matrix_mutation_examples() {
        let b = ExchangeMatrix::from_rows(&[vec![0, 1], vec![-1, 0]]).unwrap();
        let b1 = mutate_matrix(&b, 0).unwrap();
        assert_eq!(b1.matrix().to_rows(), vec![vec![0, -1], vec![1, 0]]);
        assert_eq!(mutate_matrix(&b1, 0).unwrap(), b);

        let a3 = ExchangeMatrix::from_rows(&[vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]).unwrap();
        let m = mutate_matrix(&a3, 1).unwrap();
        assert_eq!(m.entry(0, 2), 1);
        assert_eq!(m.entry(2, 0), -1);
        assert_eq!(mutate_matrix(&m, 1).unwrap(), a3);
    }

    #[test]
    fn lambda_mutation_is_compatible_and_involutive() {
        let s = a2_seed();
        for k in 0..2 {
            let l1 = mutate_lambda(s.lambda(), s.exchange_matrix(), k).unwrap();
            let b1 = mutate_matrix(s.exchange_matrix(), k).unwrap();
            assert_eq!(check_compatible(&l1, &b1).unwrap(), vec![1, 1]);
            let l2 = mutate_lambda(&l1, &b1, k).unwrap();
            assert_eq!(&l2, s.lambda());
        }
    }

    #[test]
    fn first_mutation_of_a2() {
        let s = a2_seed().mutate(0).unwrap();
        assert_eq!(s.vars()[0], &x(&[-1, 0, 1, 0]) + &x(&[-1, 1, 0, 0]));
        assert_eq!(&s.vars()[1..], &a2_seed().vars()[1..]);
        let classical = s.vars()[0].specialize_commutative();
        let mut expected = crate::qtorus::CommLaurent::monomial(vec![-1, 1, 0, 0], 1);
        expected.add_term(vec![-1, 0, 1, 0], 1.into());
        assert_eq!(classical, expected);
    }

    #[test]
    fn mutation_is_an_involution() {
        let s = a2_seed();
        for k in 0..2 {
            assert_eq!(s.mutate(k).unwrap().mutate(k).unwrap(), s);
        }
        let t = s.mutate_sequence(&[0, 1, 0]).unwrap();
        for k in 0..2 {
            assert_eq!(t.mutate(k).unwrap().mutate(k).unwrap(), t);
        }
    }

    #[test]
    fn frozen_variables_never_change() {
        let s = a2_seed();
        let t = s.mutate_sequence(&[0, 1, 0, 1, 1, 0]).unwrap();
        assert_eq!(t.frozen(), s.frozen());
    }

    #[test]
    fn frame_mutation_image_matches_mutated_frame() {
        // M'(c) computed by the binomial expansion must equal the normalized
        // ordered product of the mutated seed's variables.
        let s = a2_seed().mutate(1).unwrap();
        for k in 0..2 {
            let t = s.mutate(k).unwrap();
            for c in [[1, 0, 0, 0], [2, 1, 0, 0], [0, 3, 1, 0], [2, 2, 1, 1], [3, 0, 0, 2]] {
                let via_binomials = s.frame_mutation_image(&c, k).unwrap();
                let direct = t.frame_monomial(&c).unwrap();
                assert_eq!(via_binomials, direct, "c = {c:?}, k = {k}");
            }
        }
        assert!(s.frame_mutation_image(&[-1, 0, 0, 0], 0).is_err());
    }

    #[test]
    fn seed_json_round_trip() {
        let s = a2_seed().mutate_sequence(&[0, 1]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back: QuantumSeed = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let init: QuantumSeed = serde_json::from_str(&serde_json::to_string(&a2_seed()).unwrap()).unwrap();
        assert_eq!(init, a2_seed());
    }

    #[test]
    fn closure_counts() {
        let s = a2_seed();
        assert_eq!(enumerate_cluster_variables(&s, DEFAULT_SEED_BUDGET).unwrap().len(), 5);
        assert!(matches!(enumerate_cluster_variables(&s, 2), Err(Error::BudgetExceeded(_))));
    }
}

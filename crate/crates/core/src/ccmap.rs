//! Principal framing of a quiver and the quantum Caldero–Chapoton map.
//!
//! For a module `M` supported on the principal vertices and an injective
//! `I` of the framed quiver, the character of `M ⊕ I[-1]` is
//!
//! ```text
//! X = Σ_e |Gr_e M| v^{-<e, m - e - i>} X^{-B̃e - (Ĩ - R̃ᵗʳ)m + dim soc I}
//! ```
//!
//! with `m = dim M`, `i = dim I`, and the Euler form of the framed quiver.
//! Grassmannian counts are taken over `F_p` while `v` stays formal.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::qscalar::LaurentScalar;
use crate::qtorus::{SkewForm, TorusElement};
use crate::repmod::{euler_form, submodule_dim_counts, Catalog, Quiver, Rep};
use crate::seeds::{check_compatible, ExchangeMatrix, QuantumSeed};

/// Framed quiver data: `Q̃` has one frozen vertex `i' = n + i` per principal
/// vertex with a single arrow `i' -> i`.
#[derive(Clone, Debug)]
pub struct FramedData {
    qtilde: Arc<Quiver>,
    btilde: ExchangeMatrix,
    rtilde: IntMatrix,
    rtilde_tr: IntMatrix,
    itilde: IntMatrix,
    lambda: SkewForm,
    /// `I_m - R^tr` over all vertices of `Q̃`.
    boundary: IntMatrix,
}

/// Frames a quiver whose vertices are all principal.
pub fn frame_quiver(q: &Quiver) -> Result<FramedData> {
    if q.principal() != q.vertices() {
        return Err(Error::Domain("frame_quiver expects a quiver without frozen vertices".into()));
    }
    let n = q.vertices();
    let m = 2 * n;
    let mut arrows = q.arrows().to_vec();
    arrows.extend((0..n).map(|i| (n + i, i)));
    let qtilde = Arc::new(Quiver::new(m, n, arrows)?);

    let mut rtilde = IntMatrix::zeros(m, n);
    let mut rtilde_tr = IntMatrix::zeros(m, n);
    let mut itilde = IntMatrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            rtilde[(i, j)] = qtilde.arrow_count(j, i);
            rtilde_tr[(i, j)] = qtilde.arrow_count(i, j);
        }
    }
    for i in 0..n {
        itilde[(i, i)] = 1;
    }
    let btilde = ExchangeMatrix::new(rtilde_tr.sub(&rtilde)?)?;

    let mut lam = IntMatrix::zeros(m, m);
    for i in 0..n {
        lam[(i, n + i)] = -1;
        lam[(n + i, i)] = 1;
        for j in 0..n {
            lam[(n + i, n + j)] = -btilde.entry(i, j);
        }
    }
    let lambda = SkewForm::new(lam)?;

    let mut boundary = IntMatrix::identity(m);
    for i in 0..m {
        for j in 0..m {
            boundary[(i, j)] -= qtilde.arrow_count(i, j);
        }
    }
    let out = FramedData { qtilde, btilde, rtilde, rtilde_tr, itilde, lambda, boundary };
    out.check()?;
    Ok(out)
}

impl FramedData {
    /// Framing of linearly oriented `A_n`.
    pub fn type_a(n: usize) -> Result<Self> {
        frame_quiver(&Quiver::linear_a(n)?)
    }

    /// Accepts either an unframed quiver or one already carrying the standard
    /// framing.
    pub fn from_quiver(q: &Quiver) -> Result<Self> {
        if q.principal() == q.vertices() {
            return frame_quiver(q);
        }
        let framed = frame_quiver(&q.principal_part())?;
        let mut ours = framed.qtilde.arrows().to_vec();
        let mut theirs = q.arrows().to_vec();
        ours.sort_unstable();
        theirs.sort_unstable();
        if q.vertices() != framed.m() || ours != theirs {
            return Err(Error::Unsupported(
                "frozen part is not one frozen vertex i' -> i per principal vertex".into(),
            ));
        }
        Ok(framed)
    }

    /// Checks `B̃ = R̃ᵗʳ - R̃`, `Λ(-B̃) = [I; 0]` and compatibility with `D = I`.
    fn check(&self) -> Result<()> {
        let (m, n) = (self.m(), self.n());
        if self.rtilde_tr.sub(&self.rtilde)? != *self.btilde.matrix() {
            return Err(Error::Internal("B̃ differs from R̃ᵗʳ - R̃".into()));
        }
        let prod = self.lambda.matrix().mul(&self.btilde.matrix().neg())?;
        let mut want = IntMatrix::zeros(m, n);
        for i in 0..n {
            want[(i, i)] = 1;
        }
        if prod != want {
            return Err(Error::Internal("Λ(-B̃) is not [I; 0]".into()));
        }
        if check_compatible(&self.lambda, &self.btilde)? != vec![1; n] {
            return Err(Error::Internal("compatible pair with D != I".into()));
        }
        Ok(())
    }

    pub fn qtilde(&self) -> &Arc<Quiver> {
        &self.qtilde
    }

    pub fn btilde(&self) -> &ExchangeMatrix {
        &self.btilde
    }

    pub fn rtilde(&self) -> &IntMatrix {
        &self.rtilde
    }

    pub fn rtilde_tr(&self) -> &IntMatrix {
        &self.rtilde_tr
    }

    pub fn itilde(&self) -> &IntMatrix {
        &self.itilde
    }

    pub fn lambda(&self) -> &SkewForm {
        &self.lambda
    }

    pub fn n(&self) -> usize {
        self.qtilde.principal()
    }

    pub fn m(&self) -> usize {
        self.qtilde.vertices()
    }

    /// `Ĩ - R̃ᵗʳ` as an `m x n` matrix.
    pub fn i_minus_rtr(&self) -> IntMatrix {
        self.itilde.sub(&self.rtilde_tr).expect("same shape")
    }

    /// `(I - Rᵗʳ) x` for a dimension vector of the framed quiver.
    pub fn boundary(&self, x: &[i64]) -> Result<Vec<i64>> {
        self.boundary.mul_vec(x)
    }

    /// The initial quantum seed `(Λ, B̃)` with variables `X^{e_i}`.
    pub fn seed(&self) -> Result<QuantumSeed> {
        QuantumSeed::initial(self.lambda.clone(), self.btilde.clone())
    }

    pub fn euler(&self, e: &[i64], f: &[i64]) -> Result<i64> {
        euler_form(&self.qtilde, e, f)
    }

    /// The catalog of indecomposables of `Q̃` over `F_p`.
    pub fn catalog(&self, p: u32) -> Result<Catalog> {
        Catalog::new(Arc::clone(&self.qtilde), p)
    }
}

/// An object `M ⊕ I[-1]` of the cluster category: a principal-supported
/// module and a multiset of indecomposable injectives, named by vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CCObject {
    pub module: Rep,
    pub injectives: Vec<usize>,
}

impl CCObject {
    pub fn new(module: Rep, mut injectives: Vec<usize>) -> Result<Self> {
        if !module.is_principal() {
            return Err(Error::Domain("module part must vanish on frozen vertices".into()));
        }
        let m = module.quiver().vertices();
        if let Some(&j) = injectives.iter().find(|&&j| j >= m) {
            return Err(Error::Domain(format!("injective index {} out of range", j + 1)));
        }
        injectives.sort_unstable();
        Ok(Self { module, injectives })
    }

    pub fn module_only(module: Rep) -> Result<Self> {
        Self::new(module, Vec::new())
    }

    /// `dim soc I`, one entry per vertex.
    pub fn socle(&self) -> Vec<i64> {
        let mut out = vec![0; self.module.quiver().vertices()];
        for &j in &self.injectives {
            out[j] += 1;
        }
        out
    }

    /// `dim I` of the injective part.
    pub fn injective_dims(&self) -> Result<Vec<i64>> {
        let q = self.module.quiver();
        let mut out = vec![0; q.vertices()];
        for &j in &self.injectives {
            let inj = Rep::injective(Arc::clone(q), self.module.p(), j)?;
            for (o, d) in out.iter_mut().zip(inj.dim_vector()) {
                *o += d;
            }
        }
        Ok(out)
    }
}

/// The quantum cluster character of `obj`.
pub fn cc_character(f: &FramedData, obj: &CCObject, budget: u64) -> Result<TorusElement> {
    let module = &obj.module;
    if module.quiver() != f.qtilde() {
        return Err(Error::Domain("object does not live over the framed quiver".into()));
    }
    let m = module.dim_vector();
    let i = obj.injective_dims()?;
    let base: Vec<i64> = f.boundary(&m)?.iter().zip(obj.socle()).map(|(b, s)| s - b).collect();
    let m_minus_i: Vec<i64> = m.iter().zip(&i).map(|(a, b)| a - b).collect();
    let mut out = TorusElement::zero(f.m());
    for (e, count) in submodule_dim_counts(module, budget)? {
        let e: Vec<i64> = e.iter().map(|&x| x as i64).collect();
        let be = f.btilde.matrix().mul_vec(&e[..f.n()])?;
        let exp: Vec<i64> = base.iter().zip(&be).map(|(x, y)| x - y).collect();
        let rest: Vec<i64> = m_minus_i.iter().zip(&e).map(|(a, b)| a - b).collect();
        let twist = -f.euler(&e, &rest)?;
        out.add_term(exp, LaurentScalar::monomial(count as i64, twist));
    }
    Ok(out)
}

/// Characters of every principal indecomposable and of every `I_j[-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterCatalog {
    /// `(catalog index, character)` for principal indecomposables.
    pub modules: Vec<(usize, TorusElement)>,
    /// Character of `I_j[-1]` for every vertex `j` of the framed quiver.
    pub shifts: Vec<TorusElement>,
}

pub fn character_of_indec_catalog(
    f: &FramedData,
    catalog: &Catalog,
    budget: u64,
) -> Result<CharacterCatalog> {
    let modules = catalog
        .principal_indices()
        .iter()
        .map(|&k| {
            let obj = CCObject::module_only(catalog.entry(k).clone())?;
            Ok((k, cc_character(f, &obj, budget)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let shifts = (0..f.m())
        .map(|j| {
            let zero = Rep::zero(Arc::clone(f.qtilde()), catalog.p());
            cc_character(f, &CCObject::new(zero, vec![j])?, budget)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CharacterCatalog { modules, shifts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repmod::DEFAULT_SUBSPACE_BUDGET as BUDGET;

    fn te(terms: &[(&[i64], &str)]) -> TorusElement {
        TorusElement::from_terms(
            terms[0].0.len(),
            terms.iter().map(|(e, c)| (e.to_vec(), c.parse().unwrap())),
        )
        .unwrap()
    }

    #[test]
    fn framed_a2_data() {
        let f = FramedData::type_a(2).unwrap();
        assert_eq!(f.btilde().matrix().to_rows(), vec![vec![0, 1], vec![-1, 0], vec![1, 0], vec![0, 1]]);
        assert_eq!(
            f.lambda().matrix().to_rows(),
            vec![vec![0, 0, -1, 0], vec![0, 0, 0, -1], vec![1, 0, 0, -1], vec![0, 1, 1, 0]]
        );
        assert_eq!(f.i_minus_rtr().to_rows(), vec![vec![1, -1], vec![0, 1], vec![-1, 0], vec![0, -1]]);
        assert_eq!(f.rtilde_tr().sub(f.rtilde()).unwrap(), *f.btilde().matrix());
    }

    #[test]
    fn boundary_of_injective_is_its_socle() {
        for n in 1..=3 {
            let f = FramedData::type_a(n).unwrap();
            for j in 0..f.m() {
                let inj = Rep::injective(Arc::clone(f.qtilde()), 2, j).unwrap();
                let soc: Vec<i64> = inj.socle().iter().map(|&s| s as i64).collect();
                assert_eq!(f.boundary(&inj.dim_vector()).unwrap(), soc);
                let proj = Rep::projective(Arc::clone(f.qtilde()), 2, j).unwrap();
                assert_eq!(proj.top(), inj.socle());
            }
        }
    }

    #[test]
    fn framing_round_trip() {
        let f = FramedData::type_a(3).unwrap();
        let again = FramedData::from_quiver(f.qtilde()).unwrap();
        assert_eq!(again.qtilde(), f.qtilde());
        let odd = Quiver::new(4, 2, vec![(0, 1), (2, 0), (1, 3)]).unwrap();
        assert!(FramedData::from_quiver(&odd).is_err());
    }

    #[test]
    fn a2_characters() {
        for p in [2, 3, 5] {
            let f = FramedData::type_a(2).unwrap();
            let cat = f.catalog(p).unwrap();
            let chars = character_of_indec_catalog(&f, &cat, BUDGET).unwrap();
            assert_eq!(chars.modules.len(), 3);
            let by_dims = |d: &[usize]| {
                chars.modules.iter().find(|(k, _)| cat.entry(*k).dims() == d).unwrap().1.clone()
            };
            assert_eq!(by_dims(&[1, 0, 0, 0]), te(&[(&[-1, 0, 1, 0], "1"), (&[-1, 1, 0, 0], "1")]));
            assert_eq!(by_dims(&[0, 1, 0, 0]), te(&[(&[1, -1, 0, 1], "1"), (&[0, -1, 0, 0], "1")]));
            assert_eq!(
                by_dims(&[1, 1, 0, 0]),
                te(&[(&[0, -1, 1, 1], "1"), (&[-1, -1, 1, 0], "1"), (&[-1, 0, 0, 0], "1")])
            );
            assert_eq!(chars.shifts.len(), 4);
            for (j, x) in chars.shifts.iter().enumerate() {
                let mut e = vec![0; 4];
                e[j] = 1;
                assert_eq!(*x, TorusElement::basis(e));
            }
            assert!(chars.modules.iter().all(|(_, x)| x.has_nonnegative_coefficients()));
        }
    }

    #[test]
    fn zero_object_has_character_one() {
        let f = FramedData::type_a(2).unwrap();
        let zero = Rep::zero(Arc::clone(f.qtilde()), 2);
        let x = cc_character(&f, &CCObject::module_only(zero).unwrap(), BUDGET).unwrap();
        assert_eq!(x, TorusElement::one(4));
    }

    #[test]
    fn simple_character_is_a_mutated_variable() {
        let f = FramedData::type_a(2).unwrap();
        let seed = f.seed().unwrap().mutate(0).unwrap();
        for p in [2, 3] {
            let s1 = Rep::simple(Arc::clone(f.qtilde()), p, 0).unwrap();
            let x = cc_character(&f, &CCObject::module_only(s1).unwrap(), BUDGET).unwrap();
            assert_eq!(x, seed.vars()[0]);
        }
    }

    #[test]
    fn non_thin_module_has_quantum_coefficients() {
        // S1 ⊕ S1 over framed A1: Gr_(1) has p + 1 points.
        let f = FramedData::type_a(1).unwrap();
        let s = Rep::simple(Arc::clone(f.qtilde()), 3, 0).unwrap();
        let x = cc_character(&f, &CCObject::module_only(s.direct_sum(&s).unwrap()).unwrap(), BUDGET).unwrap();
        assert_eq!(x, te(&[(&[-2, 2], "1"), (&[-2, 1], "4*v^-1"), (&[-2, 0], "1")]));
    }

    #[test]
    fn frozen_modules_are_rejected() {
        let f = FramedData::type_a(1).unwrap();
        let s = Rep::simple(Arc::clone(f.qtilde()), 2, 1).unwrap();
        assert!(CCObject::module_only(s).is_err());
    }
}

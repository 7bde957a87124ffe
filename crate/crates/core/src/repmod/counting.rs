use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{combine, next_digits, FpMatrix, Subspace};

use super::catalog::{Catalog, IsoClass};
use super::hom::{ext_dim, hom_basis, intertwining_system, HomMap};
use super::subrep::{cokernel, kernel, submodules};
use super::Rep;

fn check_enumeration(p: u32, dim: usize, budget: u64, what: &str) -> Result<()> {
    let size = (p as u64).checked_pow(dim as u32).unwrap_or(u64::MAX);
    if size > budget {
        return Err(Error::BudgetExceeded(format!("{what} has {size} elements, budget is {budget}")));
    }
    Ok(())
}

/// Extension classes in `Ext^1(M, N)` grouped by the isomorphism class of the
/// middle term `E` of `0 -> N -> E -> M -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtTally {
    pub dim: usize,
    pub classes: BTreeMap<IsoClass, u64>,
    /// Class of `M ⊕ N`, the middle term of the split extension.
    pub split: IsoClass,
}

impl ExtTally {
    pub fn total(&self) -> u64 {
        self.classes.values().sum()
    }
}

/// Middle term with block maps `[[N_a, c_a], [0, M_a]]` for a cocycle
/// `c = (c_a)` with `c_a: M_s -> N_t`.
fn middle_term(m: &Rep, n: &Rep, cocycle: &[u32]) -> Result<Rep> {
    let p = m.p();
    let q = m.quiver();
    let dims: Vec<usize> = n.dims().iter().zip(m.dims()).map(|(a, b)| a + b).collect();
    let mut k = 0;
    let mut maps = Vec::with_capacity(q.arrows().len());
    for (a, &(s, t)) in q.arrows().iter().enumerate() {
        let (ns, nt, ms) = (n.dims()[s], n.dims()[t], m.dims()[s]);
        let mut e = FpMatrix::zeros(p, dims[t], dims[s]);
        let (na, ma) = (n.map(a), m.map(a));
        for r in 0..nt {
            for c in 0..ns {
                e.set(r, c, na.get(r, c));
            }
        }
        for r in 0..ma.rows() {
            for c in 0..ms {
                e.set(nt + r, ns + c, ma.get(r, c));
            }
        }
        for r in 0..nt {
            for c in 0..ms {
                e.set(r, ns + c, cocycle[k]);
                k += 1;
            }
        }
        maps.push(e);
    }
    Rep::new(Arc::clone(q), p, dims, maps)
}

/// Enumerates `Ext^1(M, N)` as cocycles modulo coboundaries and tallies the
/// middle terms. Coset representatives are supported on the coordinates not
/// hit by the coboundary space.
pub fn ext_classes(m: &Rep, n: &Rep, catalog: &Catalog, budget: u64) -> Result<ExtTally> {
    m.check_compatible_with(n)?;
    let p = m.p();
    let delta = intertwining_system(m, n);
    let boundaries: Subspace = delta.column_space();
    let free = boundaries.complement_coords();
    let dim = free.len();
    let expected = ext_dim(m, n)?;
    if dim != expected {
        return Err(Error::Internal(format!(
            "cocycle quotient has dimension {dim}, Euler form gives {expected}"
        )));
    }
    check_enumeration(p, dim, budget, "Ext^1")?;
    let mut classes = BTreeMap::new();
    let mut digits = vec![0u32; dim];
    loop {
        let mut cocycle = vec![0u32; delta.rows()];
        for (&i, &x) in free.iter().zip(&digits) {
            cocycle[i] = x;
        }
        let e = middle_term(m, n, &cocycle)?;
        *classes.entry(catalog.fingerprint(&e)?).or_insert(0) += 1;
        if !next_digits(&mut digits, p) {
            break;
        }
    }
    let split = catalog.fingerprint(&m.direct_sum(n)?)?;
    Ok(ExtTally { dim, classes, split })
}

/// Every element of `Hom(M, N)`.
fn all_homs(m: &Rep, n: &Rep, budget: u64) -> Result<(usize, Vec<HomMap>)> {
    let basis = hom_basis(m, n)?;
    let p = m.p();
    check_enumeration(p, basis.len(), budget, "Hom")?;
    let flat: Vec<Vec<u32>> =
        basis.iter().map(|f| f.iter().flat_map(|x| x.data().to_vec()).collect()).collect();
    let len: usize = m.dims().iter().zip(n.dims()).map(|(a, b)| a * b).sum();
    let mut out = Vec::new();
    let mut digits = vec![0u32; basis.len()];
    loop {
        let v = combine(p, &digits, &flat, len);
        let mut k = 0;
        out.push(
            (0..m.dims().len())
                .map(|i| {
                    let (r, c) = (n.dims()[i], m.dims()[i]);
                    let x = FpMatrix::from_vec(p, r, c, v[k..k + r * c].to_vec());
                    k += r * c;
                    x
                })
                .collect(),
        );
        if !next_digits(&mut digits, p) {
            break;
        }
    }
    Ok((basis.len(), out))
}

/// Morphisms `M -> I` grouped by `(ker f, coker f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrataTally {
    pub hom_dim: usize,
    pub strata: BTreeMap<(IsoClass, IsoClass), u64>,
}

pub fn hom_strata(m: &Rep, i: &Rep, catalog: &Catalog, budget: u64) -> Result<StrataTally> {
    m.check_compatible_with(i)?;
    let (hom_dim, homs) = all_homs(m, i, budget)?;
    let mut strata = BTreeMap::new();
    for f in &homs {
        let b = catalog.fingerprint(&kernel(m, f)?)?;
        let c = catalog.fingerprint(&cokernel(i, f)?)?;
        *strata.entry((b, c)).or_insert(0) += 1;
    }
    Ok(StrataTally { hom_dim, strata })
}

/// `|Aut(A)|`: invertible elements of `End(A)`.
pub fn aut_count(a: &Rep, budget: u64) -> Result<u64> {
    Ok(all_homs(a, a, budget)?.1.iter().filter(|f| f.iter().all(FpMatrix::is_invertible)).count() as u64)
}

/// Hall numbers of `M`: for each pair `(A, B)` of classes, the number of
/// subrepresentations `U <= M` with `U ≅ B` and `M / U ≅ A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallTally {
    pub numbers: BTreeMap<(IsoClass, IsoClass), u64>,
}

impl HallTally {
    pub fn get(&self, quotient: &IsoClass, sub: &IsoClass) -> u64 {
        self.numbers.get(&(quotient.clone(), sub.clone())).copied().unwrap_or(0)
    }
}

pub fn hall_numbers(m: &Rep, catalog: &Catalog, budget: u64) -> Result<HallTally> {
    let mut numbers = BTreeMap::new();
    for s in submodules(m, budget)? {
        let a = catalog.fingerprint(&s.quotient)?;
        let b = catalog.fingerprint(&s.sub)?;
        *numbers.entry((a, b)).or_insert(0) += 1;
    }
    Ok(HallTally { numbers })
}

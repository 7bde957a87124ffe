//! Representations of finite acyclic quivers over a prime field.
//!
//! Everything here is exact linear algebra over `F_p`: Hom spaces are
//! nullspaces of the intertwining system, Ext dimensions come from the Euler
//! form (path algebras of acyclic quivers are hereditary), and submodules are
//! enumerated as tuples of echelon-form subspaces closed under the arrows.

mod catalog;
mod counting;
mod hom;
mod quiver;
mod subrep;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_prime, FpMatrix};

pub use catalog::{indecomposables, Catalog, IsoClass};
pub use counting::{aut_count, ext_classes, hall_numbers, hom_strata, ExtTally, HallTally, StrataTally};
pub use hom::{euler_form, ext_dim, hom_basis, hom_dim, is_morphism, HomMap};
pub use quiver::Quiver;
pub use subrep::{
    cokernel, grassmannian_count, kernel, sub_and_quotient, submodule_dim_counts, submodules, Submodule,
    DEFAULT_SUBSPACE_BUDGET,
};

/// A representation: one `F_p` vector space per vertex and one matrix per
/// arrow, of shape `dim(target) x dim(source)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    quiver: Arc<Quiver>,
    p: u32,
    dims: Vec<usize>,
    maps: Vec<FpMatrix>,
}

impl Rep {
    pub fn new(quiver: Arc<Quiver>, p: u32, dims: Vec<usize>, maps: Vec<FpMatrix>) -> Result<Self> {
        check_prime(p)?;
        if dims.len() != quiver.vertices() {
            return Err(Error::Dimension(format!(
                "dimension vector of length {} for a quiver with {} vertices",
                dims.len(),
                quiver.vertices()
            )));
        }
        if maps.len() != quiver.arrows().len() {
            return Err(Error::Dimension(format!(
                "{} matrices for {} arrows",
                maps.len(),
                quiver.arrows().len()
            )));
        }
        for (a, (&(s, t), m)) in quiver.arrows().iter().zip(&maps).enumerate() {
            if m.p() != p || m.rows() != dims[t] || m.cols() != dims[s] {
                return Err(Error::Dimension(format!(
                    "arrow {} needs a {}x{} matrix over F_{p}, got {}x{} over F_{}",
                    a + 1,
                    dims[t],
                    dims[s],
                    m.rows(),
                    m.cols(),
                    m.p()
                )));
            }
        }
        Ok(Self { quiver, p, dims, maps })
    }

    pub fn zero(quiver: Arc<Quiver>, p: u32) -> Self {
        let dims = vec![0; quiver.vertices()];
        let maps = quiver.arrows().iter().map(|_| FpMatrix::zeros(p, 0, 0)).collect();
        Self { quiver, p, dims, maps }
    }

    pub fn simple(quiver: Arc<Quiver>, p: u32, i: usize) -> Result<Self> {
        let mut dims = vec![0; quiver.vertices()];
        *dims.get_mut(i).ok_or_else(|| Error::Domain(format!("vertex {} out of range", i + 1)))? = 1;
        Self::thin(quiver, p, &dims)
    }

    /// The representation with the given 0/1 dimension vector and identity
    /// maps on every arrow inside the support.
    pub fn thin(quiver: Arc<Quiver>, p: u32, dims: &[usize]) -> Result<Self> {
        if dims.iter().any(|&d| d > 1) {
            return Err(Error::Domain("thin representations need a 0/1 dimension vector".into()));
        }
        let maps = quiver
            .arrows()
            .iter()
            .map(|&(s, t)| {
                let mut m = FpMatrix::zeros(p, dims[t], dims[s]);
                if dims[s] == 1 && dims[t] == 1 {
                    m.set(0, 0, 1);
                }
                m
            })
            .collect();
        Self::new(quiver, p, dims.to_vec(), maps)
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Dimension vector as signed integers.
    pub fn dim_vector(&self) -> Vec<i64> {
        self.dims.iter().map(|&d| d as i64).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn maps(&self) -> &[FpMatrix] {
        &self.maps
    }

    pub fn map(&self, arrow: usize) -> &FpMatrix {
        &self.maps[arrow]
    }

    /// True when the representation vanishes outside the principal vertices.
    pub fn is_principal(&self) -> bool {
        self.dims[self.quiver.principal()..].iter().all(|&d| d == 0)
    }

    pub(crate) fn check_compatible_with(&self, other: &Rep) -> Result<()> {
        if self.p != other.p || self.quiver != other.quiver {
            return Err(Error::Domain("representations live over different quivers or fields".into()));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Rep) -> Result<Rep> {
        self.check_compatible_with(other)?;
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let mut m = FpMatrix::zeros(self.p, dims[t], dims[s]);
                let (x, y) = (&self.maps[a], &other.maps[a]);
                for i in 0..x.rows() {
                    for j in 0..x.cols() {
                        m.set(i, j, x.get(i, j));
                    }
                }
                for i in 0..y.rows() {
                    for j in 0..y.cols() {
                        m.set(x.rows() + i, x.cols() + j, y.get(i, j));
                    }
                }
                m
            })
            .collect();
        Rep::new(Arc::clone(&self.quiver), self.p, dims, maps)
    }

    pub fn direct_sum_all<'a>(
        quiver: Arc<Quiver>,
        p: u32,
        parts: impl IntoIterator<Item = &'a Rep>,
    ) -> Result<Rep> {
        let mut out = Rep::zero(quiver, p);
        for part in parts {
            out = out.direct_sum(part)?;
        }
        Ok(out)
    }

    /// Indecomposable projective at `i`: basis of paths starting at `i`.
    pub fn projective(quiver: Arc<Quiver>, p: u32, i: usize) -> Result<Rep> {
        let paths = quiver.paths_from(i)?;
        let basis_at = |v: usize| -> Vec<&Vec<usize>> {
            paths.iter().filter(|(end, _)| *end == v).map(|(_, arrows)| arrows).collect()
        };
        let dims: Vec<usize> = (0..quiver.vertices()).map(|v| basis_at(v).len()).collect();
        let maps = quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let src = basis_at(s);
                let dst = basis_at(t);
                let mut m = FpMatrix::zeros(p, dims[t], dims[s]);
                for (c, path) in src.iter().enumerate() {
                    let mut longer = (*path).clone();
                    longer.push(a);
                    let r = dst.iter().position(|q| **q == longer).expect("extended path");
                    m.set(r, c, 1);
                }
                m
            })
            .collect();
        Rep::new(quiver, p, dims, maps)
    }

    /// Indecomposable injective at `i`: dual basis of paths ending at `i`.
    pub fn injective(quiver: Arc<Quiver>, p: u32, i: usize) -> Result<Rep> {
        let paths = quiver.paths_to(i)?;
        let basis_at = |v: usize| -> Vec<&Vec<usize>> {
            paths.iter().filter(|(start, _)| *start == v).map(|(_, arrows)| arrows).collect()
        };
        let dims: Vec<usize> = (0..quiver.vertices()).map(|v| basis_at(v).len()).collect();
        let maps = quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let src = basis_at(s);
                let dst = basis_at(t);
                let mut m = FpMatrix::zeros(p, dims[t], dims[s]);
                for (c, path) in src.iter().enumerate() {
                    if path.first() == Some(&a) {
                        let rest = &path[1..];
                        let r = dst.iter().position(|q| q.as_slice() == rest).expect("path tail");
                        m.set(r, c, 1);
                    }
                }
                m
            })
            .collect();
        Rep::new(quiver, p, dims, maps)
    }

    /// Dimension vector of the socle: at each vertex, the common kernel of the
    /// outgoing arrows.
    pub fn socle(&self) -> Vec<usize> {
        (0..self.quiver.vertices())
            .map(|v| {
                let out: Vec<usize> = self.quiver.out_arrows(v).collect();
                let rows: usize = out.iter().map(|&a| self.maps[a].rows()).sum();
                let mut stacked = FpMatrix::zeros(self.p, rows, self.dims[v]);
                let mut r0 = 0;
                for &a in &out {
                    let m = &self.maps[a];
                    for r in 0..m.rows() {
                        for c in 0..m.cols() {
                            stacked.set(r0 + r, c, m.get(r, c));
                        }
                    }
                    r0 += m.rows();
                }
                self.dims[v] - stacked.rank()
            })
            .collect()
    }

    /// Dimension vector of the top `M / rad M`: at each vertex, the cokernel
    /// of the incoming arrows.
    pub fn top(&self) -> Vec<usize> {
        (0..self.quiver.vertices())
            .map(|v| {
                let inc: Vec<usize> = self.quiver.in_arrows(v).collect();
                let cols: usize = inc.iter().map(|&a| self.maps[a].cols()).sum();
                let mut joined = FpMatrix::zeros(self.p, self.dims[v], cols);
                let mut c0 = 0;
                for &a in &inc {
                    let m = &self.maps[a];
                    for r in 0..m.rows() {
                        for c in 0..m.cols() {
                            joined.set(r, c0 + c, m.get(r, c));
                        }
                    }
                    c0 += m.cols();
                }
                self.dims[v] - joined.rank()
            })
            .collect()
    }

    /// Injective modules are exactly those with `Ext^1(S_i, M) = 0` for every
    /// simple `S_i`.
    pub fn is_injective(&self) -> Result<bool> {
        for i in 0..self.quiver.vertices() {
            let s = Rep::simple(Arc::clone(&self.quiver), self.p, i)?;
            if ext_dim(&s, self)? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> RepJson {
        RepJson {
            p: self.p,
            dims: self.dims.clone(),
            maps: self
                .maps
                .iter()
                .map(|m| m.to_rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect())
                .collect(),
        }
    }

    pub fn from_json(quiver: Arc<Quiver>, json: &RepJson) -> Result<Rep> {
        check_prime(json.p)?;
        if json.maps.len() != quiver.arrows().len() || json.dims.len() != quiver.vertices() {
            return Err(Error::Dimension("representation does not match the quiver".into()));
        }
        let maps = quiver
            .arrows()
            .iter()
            .zip(&json.maps)
            .map(|(&(s, t), rows)| {
                let (r, c) = (json.dims[t], json.dims[s]);
                if r == 0 && rows.iter().all(Vec::is_empty) {
                    return Ok(FpMatrix::zeros(json.p, 0, c));
                }
                FpMatrix::from_rows(json.p, r, c, rows)
            })
            .collect::<Result<Vec<_>>>()?;
        Rep::new(quiver, json.p, json.dims.clone(), maps)
    }
}

/// Wire form of a representation: dimension vector plus one row-major matrix
/// (list of rows) per arrow, entries mod `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepJson {
    pub p: u32,
    pub dims: Vec<usize>,
    pub maps: Vec<Vec<Vec<i64>>>,
}

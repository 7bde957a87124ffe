use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::hom::hom_dim;
use super::{Quiver, Rep};

/// Isomorphism class of a representation: multiplicities over the entries of
/// a [`Catalog`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IsoClass(pub Vec<u32>);

impl IsoClass {
    pub fn zero(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn unit(i: usize, len: usize) -> Self {
        let mut out = Self::zero(len);
        out.0[i] = 1;
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&m| m == 0)
    }

    /// Number of indecomposable summands, with multiplicity.
    pub fn summands(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &IsoClass) -> IsoClass {
        IsoClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `(index, multiplicity)` for the nonzero entries.
    pub fn parts(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().copied().enumerate().filter(|&(_, m)| m > 0)
    }

    /// Catalog indices with repetition, ascending.
    pub fn expanded(&self) -> Vec<usize> {
        self.parts().flat_map(|(i, m)| std::iter::repeat_n(i, m as usize)).collect()
    }
}

impl fmt::Display for IsoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

/// Thin interval modules along a path-shaped quiver, ordered by length and
/// then by starting position along the path.
fn intervals(q: &Arc<Quiver>, p: u32, order: &[usize]) -> Result<Vec<Rep>> {
    let k = order.len();
    let mut out = Vec::with_capacity(k * (k + 1) / 2);
    for len in 1..=k {
        for start in 0..=k - len {
            let mut dims = vec![0; q.vertices()];
            for &v in &order[start..start + len] {
                dims[v] = 1;
            }
            out.push(Rep::thin(Arc::clone(q), p, &dims)?);
        }
    }
    Ok(out)
}

/// The indecomposable representations of a quiver whose underlying graph is
/// a path (type `A`), in catalog order.
pub fn indecomposables(q: &Arc<Quiver>, p: u32) -> Result<Vec<Rep>> {
    let order = q
        .path_order(q.vertices())
        .ok_or_else(|| Error::Unsupported("indecomposables are only tabulated for type A quivers".into()))?;
    intervals(q, p, &order)
}

/// A fixed list of indecomposables used to name isomorphism classes.
///
/// When the whole quiver is of type `A` the list is complete. Otherwise it
/// holds the indecomposables supported on the principal part (which must be
/// of type `A`) followed by the indecomposable injectives, and only modules
/// that are principal-supported or injective can be identified.
#[derive(Clone, Debug)]
pub struct Catalog {
    quiver: Arc<Quiver>,
    p: u32,
    entries: Vec<Rep>,
    complete: bool,
    principal: Vec<usize>,
    injective: Vec<usize>,
    gram: Vec<Vec<i64>>,
}

impl Catalog {
    pub fn new(quiver: Arc<Quiver>, p: u32) -> Result<Self> {
        let (mut entries, complete) = match quiver.path_order(quiver.vertices()) {
            Some(order) => (intervals(&quiver, p, &order)?, true),
            None => {
                let n = quiver.principal();
                let order = quiver
                    .path_order(n)
                    .ok_or_else(|| Error::Unsupported("principal part is not of type A".into()))?;
                (intervals(&quiver, p, &order)?, false)
            }
        };
        let mut injective = Vec::with_capacity(quiver.vertices());
        for j in 0..quiver.vertices() {
            let inj = Rep::injective(Arc::clone(&quiver), p, j)?;
            // Indecomposables of type A are determined by their dimension
            // vector.
            let indexed = complete || inj.is_principal();
            match entries.iter().position(|e| e.dims() == inj.dims()) {
                Some(i) if indexed => injective.push(i),
                None if !indexed => {
                    entries.push(inj);
                    injective.push(entries.len() - 1);
                }
                _ => {
                    return Err(Error::Internal(format!(
                        "injective at vertex {} does not match the catalog",
                        j + 1
                    )))
                }
            }
        }
        let principal = (0..entries.len()).filter(|&i| entries[i].is_principal()).collect();
        let gram = entries
            .iter()
            .map(|y| entries.iter().map(|x| hom_dim(y, x).map(|h| h as i64)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        for (i, row) in gram.iter().enumerate() {
            if row[i] != 1 {
                return Err(Error::Internal(format!("catalog entry {} is not a brick", i + 1)));
            }
        }
        Ok(Self { quiver, p, entries, complete, principal, injective, gram })
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Rep] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &Rep {
        &self.entries[i]
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Indices of the principal-supported indecomposables.
    pub fn principal_indices(&self) -> &[usize] {
        &self.principal
    }

    /// Index of the indecomposable injective at vertex `j`.
    pub fn injective_index(&self, j: usize) -> usize {
        self.injective[j]
    }

    pub fn zero_class(&self) -> IsoClass {
        IsoClass::zero(self.entries.len())
    }

    pub fn unit_class(&self, i: usize) -> IsoClass {
        IsoClass::unit(i, self.entries.len())
    }

    /// Class of `⊕_j I_j^{s_j}`.
    pub fn injective_class(&self, socle: &[usize]) -> IsoClass {
        let mut out = self.zero_class();
        for (j, &s) in socle.iter().enumerate() {
            out.0[self.injective[j]] += s as u32;
        }
        out
    }

    /// A representative of the class.
    pub fn realize(&self, class: &IsoClass) -> Result<Rep> {
        if class.0.len() != self.entries.len() {
            return Err(Error::Dimension("class does not match the catalog".into()));
        }
        Rep::direct_sum_all(
            Arc::clone(&self.quiver),
            self.p,
            class.expanded().into_iter().map(|i| &self.entries[i]),
        )
    }

    /// The isomorphism class of `m`.
    ///
    /// Over a representation-directed algebra, `m` is determined by the
    /// numbers `dim Hom(X, m)` for indecomposable `X`, and the Gram matrix of
    /// those numbers is unitriangular in a suitable order.
    pub fn fingerprint(&self, m: &Rep) -> Result<IsoClass> {
        if m.quiver() != &self.quiver || m.p() != self.p {
            return Err(Error::Domain("module lives over a different quiver or field".into()));
        }
        let class = if m.is_principal() {
            self.solve(m, &self.principal)?
        } else if self.complete {
            self.solve(m, &(0..self.entries.len()).collect::<Vec<_>>())?
        } else if m.is_injective()? {
            self.injective_class(&m.socle())
        } else {
            return Err(Error::Unsupported(
                "isomorphism class of a module that is neither principal nor injective".into(),
            ));
        };
        let mut dims = vec![0; m.dims().len()];
        for (i, k) in class.parts() {
            for (d, e) in dims.iter_mut().zip(self.entries[i].dims()) {
                *d += k as usize * e;
            }
        }
        if dims != m.dims() {
            return Err(Error::Internal(format!(
                "fingerprint {class} does not reproduce the dimension vector"
            )));
        }
        Ok(class)
    }

    fn solve(&self, m: &Rep, support: &[usize]) -> Result<IsoClass> {
        let h: Vec<i64> =
            support.iter().map(|&y| hom_dim(&self.entries[y], m).map(|d| d as i64)).collect::<Result<_>>()?;
        // Order the support so that hom(X_y, X_x) != 0 only for x at or after
        // y, then back-substitute.
        let k = support.len();
        let mut indeg = vec![0usize; k];
        for (a, &y) in support.iter().enumerate() {
            for (b, &x) in support.iter().enumerate() {
                if a != b && self.gram[y][x] != 0 {
                    indeg[b] += 1;
                }
            }
        }
        let mut order = Vec::with_capacity(k);
        let mut ready: Vec<usize> = (0..k).filter(|&b| indeg[b] == 0).collect();
        while let Some(a) = ready.pop() {
            order.push(a);
            for b in 0..k {
                if a != b && self.gram[support[a]][support[b]] != 0 {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        ready.push(b);
                    }
                }
            }
        }
        if order.len() != k {
            return Err(Error::Internal("Hom order on the catalog has a cycle".into()));
        }
        let mut mult = vec![0i64; k];
        for &a in order.iter().rev() {
            let rest: i64 =
                (0..k).filter(|&b| b != a).map(|b| self.gram[support[a]][support[b]] * mult[b]).sum();
            mult[a] = h[a] - rest;
            if mult[a] < 0 {
                return Err(Error::Internal("negative multiplicity in fingerprint".into()));
            }
        }
        let mut out = self.zero_class();
        for (a, &y) in support.iter().enumerate() {
            out.0[y] = mult[a] as u32;
        }
        Ok(out)
    }
}

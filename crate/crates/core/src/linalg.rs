//! Dense linear algebra over a prime field `F_p`.
//!
//! Entries are stored reduced into `0..p`. Vectors are plain `Vec<u32>`;
//! subspaces are kept as reduced row-echelon bases so they can be compared
//! structurally and enumerated without duplicates.

use std::fmt;

use crate::error::{Error, Result};

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Largest supported characteristic; keeps every product of two residues
/// inside `u32`.
pub const MAX_PRIME: u32 = 1 << 15;

pub fn check_prime(p: u32) -> Result<()> {
    if !is_prime(p) || p > MAX_PRIME {
        return Err(Error::Domain(format!("{p} is not a supported prime")));
    }
    Ok(())
}

pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    let mut result = 1u64;
    let mut base = (a % p) as u64;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    result as u32
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Self { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut out = Self::zeros(p, n, n);
        for i in 0..n {
            out.set(i, i, 1);
        }
        out
    }

    /// Builds a matrix from signed rows, reducing every entry mod `p`.
    pub fn from_rows(p: u32, rows: usize, cols: usize, entries: &[Vec<i64>]) -> Result<Self> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension(format!("expected a {rows}x{cols} matrix")));
        }
        let data = entries.iter().flatten().map(|&x| x.rem_euclid(p as i64) as u32).collect();
        Ok(Self { p, rows, cols, data })
    }

    pub fn from_vec(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { p, rows, cols, data: data.into_iter().map(|x| x % p).collect() }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u32) {
        self.data[i * self.cols + j] = x % self.p;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in F_p product");
        let p = self.p;
        let mut out = Self::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = (out.data[idx] + a * other.get(k, j)) % p;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "shape mismatch in F_p product");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(0, |acc, (a, b)| (acc + a * b) % self.p))
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| (a + b) % self.p).collect();
        Self { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        self.add(&other.scale(self.p - 1))
    }

    pub fn scale(&self, c: u32) -> FpMatrix {
        let data = self.data.iter().map(|a| a * (c % self.p) % self.p).collect();
        Self { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    /// Reduced row-echelon form and its pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
            }
            let inv = inv_mod(m.get(r, c), p);
            for j in 0..m.cols {
                let x = m.get(r, j) * inv % p;
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let x = (m.get(i, j) + (p - f) * m.get(r, j)) % p;
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// A basis of `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let p = self.p;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0; self.cols];
                v[f] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - r.get(row, f)) % p;
                }
                v
            })
            .collect()
    }

    /// The column space as a subspace of `F_p^rows`.
    pub fn column_space(&self) -> Subspace {
        Subspace::span(self.p, self.rows, &self.transpose().to_rows())
    }

    /// The kernel as a subspace of `F_p^cols`.
    pub fn kernel(&self) -> Subspace {
        Subspace::span(self.p, self.cols, &self.nullspace())
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}{:?}", self.p, self.to_rows())
    }
}

/// A subspace of `F_p^d`, stored by its reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    p: u32,
    ambient: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(p: u32, ambient: usize, vectors: &[Vec<u32>]) -> Self {
        let m = FpMatrix::from_vec(p, vectors.len(), ambient, vectors.concat());
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Self { p, ambient, basis, pivots }
    }

    pub fn zero(p: u32, ambient: usize) -> Self {
        Self { p, ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(p: u32, ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            })
            .collect();
        Self { p, ambient, basis, pivots: (0..ambient).collect() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Non-pivot coordinates; the standard vectors there span a complement.
    pub fn complement_coords(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Subtracts basis multiples so the pivot coordinates become zero.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut out = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let f = out[pc];
            if f == 0 {
                continue;
            }
            for (o, b) in out.iter_mut().zip(row) {
                *o = (*o + (p - f) * b) % p;
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of a member vector in the echelon basis.
    pub fn coords(&self, v: &[u32]) -> Vec<u32> {
        self.pivots.iter().map(|&pc| v[pc]).collect()
    }

    /// Every subspace of `F_p^d`, ordered by dimension and then by echelon
    /// pattern.
    pub fn enumerate_all(p: u32, d: usize) -> Vec<Subspace> {
        (0..=d).flat_map(|k| Self::enumerate_dim(p, d, k)).collect()
    }

    /// Every `k`-dimensional subspace of `F_p^d`.
    pub fn enumerate_dim(p: u32, d: usize, k: usize) -> Vec<Subspace> {
        let mut out = Vec::new();
        for pivots in combinations(d, k) {
            // Free slots: row r, column c > pivots[r] that is not a pivot.
            let slots: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(r, &pc)| {
                    (pc + 1..d).filter(|c| !pivots.contains(c)).map(move |c| (r, c)).collect::<Vec<_>>()
                })
                .collect();
            let mut fill = vec![0u32; slots.len()];
            loop {
                let mut basis = vec![vec![0u32; d]; k];
                for (r, &pc) in pivots.iter().enumerate() {
                    basis[r][pc] = 1;
                }
                for (&(r, c), &x) in slots.iter().zip(&fill) {
                    basis[r][c] = x;
                }
                out.push(Subspace { p, ambient: d, basis, pivots: pivots.clone() });
                if !next_digits(&mut fill, p) {
                    break;
                }
            }
        }
        out
    }
}

/// Number of `k`-dimensional subspaces of `F_p^d` (Gaussian binomial at `p`).
pub fn subspace_count(p: u64, d: u32, k: u32) -> u64 {
    if k > d {
        return 0;
    }
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num *= p.pow(d - i) - 1;
        den *= p.pow(i + 1) - 1;
    }
    num / den
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Advances a base-`p` counter; returns false after the last value.
pub fn next_digits(digits: &mut [u32], p: u32) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < p {
            return true;
        }
        *d = 0;
    }
    false
}

/// Linear combination `Σ c_i v_i` of equal-length vectors.
pub fn combine(p: u32, coeffs: &[u32], vectors: &[Vec<u32>], len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for (&c, v) in coeffs.iter().zip(vectors) {
        if c == 0 {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o = (*o + c * x) % p;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(3) && is_prime(5) && is_prime(7919));
        assert!(!is_prime(0) && !is_prime(1) && !is_prime(4) && !is_prime(91));
        assert!(check_prime(6).is_err());
    }

    #[test]
    fn inverses() {
        for p in [2, 3, 5, 7, 11] {
            for a in 1..p {
                assert_eq!(a * inv_mod(a, p) % p, 1);
            }
        }
    }

    #[test]
    fn subspace_enumeration_counts() {
        for p in [2u32, 3, 5] {
            for d in 0..=4usize {
                for k in 0..=d {
                    let subs = Subspace::enumerate_dim(p, d, k);
                    assert_eq!(subs.len() as u64, subspace_count(p as u64, d as u32, k as u32));
                    let mut uniq = subs.clone();
                    uniq.dedup();
                    assert_eq!(uniq.len(), subs.len());
                    for s in &subs {
                        assert_eq!(Subspace::span(p, d, s.basis()), *s);
                    }
                }
            }
        }
        // F_2^2: 1 + 3 + 1 subspaces.
        assert_eq!(Subspace::enumerate_all(2, 2).len(), 5);
    }

    #[test]
    fn nullspace_and_rank() {
        let m = FpMatrix::from_rows(3, 2, 3, &[vec![1, 2, 0], vec![2, 1, 0]]).unwrap();
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
        }
        assert!(FpMatrix::identity(5, 3).is_invertible());
    }

    proptest! {
        #[test]
        fn rank_nullity(p in prop::sample::select(vec![2u32, 3, 5]),
                        rows in 0usize..5, cols in 0usize..5,
                        seed in prop::collection::vec(0u32..5, 25)) {
            let m = FpMatrix::from_vec(p, rows, cols, seed[..rows * cols].to_vec());
            let ns = m.nullspace();
            prop_assert_eq!(m.rank() + ns.len(), cols);
            for v in &ns {
                prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
            let cs = m.column_space();
            prop_assert_eq!(cs.dim(), m.rank());
            for j in 0..cols {
                let col: Vec<u32> = (0..rows).map(|i| m.get(i, j)).collect();
                prop_assert!(cs.contains(&col));
            }
        }
    }
}

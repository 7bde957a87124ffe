//! Reference computations written without the engine's own algorithms.
//! Everything here works on plain integer vectors and rationals.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Gaussian binomial in `q` by counting inversions of 0/1 words: the
/// coefficient of `q^j` is the number of words with `k` ones, `n - k` zeros
/// and `j` pairs (one before zero).
pub fn gaussian_by_inversions(n: usize, k: usize) -> Vec<i64> {
    let mut coeffs = vec![0i64; k * (n - k) + 1];
    for word in 0u32..(1 << n) {
        if word.count_ones() as usize != k {
            continue;
        }
        let mut inv = 0;
        let mut ones = 0;
        for bit in (0..n).rev() {
            if word >> bit & 1 == 1 {
                ones += 1;
            } else {
                inv += ones;
            }
        }
        coeffs[inv] += 1;
    }
    coeffs
}

/// Gaussian binomial in `q` by the rule `[n,k] = [n-1,k-1] + q^k [n-1,k]`.
pub fn gaussian_by_pascal(n: usize, k: usize) -> Vec<i64> {
    let mut table: Vec<Vec<Vec<i64>>> = vec![vec![vec![1]]];
    for i in 1..=n {
        let mut row = Vec::with_capacity(i + 1);
        for j in 0..=i {
            let mut c = vec![0i64; j * (i - j) + 1];
            if j > 0 {
                for (d, x) in table[i - 1][j - 1].iter().enumerate() {
                    c[d] += x;
                }
            }
            if j < i {
                for (d, x) in table[i - 1][j].iter().enumerate() {
                    c[d + j] += x;
                }
            }
            row.push(c);
        }
        table.push(row);
    }
    table[n][k].clone()
}

/// `(exponent of v, coefficient)` pairs of the balanced binomial
/// `v^{-k(n-k)} [n,k]_{q=v^2}`.
pub fn balanced(gauss: &[i64], n: usize, k: usize) -> Vec<(i64, i64)> {
    let shift = (k * (n - k)) as i64;
    gauss.iter().enumerate().filter(|(_, &c)| c != 0).map(|(d, &c)| (2 * d as i64 - shift, c)).collect()
}

pub fn classical_binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `e^T L f`.
pub fn bilinear(l: &[Vec<i64>], e: &[i64], f: &[i64]) -> i64 {
    let mut acc = 0;
    for (i, row) in l.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            acc += e[i] * x * f[j];
        }
    }
    acc
}

/// The ordered product `X_1^{c_1} ... X_m^{c_m}` in a torus with
/// `X^a X^b = v^{a^T L b} X^{a+b}`, as `(v-exponent, exponent vector)`.
pub fn ordered_product(l: &[Vec<i64>], c: &[i64]) -> (i64, Vec<i64>) {
    let m = c.len();
    let mut twist = 0;
    let mut acc = vec![0; m];
    for i in 0..m {
        let mut unit = vec![0; m];
        unit[i] = c[i].signum();
        for _ in 0..c[i].abs() {
            twist += bilinear(l, &acc, &unit);
            acc[i] += unit[i];
        }
    }
    (twist, acc)
}

/// Arrows of linear `A_n` with one frozen vertex `n + i -> i` per vertex.
pub fn framed_a_arrows(n: usize) -> Vec<(usize, usize)> {
    let mut arrows: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    arrows.extend((0..n).map(|i| (n + i, i)));
    arrows
}

/// `b_ij = #(i -> j) - #(j -> i)` for the columns of principal vertices.
pub fn exchange_matrix(m: usize, n: usize, arrows: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut b = vec![vec![0i64; n]; m];
    for &(s, t) in arrows {
        if t < n {
            b[s][t] += 1;
        }
        if s < n {
            b[t][s] -= 1;
        }
    }
    b
}

/// Euler form `Σ e_i f_i - Σ_{s -> t} e_s f_t`.
pub fn euler(arrows: &[(usize, usize)], e: &[i64], f: &[i64]) -> i64 {
    let mut acc: i64 = e.iter().zip(f).map(|(a, b)| a * b).sum();
    for &(s, t) in arrows {
        acc -= e[s] * f[t];
    }
    acc
}

/// Classical cluster character of the interval module supported on
/// `a..=b` of framed linear `A_n`, as sorted `(exponent, coefficient)`
/// pairs: `Σ_e χ(Gr_e) Π x_i^{-<e,S_i> - <S_i, m-e>}`. Submodules of an
/// interval for `i -> i+1` are the tails `c..=b`, each a single point.
pub fn interval_character(n: usize, a: usize, b: usize) -> Vec<(Vec<i64>, BigInt)> {
    let m = 2 * n;
    let arrows = framed_a_arrows(n);
    let mut dim = vec![0i64; m];
    for x in dim.iter_mut().take(b + 1).skip(a) {
        *x = 1;
    }
    let mut out = std::collections::BTreeMap::new();
    for c in a..=b + 1 {
        let mut e = vec![0i64; m];
        for x in e.iter_mut().take(b + 1).skip(c) {
            *x = 1;
        }
        let rest: Vec<i64> = dim.iter().zip(&e).map(|(x, y)| x - y).collect();
        let exp: Vec<i64> = (0..m)
            .map(|i| {
                let mut s = vec![0i64; m];
                s[i] = 1;
                -euler(&arrows, &e, &s) - euler(&arrows, &s, &rest)
            })
            .collect();
        *out.entry(exp).or_insert_with(BigInt::zero) += 1;
    }
    out.into_iter().collect()
}

/// Classical (commutative) seed: exchange matrix and the values of all `m`
/// variables at a fixed rational point.
#[derive(Clone)]
pub struct RationalSeed {
    pub b: Vec<Vec<i64>>,
    pub x: Vec<BigRational>,
}

impl RationalSeed {
    pub fn mutate(&self, k: usize) -> RationalSeed {
        let m = self.b.len();
        let n = self.b[0].len();
        let mut up = BigRational::one();
        let mut down = BigRational::one();
        for i in 0..m {
            let bik = self.b[i][k];
            if bik > 0 {
                up *= pow(&self.x[i], bik as u32);
            } else if bik < 0 {
                down *= pow(&self.x[i], (-bik) as u32);
            }
        }
        let mut x = self.x.clone();
        x[k] = (up + down) / &self.x[k];
        let mut b = self.b.clone();
        for i in 0..m {
            for j in 0..n {
                b[i][j] = if i == k || j == k {
                    -self.b[i][j]
                } else {
                    let (bik, bkj) = (self.b[i][k], self.b[k][j]);
                    self.b[i][j] + (bik.abs() * bkj + bik * bkj.abs()) / 2
                };
            }
        }
        RationalSeed { b, x }
    }
}

pub fn pow(x: &BigRational, e: u32) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

/// Values of all cluster variables reachable from `s0`, found by a
/// breadth-first search over clusters (as sets of values).
pub fn classical_cluster_values(s0: &RationalSeed, limit: usize) -> BTreeSet<BigRational> {
    let n = s0.b[0].len();
    let key = |s: &RationalSeed| s.x[..n].iter().cloned().collect::<BTreeSet<_>>();
    let mut seen = BTreeSet::new();
    let mut values = BTreeSet::new();
    let mut queue = VecDeque::from([s0.clone()]);
    seen.insert(key(s0));
    while let Some(s) = queue.pop_front() {
        values.extend(s.x[..n].iter().cloned());
        for k in 0..n {
            let t = s.mutate(k);
            if seen.insert(key(&t)) {
                assert!(seen.len() <= limit, "classical closure exceeded {limit} clusters");
                queue.push_back(t);
            }
        }
    }
    values
}

/// Value of `Σ c_e x^e` at a rational point.
pub fn evaluate<'a>(
    terms: impl IntoIterator<Item = (&'a [i64], &'a BigInt)>,
    x: &[BigRational],
) -> BigRational {
    let mut acc = BigRational::zero();
    for (e, c) in terms {
        let mut t = BigRational::from_integer(c.clone());
        for (xi, &ei) in x.iter().zip(e) {
            if ei >= 0 {
                t *= pow(xi, ei as u32);
            } else {
                t /= pow(xi, (-ei) as u32);
            }
        }
        acc += t;
    }
    acc
}

//! Integer Laurent polynomials in `v = q^{1/2}`.
//!
//! [`LaurentScalar`] is the coefficient ring of every torus element in the
//! crate. Values are kept in canonical form (no zero coefficients), so two
//! scalars are equal exactly when their term maps are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaurentScalar {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::v_pow(0)
    }

    /// `v^k`.
    pub fn v_pow(k: i64) -> Self {
        Self::monomial(BigInt::one(), k)
    }

    /// `c * v^k`.
    pub fn monomial(c: impl Into<BigInt>, k: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds a scalar from `(exponent, coefficient)` pairs, merging repeats.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, c.into());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: i64) -> BigInt {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `Some((c, k))` when the scalar is the single term `c * v^k`.
    pub fn as_monomial(&self) -> Option<(&BigInt, i64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, c)| (c, *k))
        } else {
            None
        }
    }

    /// A unit of `Z[v, v^-1]`, i.e. `±v^k`.
    pub fn is_unit(&self) -> bool {
        self.as_monomial().is_some_and(|(c, _)| c.abs().is_one())
    }

    fn add_term(&mut self, k: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.checked_add(k).expect("v-exponent overflow"), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    /// The bar involution `v -> v^-1`.
    pub fn bar(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    /// Evaluation at `v = 1`.
    pub fn specialize_v1(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Value at `v = √p`, as `(a + b√p) / p^t` in lowest terms. Two scalars
    /// agree modulo `v^2 - p` exactly when these values are equal.
    pub fn at_sqrt(&self, p: u32) -> SqrtValue {
        let pb = BigInt::from(p);
        let min = self.min_exponent().unwrap_or(0);
        let shift = if min < 0 { (-min + 1) / 2 * 2 } else { 0 };
        let mut even = BigInt::zero();
        let mut odd = BigInt::zero();
        for (&k, c) in &self.terms {
            let k = k + shift;
            let half = u32::try_from(k / 2).expect("exponent range");
            let term = c * pb.pow(half);
            if k % 2 == 0 {
                even += term;
            } else {
                odd += term;
            }
        }
        let mut den_pow = u32::try_from(shift / 2).expect("exponent range");
        while den_pow > 0 && (&even % &pb).is_zero() && (&odd % &pb).is_zero() {
            even /= &pb;
            odd /= &pb;
            den_pow -= 1;
        }
        if even.is_zero() && odd.is_zero() {
            den_pow = 0;
        }
        SqrtValue { even, odd, den_pow }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`
    /// in `Z[v, v^-1]`.
    pub fn exact_div(&self, d: &LaurentScalar) -> Option<LaurentScalar> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        // Shift both operands to honest polynomials with nonzero constant
        // term; divisibility is then ordinary polynomial divisibility.
        let dmin = d.min_exponent()?;
        let dlead_exp = d.max_exponent()? - dmin;
        let dlead = &d.terms[&(dlead_exp + dmin)];
        let mut rem: BTreeMap<i64, BigInt> = self.terms.clone();
        let mut quot = Self::zero();
        while let Some((&top, c)) = rem.iter().next_back() {
            let rmin = *rem.keys().next().unwrap();
            // The remainder cannot get below the divisor's span.
            if top - rmin < dlead_exp {
                return None;
            }
            if !(c % dlead).is_zero() {
                return None;
            }
            let qc = c / dlead;
            let qe = top - dlead_exp - dmin;
            for (e, dc) in &d.terms {
                let key = qe + e;
                let slot = rem.entry(key).or_default();
                *slot -= &qc * dc;
                if slot.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }
}

impl From<i64> for LaurentScalar {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl From<BigInt> for LaurentScalar {
    fn from(c: BigInt) -> Self {
        Self::constant(c)
    }
}

impl Add<&LaurentScalar> for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentScalar {
    type Output = LaurentScalar;
    fn add(mut self, rhs: LaurentScalar) -> LaurentScalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentScalar> for LaurentScalar {
    fn add_assign(&mut self, rhs: &LaurentScalar) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, c.clone());
        }
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

impl Neg for LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        -&self
    }
}

impl Sub<&LaurentScalar> for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, -c);
        }
        out
    }
}

impl Sub for LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: LaurentScalar) -> LaurentScalar {
        &self - &rhs
    }
}

impl Mul<&LaurentScalar> for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = LaurentScalar::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.checked_add(*b).expect("v-exponent overflow"), ca * cb);
            }
        }
        out
    }
}

impl Mul for LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: LaurentScalar) -> LaurentScalar {
        &self * &rhs
    }
}

/// Balanced quantum binomial `[n k]` in base `v`, via the q-Pascal rule
/// `[n k] = v^k [n-1 k] + v^(k-n) [n-1 k-1]`.
pub fn qbinomial(n: i64, k: i64) -> Result<LaurentScalar> {
    if n < 0 || k < 0 || k > n {
        return Err(Error::Domain(format!("qbinomial({n}, {k}) requires 0 <= k <= n")));
    }
    let (n, k) = (n as usize, k as usize);
    // row[j] holds [i j] for the current i.
    let mut row = vec![LaurentScalar::one()];
    for i in 1..=n {
        let mut next = Vec::with_capacity(i + 1);
        for j in 0..=i.min(k) {
            let mut entry = LaurentScalar::zero();
            if j < i {
                entry += &row[j].shift(j as i64);
            }
            if j > 0 {
                entry += &row[j - 1].shift(j as i64 - i as i64);
            }
            next.push(entry);
        }
        row = next;
    }
    Ok(row[k].clone())
}

/// A number `(even + odd·√p) / p^den_pow` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SqrtValue {
    pub even: BigInt,
    pub odd: BigInt,
    pub den_pow: u32,
}

impl SqrtValue {
    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }
}

pub fn specialize_v1(a: &LaurentScalar) -> BigInt {
    a.specialize_v1()
}

impl fmt::Display for LaurentScalar {
    /// Prints terms with descending exponents, e.g. `3*v^2 - v + 2 - v^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if *k == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            if *k == 1 {
                f.write_str("v")?;
            } else {
                write!(f, "v^{k}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentScalar {
    type Err = Error;

    /// Accepts the printed form and looser variants such as `2v^1`,
    /// `-1*v^0`, or `v^-3 + v^-3`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("{why} in scalar {s:?}"));
        let chars: Vec<char> = s.chars().collect();
        let mut i = 0;
        let skip_ws = |i: &mut usize| {
            while *i < chars.len() && chars[*i].is_whitespace() {
                *i += 1;
            }
        };
        let read_int = |i: &mut usize| -> Option<BigInt> {
            let start = *i;
            while *i < chars.len() && chars[*i].is_ascii_digit() {
                *i += 1;
            }
            if start == *i {
                None
            } else {
                chars[start..*i].iter().collect::<String>().parse().ok()
            }
        };
        let mut out = LaurentScalar::zero();
        let mut first = true;
        skip_ws(&mut i);
        if i == chars.len() {
            return Err(bad("empty input"));
        }
        while i < chars.len() {
            let mut sign = BigInt::one();
            // A term starts with an operator (optional for the first term),
            // optionally followed by one more sign as in `a + -b`.
            let mut signs = 0;
            while i < chars.len() && (chars[i] == '+' || chars[i] == '-') && signs < 2 {
                if chars[i] == '-' {
                    sign = -sign;
                }
                signs += 1;
                i += 1;
                skip_ws(&mut i);
            }
            if signs == 0 && !first {
                return Err(bad("expected '+' or '-'"));
            }
            first = false;
            let coeff = read_int(&mut i);
            skip_ws(&mut i);
            let mut exp = 0i64;
            let mut has_v = false;
            if i < chars.len() && chars[i] == '*' {
                if coeff.is_none() {
                    return Err(bad("'*' without coefficient"));
                }
                i += 1;
                skip_ws(&mut i);
                if i >= chars.len() || chars[i] != 'v' {
                    return Err(bad("expected 'v' after '*'"));
                }
            }
            if i < chars.len() && chars[i] == 'v' {
                has_v = true;
                exp = 1;
                i += 1;
                if i < chars.len() && chars[i] == '^' {
                    i += 1;
                    let mut neg = false;
                    if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                        neg = chars[i] == '-';
                        i += 1;
                    }
                    let e = read_int(&mut i).ok_or_else(|| bad("missing exponent"))?;
                    let e: i64 = e.try_into().map_err(|_| bad("exponent out of range"))?;
                    exp = if neg { -e } else { e };
                }
            }
            let c = match (coeff, has_v) {
                (Some(c), _) => c,
                (None, true) => BigInt::one(),
                (None, false) => return Err(bad("empty term")),
            };
            out.add_term(exp, sign * c);
            skip_ws(&mut i);
        }
        Ok(out)
    }
}

impl Serialize for LaurentScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LaurentScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

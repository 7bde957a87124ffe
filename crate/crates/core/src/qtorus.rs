//! The based quantum torus attached to a skew-symmetric form.
//!
//! Elements are stored in the distinguished basis `X^e`, with
//! `X^e X^f = v^{Λ(e,f)} X^{e+f}` (the half-integer power of `q` is a whole
//! power of `v`). Frame monomials of the initial frame coincide with the basis
//! elements; [`SkewForm::ordered_monomial`] gives the unnormalized ordered
//! products `X_1^{c_1} ... X_m^{c_m}` for comparison.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::qscalar::LaurentScalar;

/// A skew-symmetric integer form on `Z^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewForm {
    matrix: IntMatrix,
}

impl SkewForm {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() || matrix.rows() == 0 {
            return Err(Error::Dimension(format!(
                "skew form must be a nonempty square matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        for i in 0..matrix.rows() {
            for j in 0..=i {
                if matrix[(i, j)] != -matrix[(j, i)] {
                    return Err(Error::Domain(format!(
                        "form is not skew-symmetric at ({}, {})",
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

    pub fn zero(m: usize) -> Self {
        Self { matrix: IntMatrix::zeros(m, m) }
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[(i, j)]
    }

    /// `e^T Λ f`.
    pub fn eval(&self, e: &[i64], f: &[i64]) -> Result<i64> {
        let m = self.size();
        if e.len() != m || f.len() != m {
            return Err(Error::Dimension(format!(
                "skew form of size {m} applied to vectors of length {} and {}",
                e.len(),
                f.len()
            )));
        }
        Ok(self.eval_unchecked(e, f))
    }

    pub(crate) fn eval_unchecked(&self, e: &[i64], f: &[i64]) -> i64 {
        let mut acc = 0;
        for (i, &ei) in e.iter().enumerate() {
            if ei == 0 {
                continue;
            }
            let row = self.matrix.row(i);
            let dot: i64 = row.iter().zip(f).map(|(a, b)| a * b).sum();
            acc += ei * dot;
        }
        acc
    }

    fn check_rank(&self, a: &TorusElement) -> Result<()> {
        if a.rank != self.size() {
            return Err(Error::Dimension(format!(
                "torus element of rank {} used with a form of size {}",
                a.rank,
                self.size()
            )));
        }
        Ok(())
    }

    /// Twisted product in the quantum torus.
    pub fn mul(&self, a: &TorusElement, b: &TorusElement) -> Result<TorusElement> {
        self.check_rank(a)?;
        self.check_rank(b)?;
        let mut out = TorusElement::zero(a.rank);
        for (e, ca) in &a.terms {
            for (f, cb) in &b.terms {
                let twist = self.eval_unchecked(e, f);
                let exp: Vec<i64> = e.iter().zip(f).map(|(x, y)| x + y).collect();
                out.add_term(exp, (ca * cb).shift(twist));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, a: &TorusElement, n: u32) -> Result<TorusElement> {
        let mut out = TorusElement::one(a.rank);
        for _ in 0..n {
            out = self.mul(&out, a)?;
        }
        Ok(out)
    }

    /// The frame monomial `M(c)` of the initial frame.
    ///
    /// `M(c)` is the ordered product `X_1^{c_1} ... X_m^{c_m}` rescaled by
    /// `v^{Σ_{i<j} c_i c_j λ_ji}`; in the `X^e` basis this is exactly `X^c`.
    pub fn frame_monomial(&self, c: &[i64]) -> Result<TorusElement> {
        if c.len() != self.size() {
            return Err(Error::Dimension(format!(
                "frame monomial exponent of length {} for rank {}",
                c.len(),
                self.size()
            )));
        }
        Ok(TorusElement::basis(c.to_vec()))
    }

    /// The normalizing exponent `Σ_{i<j} c_i c_j λ_ji` of a frame monomial.
    pub fn normalization(&self, c: &[i64]) -> i64 {
        let mut acc = 0;
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                acc += c[i] * c[j] * self.matrix[(j, i)];
            }
        }
        acc
    }

    /// The ordered product `X_1^{c_1} ... X_m^{c_m}` of the generators,
    /// computed with the twisted multiplication.
    pub fn ordered_monomial(&self, c: &[i64]) -> Result<TorusElement> {
        let m = self.size();
        if c.len() != m {
            return Err(Error::Dimension(format!("monomial exponent of length {} for rank {m}", c.len())));
        }
        let mut out = TorusElement::one(m);
        for (i, &ci) in c.iter().enumerate() {
            let mut unit = vec![0; m];
            unit[i] = ci.signum();
            let gen = TorusElement::basis(unit);
            for _ in 0..ci.unsigned_abs() {
                out = self.mul(&out, &gen)?;
            }
        }
        Ok(out)
    }

    /// Asserts `M(c) M(d) = v^{Λ(c,d)} M(c+d)` and
    /// `M(c) M(d) = v^{2Λ(c,d)} M(d) M(c)`, with the frame monomials built
    /// from ordered products of generators.
    pub fn check_frame_product(&self, c: &[i64], d: &[i64]) -> Result<()> {
        let lam = self.eval(c, d)?;
        let frame = |x: &[i64]| -> Result<TorusElement> {
            Ok(self.ordered_monomial(x)?.scale_v(self.normalization(x)))
        };
        let mc = frame(c)?;
        let md = frame(d)?;
        let sum: Vec<i64> = c.iter().zip(d).map(|(a, b)| a + b).collect();
        let lhs = self.mul(&mc, &md)?;
        let rhs = frame(&sum)?.scale_v(lam);
        if lhs != rhs {
            return Err(Error::Verification(format!(
                "M(c)M(d) = {lhs} but v^{lam} M(c+d) = {rhs} for c={c:?}, d={d:?}"
            )));
        }
        let swapped = self.mul(&md, &mc)?.scale_v(2 * lam);
        if lhs != swapped {
            return Err(Error::Verification(format!(
                "M(c)M(d) = {lhs} but v^{} M(d)M(c) = {swapped} for c={c:?}, d={d:?}",
                2 * lam
            )));
        }
        if mc != TorusElement::basis(c.to_vec()) {
            return Err(Error::Verification(format!(
                "normalized ordered monomial for {c:?} is {mc}, not the basis element"
            )));
        }
        Ok(())
    }

    /// The unique `Q` with `Q * d = p`.
    ///
    /// Cancels lexicographically leading terms. Every exponent of `Q` must lie
    /// in the box `[min(p) - min(d), max(p) - max(d)]` coordinatewise (Newton
    /// polytopes add under multiplication), which bounds the search.
    pub fn exact_div(&self, p: &TorusElement, d: &TorusElement) -> Result<TorusElement> {
        self.check_rank(p)?;
        self.check_rank(d)?;
        if d.is_zero() {
            return Err(Error::NotDivisible("division by zero".into()));
        }
        let m = p.rank;
        if p.is_zero() {
            return Ok(TorusElement::zero(m));
        }
        let (p_lo, p_hi) = p.exponent_box();
        let (d_lo, d_hi) = d.exponent_box();
        let lo: Vec<i64> = p_lo.iter().zip(&d_lo).map(|(a, b)| a - b).collect();
        let hi: Vec<i64> = p_hi.iter().zip(&d_hi).map(|(a, b)| a - b).collect();
        let (d_exp, d_coeff) = d.leading_term().expect("nonzero divisor");
        let d_exp = d_exp.to_vec();
        let d_coeff = d_coeff.clone();

        let mut rem = p.clone();
        let mut quot = TorusElement::zero(m);
        while let Some((r_exp, r_coeff)) = rem.leading_term() {
            let q_exp: Vec<i64> = r_exp.iter().zip(&d_exp).map(|(a, b)| a - b).collect();
            if q_exp.iter().zip(lo.iter().zip(&hi)).any(|(x, (l, h))| x < l || x > h) {
                return Err(Error::NotDivisible(format!(
                    "remainder term at {r_exp:?} is unreachable from divisor leading term {d_exp:?}"
                )));
            }
            let twist = self.eval_unchecked(&q_exp, &d_exp);
            let q_coeff = r_coeff.exact_div(&d_coeff.shift(twist)).ok_or_else(|| {
                Error::NotDivisible(format!(
                    "coefficient {r_coeff} at {r_exp:?} is not divisible by {d_coeff}"
                ))
            })?;
            let step = TorusElement::monomial(q_exp.clone(), q_coeff.clone());
            rem = &rem - &self.mul(&step, d)?;
            quot.add_term(q_exp, q_coeff);
        }
        Ok(quot)
    }
}

/// An element of the based quantum torus: a finite sum of `c_e X^e`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorusElement {
    rank: usize,
    terms: BTreeMap<Vec<i64>, LaurentScalar>,
}

impl TorusElement {
    pub fn zero(rank: usize) -> Self {
        Self { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::basis(vec![0; rank])
    }

    /// The basis element `X^e`.
    pub fn basis(exp: Vec<i64>) -> Self {
        Self::monomial(exp, LaurentScalar::one())
    }

    pub fn monomial(exp: Vec<i64>, coeff: LaurentScalar) -> Self {
        let mut out = Self::zero(exp.len());
        out.add_term(exp, coeff);
        out
    }

    pub fn from_terms(
        rank: usize,
        terms: impl IntoIterator<Item = (Vec<i64>, LaurentScalar)>,
    ) -> Result<Self> {
        let mut out = Self::zero(rank);
        for (e, c) in terms {
            if e.len() != rank {
                return Err(Error::Dimension(format!("exponent {e:?} does not have length {rank}")));
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[i64], &LaurentScalar)> + '_ {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exp: &[i64]) -> LaurentScalar {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&[i64], &LaurentScalar)> {
        self.terms.iter().next_back().map(|(e, c)| (e.as_slice(), c))
    }

    /// `Some(exponent)` when the element is the single basis vector `X^e`.
    pub fn as_basis(&self) -> Option<&[i64]> {
        match self.terms.iter().next() {
            Some((e, c)) if self.terms.len() == 1 && c.is_one() => Some(e),
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, exp: Vec<i64>, coeff: LaurentScalar) {
        debug_assert_eq!(exp.len(), self.rank);
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(slot) => {
                *slot += &coeff;
                if slot.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, coeff);
            }
        }
    }

    /// Multiplies every coefficient by a central scalar.
    pub fn scale(&self, c: &LaurentScalar) -> Self {
        let mut out = Self::zero(self.rank);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    /// Multiplies by `v^k`.
    pub fn scale_v(&self, k: i64) -> Self {
        Self { rank: self.rank, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.shift(k))).collect() }
    }

    /// Coordinatewise minimum and maximum over the support.
    pub fn exponent_box(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = vec![i64::MAX; self.rank];
        let mut hi = vec![i64::MIN; self.rank];
        for e in self.terms.keys() {
            for (i, &x) in e.iter().enumerate() {
                lo[i] = lo[i].min(x);
                hi[i] = hi[i].max(x);
            }
        }
        (lo, hi)
    }

    /// True when every coefficient has only nonnegative integer coefficients.
    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.terms().all(|(_, x)| *x >= BigInt::zero()))
    }

    /// First exponent (in term order) where `self` and `other` differ after
    /// substituting `v = √p`, or `None` if they agree modulo `v^2 - p`.
    pub fn mismatch_at_sqrt(&self, other: &TorusElement, p: u32) -> Option<Vec<i64>> {
        check_same_rank(self, other);
        let diff = self - other;
        diff.terms.iter().find(|(_, c)| !c.at_sqrt(p).is_zero()).map(|(e, _)| e.clone())
    }

    pub fn specialize_commutative(&self) -> CommLaurent {
        let mut out = CommLaurent::zero(self.rank);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.specialize_v1());
        }
        out
    }
}

fn check_same_rank(a: &TorusElement, b: &TorusElement) {
    assert_eq!(a.rank, b.rank, "torus elements of different ranks");
}

impl AddAssign<&TorusElement> for TorusElement {
    fn add_assign(&mut self, rhs: &TorusElement) {
        check_same_rank(self, rhs);
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl Add<&TorusElement> for &TorusElement {
    type Output = TorusElement;
    fn add(self, rhs: &TorusElement) -> TorusElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for &TorusElement {
    type Output = TorusElement;
    fn neg(self) -> TorusElement {
        TorusElement { rank: self.rank, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Sub<&TorusElement> for &TorusElement {
    type Output = TorusElement;
    fn sub(self, rhs: &TorusElement) -> TorusElement {
        check_same_rank(self, rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})X^{e:?}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<i64>,
    coeff: LaurentScalar,
}

#[derive(Serialize, Deserialize)]
struct TorusJson {
    rank: usize,
    terms: Vec<TermJson>,
}

impl Serialize for TorusElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TorusJson {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| TermJson { exp: e.clone(), coeff: c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorusElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = TorusJson::deserialize(d)?;
        TorusElement::from_terms(raw.rank, raw.terms.into_iter().map(|t| (t.exp, t.coeff)))
            .map_err(serde::de::Error::custom)
    }
}

/// A commutative Laurent polynomial over `Z` in `m` variables, the image of
/// the torus at `v = 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CommLaurent {
    rank: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl CommLaurent {
    pub fn zero(rank: usize) -> Self {
        Self { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        let mut out = Self::zero(rank);
        out.add_term(vec![0; rank], BigInt::one());
        out
    }

    pub fn monomial(exp: Vec<i64>, c: impl Into<BigInt>) -> Self {
        let mut out = Self::zero(exp.len());
        out.add_term(exp, c.into());
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn add_term(&mut self, exp: Vec<i64>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn add(&self, other: &CommLaurent) -> CommLaurent {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &CommLaurent) -> CommLaurent {
        let mut out = CommLaurent::zero(self.rank);
        for (e, a) in &self.terms {
            for (f, b) in &other.terms {
                out.add_term(e.iter().zip(f).map(|(x, y)| x + y).collect(), a * b);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    #![allow(clippy::needless_range_loop)]
    use super::*;
    use proptest::prelude::*;

    fn lp(s: &str) -> LaurentScalar {
        s.parse().unwrap()
    }

    fn std_form() -> SkewForm {
        SkewForm::from_rows(&[vec![0, 1], vec![-1, 0]]).unwrap()
    }

    fn x(e: &[i64]) -> TorusElement {
        TorusElement::basis(e.to_vec())
    }

    #[test]
    fn rejects_non_skew() {
        assert!(SkewForm::from_rows(&[vec![0, 1], vec![1, 0]]).is_err());
        assert!(SkewForm::from_rows(&[vec![1, 0], vec![0, 0]]).is_err());
    }

    #[test]
    fn skew_eval_examples() {
        let l = std_form();
        assert_eq!(l.eval(&[1, 0], &[0, 1]).unwrap(), 1);
        assert_eq!(l.eval(&[2, -7], &[2, -7]).unwrap(), 0);
        assert_eq!(l.eval(&[2, 3], &[1, 1]).unwrap(), -1);
        assert!(matches!(l.eval(&[1], &[0, 1]), Err(Error::Dimension(_))));
    }

    #[test]
    fn twisted_product_examples() {
        let l = std_form();
        assert_eq!(l.mul(&x(&[1, 0]), &x(&[0, 1])).unwrap(), x(&[1, 1]).scale_v(1));
        assert_eq!(l.mul(&x(&[0, 1]), &x(&[1, 0])).unwrap(), x(&[1, 1]).scale_v(-1));
        let sum = &x(&[1, 0]) + &x(&[0, 1]);
        let expected = &x(&[0, 0]) + &x(&[-1, 1]).scale_v(1);
        assert_eq!(l.mul(&sum, &x(&[-1, 0])).unwrap(), expected);
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let l = std_form();
        assert!(matches!(l.mul(&x(&[1]), &x(&[0, 1])), Err(Error::Dimension(_))));
    }

    #[test]
    fn frame_monomial_normalization() {
        let l = std_form(); // λ21 = -1
        assert_eq!(l.frame_monomial(&[1, 0]).unwrap(), x(&[1, 0]));
        assert_eq!(l.normalization(&[1, 0]), 0);
        assert_eq!(l.normalization(&[1, 1]), -1);
        assert_eq!(l.normalization(&[2, 1]), -2);
        // X_1 X_2 = v X^(1,1), so v^-1 X_1 X_2 is the basis element.
        assert_eq!(l.ordered_monomial(&[1, 1]).unwrap(), x(&[1, 1]).scale_v(1));
        assert_eq!(l.ordered_monomial(&[2, 1]).unwrap(), x(&[2, 1]).scale_v(2));
        assert_eq!(l.frame_monomial(&[2, 1]).unwrap(), x(&[2, 1]));
    }

    #[test]
    fn frame_product_check() {
        let l = std_form();
        l.check_frame_product(&[1, 2], &[1, 2]).unwrap();
        l.check_frame_product(&[1, 0], &[0, 1]).unwrap();
        assert_eq!(l.eval(&[1, 0], &[0, 1]).unwrap(), 1);
    }

    #[test]
    fn exact_div_examples() {
        let l = std_form();
        let d = &x(&[0, 1]) + &x(&[3, -1]).scale(&lp("v + 2"));
        assert!(l.exact_div(&d, &d).unwrap() == TorusElement::one(2));
        let p = x(&[1, 1]).scale_v(1);
        assert_eq!(l.exact_div(&p, &x(&[0, 1])).unwrap(), x(&[1, 0]));
        // Monomials are units, so any element is divisible by X^{e1}.
        let p = &x(&[0, 1]) + &TorusElement::one(2);
        let q = l.exact_div(&p, &x(&[1, 0])).unwrap();
        assert_eq!(l.mul(&q, &x(&[1, 0])).unwrap(), p);
        let p = &x(&[1, 0]) + &TorusElement::one(2);
        let d = &x(&[1, 0]) + &x(&[0, 1]);
        assert!(matches!(l.exact_div(&p, &d), Err(Error::NotDivisible(_))));
    }

    #[test]
    fn specialization_examples() {
        let s = x(&[1, 1]).scale_v(1).specialize_commutative();
        assert_eq!(s, CommLaurent::monomial(vec![1, 1], 1));
        let s = x(&[1, 0]).scale(&lp("v + v^-1")).specialize_commutative();
        assert_eq!(s, CommLaurent::monomial(vec![1, 0], 2));
        assert!(TorusElement::zero(2).specialize_commutative().is_zero());
    }

    #[test]
    fn json_format() {
        let a = &x(&[0, 1]) + &x(&[-1, 0]).scale(&lp("v^2 - 3"));
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"rank":2,"terms":[{"exp":[-1,0],"coeff":"v^2 - 3"},{"exp":[0,1],"coeff":"1"}]}"#);
        let back: TorusElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
        assert!(
            serde_json::from_str::<TorusElement>(r#"{"rank":2,"terms":[{"exp":[1],"coeff":"1"}]}"#).is_err()
        );
    }

    fn arb_form(m: usize) -> impl Strategy<Value = SkewForm> {
        prop::collection::vec(-2i64..=2, m * (m - 1) / 2).prop_map(move |upper| {
            let mut rows = vec![vec![0; m]; m];
            let mut it = upper.into_iter();
            for i in 0..m {
                for j in i + 1..m {
                    let v = it.next().unwrap();
                    rows[i][j] = v;
                    rows[j][i] = -v;
                }
            }
            SkewForm::from_rows(&rows).unwrap()
        })
    }

    fn arb_element(m: usize) -> impl Strategy<Value = TorusElement> {
        prop::collection::vec(
            (prop::collection::vec(-2i64..=2, m), prop::collection::vec((-2i64..=2, -3i64..=3), 1..3)),
            0..4,
        )
        .prop_map(move |terms| {
            TorusElement::from_terms(m, terms.into_iter().map(|(e, c)| (e, LaurentScalar::from_terms(c))))
                .unwrap()
        })
    }

    fn arb_case() -> impl Strategy<Value = (SkewForm, TorusElement, TorusElement, TorusElement)> {
        (1usize..=4).prop_flat_map(|m| (arb_form(m), arb_element(m), arb_element(m), arb_element(m)))
    }

    proptest! {
        #[test]
        fn multiplication_is_associative((l, a, b, c) in arb_case()) {
            let left = l.mul(&l.mul(&a, &b).unwrap(), &c).unwrap();
            let right = l.mul(&a, &l.mul(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn division_round_trip((l, q, d, _) in arb_case()) {
            prop_assume!(!d.is_zero());
            let p = l.mul(&q, &d).unwrap();
            prop_assert_eq!(l.exact_div(&p, &d).unwrap(), q);
        }

        #[test]
        fn specialization_is_a_ring_map((l, a, b, _) in arb_case()) {
            let prod = l.mul(&a, &b).unwrap().specialize_commutative();
            prop_assert_eq!(prod, a.specialize_commutative().mul(&b.specialize_commutative()));
            let sum = (&a + &b).specialize_commutative();
            prop_assert_eq!(sum, a.specialize_commutative().add(&b.specialize_commutative()));
        }

        #[test]
        fn frame_relations_hold(
            (l, c, d) in (1usize..=4).prop_flat_map(|m| (
                arb_form(m),
                prop::collection::vec(-3i64..=3, m),
                prop::collection::vec(-3i64..=3, m),
            ))
        ) {
            prop_assert!(l.check_frame_product(&c, &d).is_ok());
        }
    }
}

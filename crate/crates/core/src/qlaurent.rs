//! Exact Laurent polynomials and truncated power series in `q^{1/4}`.
//!
//! Every exponent is stored as an integer count of quarter powers of `q`, so
//! `q^{L-1/2}` and the quadratic-form prefactors `q^{m·C·m/4}` are represented
//! without any rational arithmetic. Coefficients are arbitrary-precision.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An exponent of `q` measured in quarter units.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent(i64);

impl Exponent {
    pub const ZERO: Exponent = Exponent(0);

    pub const fn from_quarters(quarters: i64) -> Self {
        Exponent(quarters)
    }

    /// `q^n` for an integer power `n`.
    pub const fn from_int(n: i64) -> Self {
        Exponent(4 * n)
    }

    /// `q^{h/2}`.
    pub const fn from_halves(h: i64) -> Self {
        Exponent(2 * h)
    }

    pub const fn quarters(self) -> i64 {
        self.0
    }

    pub const fn is_integral(self) -> bool {
        self.0 % 4 == 0
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, rhs: Exponent) -> Exponent {
        Exponent(self.0 + rhs.0)
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    fn sub(self, rhs: Exponent) -> Exponent {
        Exponent(self.0 - rhs.0)
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-self.0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.0.gcd(&4);
        let (num, den) = (self.0 / g, 4 / g);
        if den == 1 {
            write!(f, "{num}")
        } else {
            write!(f, "{num}/{den}")
        }
    }
}

type Term = (i64, BigInt);

/// A sparse Laurent polynomial in `q^{1/4}` with integer coefficients.
///
/// Terms are kept sorted by exponent with no zero coefficients, so structural
/// equality is mathematical equality. Cloning is cheap: the term list is shared.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QLaurent {
    terms: Arc<[Term]>,
}

impl Default for QLaurent {
    fn default() -> Self {
        QLaurent::zero()
    }
}

impl QLaurent {
    pub fn zero() -> Self {
        QLaurent {
            terms: Arc::from(Vec::new()),
        }
    }

    pub fn one() -> Self {
        QLaurent::monomial(Exponent::ZERO, BigInt::one())
    }

    /// `q^e`.
    pub fn q_pow(e: Exponent) -> Self {
        QLaurent::monomial(e, BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        QLaurent::monomial(Exponent::ZERO, c.into())
    }

    pub fn monomial(e: Exponent, coeff: BigInt) -> Self {
        if coeff.is_zero() {
            return QLaurent::zero();
        }
        QLaurent {
            terms: Arc::from(vec![(e.0, coeff)]),
        }
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// merging repeated exponents and dropping zeros.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, C)>,
        C: Into<BigInt>,
    {
        let mut raw: Vec<Term> = terms.into_iter().map(|(e, c)| (e.0, c.into())).collect();
        raw.sort_by_key(|t| t.0);
        Self::from_sorted(raw)
    }

    /// Integer-exponent polynomial from a dense coefficient list `c[k] q^k`.
    pub fn from_int_coeffs<C: Into<BigInt> + Clone>(coeffs: &[C]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (Exponent::from_int(k as i64), c.clone().into())),
        )
    }

    fn from_sorted(raw: Vec<Term>) -> Self {
        let mut out: Vec<Term> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if lc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((e, c));
                }
            }
        }
        if matches!(out.last(), Some((_, c)) if c.is_zero()) {
            out.pop();
        }
        QLaurent {
            terms: Arc::from(out),
        }
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

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Exponent, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (Exponent(*e), c))
    }

    pub fn coeff(&self, e: Exponent) -> BigInt {
        match self.terms.binary_search_by_key(&e.0, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn min_exponent(&self) -> Option<Exponent> {
        self.terms.first().map(|t| Exponent(t.0))
    }

    pub fn max_exponent(&self) -> Option<Exponent> {
        self.terms.last().map(|t| Exponent(t.0))
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: Exponent) -> Self {
        if e.0 == 0 {
            return self.clone();
        }
        QLaurent {
            terms: self.terms.iter().map(|(x, c)| (x + e.0, c.clone())).collect(),
        }
    }

    /// The classical `q = 1` specialization.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.iter().map(|t| &t.1).sum()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return QLaurent::zero();
        }
        QLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// Drops every term with exponent above `cutoff`.
    pub fn truncate(&self, cutoff: Exponent) -> Self {
        let end = self.terms.partition_point(|t| t.0 <= cutoff.0);
        if end == self.terms.len() {
            return self.clone();
        }
        QLaurent {
            terms: Arc::from(&self.terms[..end]),
        }
    }

    /// True when every coefficient is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.iter().all(|t| !t.1.is_negative())
    }

    /// Lowest exponent at which `self` and `other` differ, with both coefficients.
    pub fn first_difference(&self, other: &QLaurent) -> Option<(Exponent, BigInt, BigInt)> {
        let (mut i, mut j) = (0, 0);
        let (x, y) = (&self.terms, &other.terms);
        loop {
            match (x.get(i), y.get(j)) {
                (None, None) => return None,
                (Some((e, c)), None) => return Some((Exponent(*e), c.clone(), BigInt::zero())),
                (None, Some((e, c))) => return Some((Exponent(*e), BigInt::zero(), c.clone())),
                (Some((ex, cx)), Some((ey, cy))) => {
                    if ex < ey {
                        return Some((Exponent(*ex), cx.clone(), BigInt::zero()));
                    } else if ey < ex {
                        return Some((Exponent(*ey), BigInt::zero(), cy.clone()));
                    } else if cx != cy {
                        return Some((Exponent(*ex), cx.clone(), cy.clone()));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }

    /// Exact division. Fails if `divisor` does not divide `self` in the ring of
    /// Laurent polynomials over the integers.
    pub fn div_exact(&self, divisor: &QLaurent) -> Result<QLaurent> {
        let (Some(&(dmin, _)), Some(&(dmax, _))) = (divisor.terms.first(), divisor.terms.last())
        else {
            return Err(Error::DivisionByZero);
        };
        let (Some(&(smin, _)), Some(&(smax, _))) = (self.terms.first(), self.terms.last()) else {
            return Ok(QLaurent::zero());
        };
        if smax - smin < dmax - dmin {
            return Err(Error::InexactDivision);
        }
        let g = exponent_stride(&self.terms, &divisor.terms);
        let slot = |e: i64, base: i64| ((e - base) / g) as usize;

        let mut rem = vec![BigInt::zero(); slot(smax, smin) + 1];
        for (e, c) in self.terms.iter() {
            rem[slot(*e, smin)] = c.clone();
        }
        let dense: Vec<(usize, &BigInt)> =
            divisor.terms.iter().map(|(e, c)| (slot(*e, dmin), c)).collect();
        let lead = dense[0].1;
        let qlen = slot(smax - (dmax - dmin), smin) + 1;

        let mut quotient: Vec<Term> = Vec::new();
        for k in 0..qlen {
            if rem[k].is_zero() {
                continue;
            }
            let (qc, r) = rem[k].div_rem(lead);
            if !r.is_zero() {
                return Err(Error::InexactDivision);
            }
            for (t, dc) in dense.iter() {
                rem[k + t] -= &qc * *dc;
            }
            quotient.push((smin - dmin + k as i64 * g, qc));
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::InexactDivision);
        }
        Ok(QLaurent {
            terms: Arc::from(quotient),
        })
    }

    pub fn pow(&self, k: u32) -> QLaurent {
        let mut acc = QLaurent::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

fn add_sorted(x: &[Term], y: &[Term], negate_y: bool) -> Vec<Term> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    let take_y = |c: &BigInt| if negate_y { -c } else { c.clone() };
    while i < x.len() && j < y.len() {
        let (ex, cx) = &x[i];
        let (ey, cy) = &y[j];
        if ex < ey {
            out.push((*ex, cx.clone()));
            i += 1;
        } else if ey < ex {
            out.push((*ey, take_y(cy)));
            j += 1;
        } else {
            let s = if negate_y { cx - cy } else { cx + cy };
            if !s.is_zero() {
                out.push((*ex, s));
            }
            i += 1;
            j += 1;
        }
    }
    out.extend(x[i..].iter().cloned());
    out.extend(y[j..].iter().map(|(e, c)| (*e, take_y(c))));
    out
}

fn exponent_stride(x: &[Term], y: &[Term]) -> i64 {
    let mut g = 0i64;
    for t in x.iter().skip(1) {
        g = g.gcd(&(t.0 - x[0].0));
    }
    for t in y.iter().skip(1) {
        g = g.gcd(&(t.0 - y[0].0));
    }
    g.max(1)
}

/// Product through a dense buffer on the common exponent stride. Uses `i128`
/// accumulation when every coefficient fits in `i64`, falling back to `BigInt`
/// on overflow.
fn mul_sorted(x: &[Term], y: &[Term]) -> Vec<Term> {
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    let stride = exponent_stride(x, y);
    let base = x[0].0 + y[0].0;
    let span = ((x[x.len() - 1].0 - x[0].0) + (y[y.len() - 1].0 - y[0].0)) / stride;
    let len = span as usize + 1;
    let index = |ex: i64, ey: i64| ((ex + ey - base) / stride) as usize;

    let small_x: Option<Vec<i64>> = x.iter().map(|t| t.1.to_i64()).collect();
    let small_y: Option<Vec<i64>> = y.iter().map(|t| t.1.to_i64()).collect();
    if let (Some(sx), Some(sy)) = (small_x, small_y) {
        let mut acc = vec![0i128; len];
        let mut overflow = false;
        'outer: for (a, (ex, _)) in sx.iter().zip(x) {
            for (b, (ey, _)) in sy.iter().zip(y) {
                let slot = &mut acc[index(*ex, *ey)];
                match slot.checked_add(*a as i128 * *b as i128) {
                    Some(v) => *slot = v,
                    None => {
                        overflow = true;
                        break 'outer;
                    }
                }
            }
        }
        if !overflow {
            return acc
                .into_iter()
                .enumerate()
                .filter(|(_, c)| *c != 0)
                .map(|(k, c)| (base + k as i64 * stride, BigInt::from(c)))
                .collect();
        }
    }

    let mut acc = vec![BigInt::zero(); len];
    for (ex, cx) in x {
        for (ey, cy) in y {
            acc[index(*ex, *ey)] += cx * cy;
        }
    }
    acc.into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (base + k as i64 * stride, c))
        .collect()
}

impl Add<&QLaurent> for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        QLaurent {
            terms: Arc::from(add_sorted(&self.terms, &rhs.terms, false)),
        }
    }
}

impl Sub<&QLaurent> for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        if rhs.is_zero() {
            return self.clone();
        }
        QLaurent {
            terms: Arc::from(add_sorted(&self.terms, &rhs.terms, true)),
        }
    }
}

impl Mul<&QLaurent> for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        QLaurent {
            terms: Arc::from(mul_sorted(&self.terms, &rhs.terms)),
        }
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QLaurent> for QLaurent {
            type Output = QLaurent;
            fn $m(self, rhs: QLaurent) -> QLaurent {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QLaurent> for QLaurent {
            type Output = QLaurent;
            fn $m(self, rhs: &QLaurent) -> QLaurent {
                (&self).$m(rhs)
            }
        }
        impl $tr<QLaurent> for &QLaurent {
            type Output = QLaurent;
            fn $m(self, rhs: QLaurent) -> QLaurent {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        -&self
    }
}

impl AddAssign<&QLaurent> for QLaurent {
    fn add_assign(&mut self, rhs: &QLaurent) {
        *self = &*self + rhs;
    }
}

impl AddAssign<QLaurent> for QLaurent {
    fn add_assign(&mut self, rhs: QLaurent) {
        *self = &*self + &rhs;
    }
}

impl std::iter::Sum for QLaurent {
    fn sum<I: Iterator<Item = QLaurent>>(iter: I) -> QLaurent {
        // gather then merge once; repeated pairwise adds are quadratic
        let mut raw: Vec<Term> = Vec::new();
        for p in iter {
            raw.extend(p.terms.iter().cloned());
        }
        raw.sort_by_key(|t| t.0);
        QLaurent::from_sorted(raw)
    }
}

fn fmt_term(f: &mut fmt::Formatter<'_>, first: bool, e: Exponent, c: &BigInt) -> fmt::Result {
    let neg = c.is_negative();
    let mag = c.abs();
    if first {
        if neg {
            f.write_str("-")?;
        }
    } else {
        f.write_str(if neg { " - " } else { " + " })?;
    }
    let unit = mag.is_one();
    if e.0 == 0 {
        return write!(f, "{mag}");
    }
    if !unit {
        write!(f, "{mag}*")?;
    }
    if e.0 == 4 {
        f.write_str("q")
    } else if e.is_integral() && e.0 > 0 {
        write!(f, "q^{e}")
    } else {
        write!(f, "q^({e})")
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms().enumerate() {
            fmt_term(f, k == 0, e, c)?;
        }
        Ok(())
    }
}

impl fmt::Debug for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QLaurent({self})")
    }
}

struct TermRecord<'a> {
    exp: i64,
    coeff: &'a BigInt,
}

impl Serialize for TermRecord<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Term", 2)?;
        st.serialize_field("exp_quarters", &self.exp)?;
        st.serialize_field("coeff", &self.coeff.to_string())?;
        st.end()
    }
}

/// Serialized as `[{"exp_quarters": e, "coeff": "c"}, ...]`, ascending by exponent.
impl Serialize for QLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in self.terms.iter() {
            seq.serialize_element(&TermRecord { exp: *e, coeff: c })?;
        }
        seq.end()
    }
}

/// A power series in `q^{1/4}` known exactly up to an inclusive cutoff.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    cutoff: Exponent,
    poly: QLaurent,
}

impl QSeries {
    /// Truncates `poly` at `cutoff`.
    pub fn new(poly: QLaurent, cutoff: Exponent) -> Self {
        QSeries {
            poly: poly.truncate(cutoff),
            cutoff,
        }
    }

    pub fn one(cutoff: Exponent) -> Self {
        QSeries::new(QLaurent::one(), cutoff)
    }

    pub fn cutoff(&self) -> Exponent {
        self.cutoff
    }

    /// The known terms.
    pub fn poly(&self) -> &QLaurent {
        &self.poly
    }

    pub fn coeff(&self, e: Exponent) -> BigInt {
        self.poly.coeff(e)
    }

    /// Re-truncates at a lower cutoff.
    pub fn truncate(&self, cutoff: Exponent) -> QSeries {
        assert!(
            cutoff <= self.cutoff,
            "cannot extend a series past its known cutoff"
        );
        QSeries::new(self.poly.clone(), cutoff)
    }

    pub fn shift(&self, e: Exponent) -> QSeries {
        QSeries {
            poly: self.poly.shift(e),
            cutoff: self.cutoff + e,
        }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let c = self.cutoff.min(other.cutoff);
        QSeries::new(&self.poly + &other.poly, c)
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        let c = self.cutoff.min(other.cutoff);
        QSeries::new(&self.poly - &other.poly, c)
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            poly: -&self.poly,
            cutoff: self.cutoff,
        }
    }

    /// Product known up to `min(cutoffs)`, further lowered when an operand has
    /// negative valuation.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let mut c = self.cutoff.min(other.cutoff);
        if let Some(v) = other.poly.min_exponent() {
            c = c.min(self.cutoff + v);
        }
        if let Some(v) = self.poly.min_exponent() {
            c = c.min(other.cutoff + v);
        }
        QSeries::new(truncated_mul(&self.poly, &other.poly, c), c)
    }

    pub fn scale(&self, k: &BigInt) -> QSeries {
        QSeries {
            poly: self.poly.scale(k),
            cutoff: self.cutoff,
        }
    }

    /// Lowest exponent, up to the common cutoff, where the two series differ.
    pub fn first_difference(&self, other: &QSeries) -> Option<(Exponent, BigInt, BigInt)> {
        let c = self.cutoff.min(other.cutoff);
        self.poly.truncate(c).first_difference(&other.poly.truncate(c))
    }
}

/// Product of two polynomials with terms above `cutoff` discarded early.
pub fn truncated_mul(x: &QLaurent, y: &QLaurent, cutoff: Exponent) -> QLaurent {
    let (Some(ylow), Some(xlow)) = (y.min_exponent(), x.min_exponent()) else {
        return QLaurent::zero();
    };
    let xt = x.truncate(cutoff - ylow);
    let yt = y.truncate(cutoff - xlow);
    (&xt * &yt).truncate(cutoff)
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(q^({}))", self.poly, self.cutoff + Exponent(1))
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries({self})")
    }
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("QSeries", 2)?;
        st.serialize_field("cutoff_quarters", &self.cutoff.0)?;
        st.serialize_field("terms", &self.poly)?;
        st.end()
    }
}

/// Order of a q-Pochhammer symbol `(q)_k`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PochhammerOrder {
    Finite(i64),
    Infinite,
}

/// `(q)_k = ∏_{j=1..k} (1 - q^j)` as a polynomial.
pub fn qpoch_poly(k: u32) -> QLaurent {
    let mut coeffs: Vec<i64> = vec![1];
    for j in 1..=k as usize {
        let mut next = coeffs.clone();
        next.resize(coeffs.len() + j, 0);
        for (i, c) in coeffs.iter().enumerate() {
            next[i + j] -= c;
        }
        coeffs = next;
    }
    QLaurent::from_int_coeffs(&coeffs)
}

/// `(q)_k` as a series truncated at `cutoff`; `Infinite` gives the
/// truncated product `(q)_∞`.
pub fn pochhammer(order: PochhammerOrder, cutoff: Exponent) -> Result<QSeries> {
    match order {
        PochhammerOrder::Finite(k) if k < 0 => Err(Error::NegativePochhammer(k)),
        PochhammerOrder::Finite(k) => {
            // factors with j > cutoff only touch discarded terms
            let top = (k as u64).min(cutoff.quarters().max(0) as u64 / 4) as u32;
            let mut acc = QLaurent::one();
            for j in 1..=top {
                let factor = QLaurent::from_terms([
                    (Exponent::ZERO, BigInt::one()),
                    (Exponent::from_int(j as i64), -BigInt::one()),
                ]);
                acc = truncated_mul(&acc, &factor, cutoff);
            }
            Ok(QSeries::new(acc, cutoff))
        }
        PochhammerOrder::Infinite => {
            let k = cutoff.quarters().max(0) / 4;
            pochhammer(PochhammerOrder::Finite(k), cutoff)
        }
    }
}

/// Multiplicative inverse of a power series whose lowest term is `±q^0`.
pub fn series_inverse(x: &QSeries) -> Result<QSeries> {
    let poly = x.poly();
    let c0 = match poly.terms().next() {
        Some((e, c)) if e == Exponent::ZERO && c.abs().is_one() => c.clone(),
        _ => return Err(Error::NonUnitConstant),
    };
    let n = x.cutoff().quarters();
    if n < 0 {
        return Ok(QSeries::new(QLaurent::zero(), x.cutoff()));
    }
    let n = n as usize;
    let xs: Vec<(usize, &BigInt)> = poly
        .terms()
        .skip(1)
        .map(|(e, c)| (e.quarters() as usize, c))
        .collect();
    let mut y = vec![BigInt::zero(); n + 1];
    y[0] = c0.clone();
    for k in 1..=n {
        let mut s = BigInt::zero();
        for (j, c) in xs.iter() {
            if *j > k {
                break;
            }
            if !y[k - j].is_zero() {
                s += *c * &y[k - j];
            }
        }
        // c0 is a unit equal to its own inverse
        y[k] = -(s * &c0);
    }
    let poly = QLaurent::from_terms(
        y.into_iter()
            .enumerate()
            .map(|(k, c)| (Exponent::from_quarters(k as i64), c)),
    );
    Ok(QSeries::new(poly, x.cutoff()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> QLaurent {
        QLaurent::from_int_coeffs(c)
    }

    #[test]
    fn add_examples() {
        assert!((p(&[1, 1]) + p(&[-1, -1])).is_zero());
        assert_eq!(p(&[1, 1]) + QLaurent::zero(), p(&[1, 1]));
        assert_eq!(p(&[1, 1]) + p(&[0, 1, 1]), p(&[1, 2, 1]));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(p(&[1, -1]) * p(&[1, 1]), p(&[1, 0, -1]));
        let half = QLaurent::q_pow(Exponent::from_halves(1));
        assert_eq!(&half * &half, QLaurent::q_pow(Exponent::from_int(1)));
        assert_eq!(p(&[1, 1]) * p(&[1, 1]), p(&[1, 2, 1]));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(
            QLaurent::one().shift(Exponent::from_int(-1)),
            QLaurent::q_pow(Exponent::from_int(-1))
        );
        let expect = QLaurent::from_terms([
            (Exponent::from_halves(1), 1),
            (Exponent::from_halves(3), 1),
        ]);
        assert_eq!(p(&[1, 1]).shift(Exponent::from_halves(1)), expect);
        assert_eq!(p(&[3, 0, 2]).shift(Exponent::ZERO), p(&[3, 0, 2]));
    }

    #[test]
    fn eval_at_one_examples() {
        assert_eq!(p(&[1, 1, 1]).eval_at_one(), BigInt::from(3));
        assert_eq!(QLaurent::zero().eval_at_one(), BigInt::zero());
        let x = QLaurent::from_terms([(Exponent::from_int(-1), 1), (Exponent::from_int(1), -1)]);
        assert_eq!(x.eval_at_one(), BigInt::zero());
    }

    #[test]
    fn from_terms_cancels_to_canonical_form() {
        let x = QLaurent::from_terms([
            (Exponent::from_int(2), 3),
            (Exponent::from_int(0), 1),
            (Exponent::from_int(2), -3),
        ]);
        assert_eq!(x, QLaurent::one());
        assert_eq!(x.len(), 1);
    }

    #[test]
    fn big_coefficients_fall_back_from_i128() {
        let big = BigInt::from(i64::MAX);
        let x = QLaurent::from_terms([(Exponent::ZERO, big.clone()), (Exponent::from_int(1), big.clone())]);
        let sq = &x * &x;
        assert_eq!(sq.coeff(Exponent::from_int(1)), &big * &big * 2);
        let y = QLaurent::from_terms([(Exponent::ZERO, &big * &big)]);
        let prod = &y * &y;
        assert_eq!(prod.coeff(Exponent::ZERO), (&big * &big) * (&big * &big));
    }

    #[test]
    fn pochhammer_examples() {
        let c = Exponent::from_int(10);
        assert_eq!(pochhammer(PochhammerOrder::Finite(0), c).unwrap().poly(), &QLaurent::one());
        assert_eq!(
            pochhammer(PochhammerOrder::Finite(2), c).unwrap().poly(),
            &p(&[1, -1, -1, 1])
        );
        let inf = pochhammer(PochhammerOrder::Infinite, Exponent::from_int(7)).unwrap();
        assert_eq!(inf.poly(), &p(&[1, -1, -1, 0, 0, 1, 0, 1]));
        assert!(matches!(
            pochhammer(PochhammerOrder::Finite(-1), c),
            Err(Error::NegativePochhammer(-1))
        ));
        assert_eq!(qpoch_poly(2), p(&[1, -1, -1, 1]));
    }

    #[test]
    fn series_inverse_examples() {
        let c = Exponent::from_int(6);
        let geo = series_inverse(&QSeries::new(p(&[1, -1]), c)).unwrap();
        assert_eq!(geo.poly(), &p(&[1; 7]));
        assert_eq!(series_inverse(&QSeries::one(c)).unwrap().poly(), &QLaurent::one());
        let five = Exponent::from_int(5);
        let inf = pochhammer(PochhammerOrder::Infinite, five).unwrap();
        // partition numbers, counted independently by brute force
        let parts: Vec<i64> = (0..=5).map(count_partitions).collect();
        assert_eq!(parts, vec![1, 1, 2, 3, 5, 7]);
        assert_eq!(series_inverse(&inf).unwrap().poly(), &p(&parts));
        assert!(matches!(
            series_inverse(&QSeries::new(p(&[2, 1]), c)),
            Err(Error::NonUnitConstant)
        ));
    }

    fn count_partitions(n: i64) -> i64 {
        fn go(n: i64, max: i64) -> i64 {
            if n == 0 {
                return 1;
            }
            (1..=max.min(n)).map(|k| go(n - k, k)).sum()
        }
        go(n, n)
    }

    #[test]
    fn div_exact_roundtrip_and_failure() {
        let a = p(&[1, 2, 1]);
        assert_eq!(a.div_exact(&p(&[1, 1])).unwrap(), p(&[1, 1]));
        assert!(matches!(a.div_exact(&p(&[1, -1])), Err(Error::InexactDivision)));
        let lau = QLaurent::from_terms([(Exponent::from_int(-2), 1), (Exponent::from_int(-1), -1)]);
        assert_eq!(
            lau.div_exact(&p(&[1, -1])).unwrap(),
            QLaurent::q_pow(Exponent::from_int(-2))
        );
    }

    #[test]
    fn series_mul_tracks_cutoff() {
        let a = QSeries::new(p(&[1, 1, 1, 1]), Exponent::from_int(3));
        let b = QSeries::new(p(&[1, -1]), Exponent::from_int(5));
        let prod = a.mul(&b);
        assert_eq!(prod.cutoff(), Exponent::from_int(3));
        assert_eq!(prod.poly(), &QLaurent::one());
        let lau = QSeries::new(QLaurent::q_pow(Exponent::from_int(-1)), Exponent::from_int(5));
        assert_eq!(a.mul(&lau).cutoff(), Exponent::from_int(2));
    }

    #[test]
    fn display_and_serialization() {
        let x = QLaurent::from_terms([
            (Exponent::from_int(-1), -1),
            (Exponent::ZERO, 2),
            (Exponent::from_halves(1), 1),
            (Exponent::from_int(1), 1),
            (Exponent::from_int(3), -3),
        ]);
        assert_eq!(x.to_string(), "-q^(-1) + 2 + q^(1/2) + q - 3*q^3");
        let json = serde_json::to_string(&p(&[1, 0, -2])).unwrap();
        assert_eq!(
            json,
            r#"[{"exp_quarters":0,"coeff":"1"},{"exp_quarters":8,"coeff":"-2"}]"#
        );
        let s = QSeries::new(p(&[1, 1]), Exponent::from_int(2));
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"cutoff_quarters":8,"terms":[{"exp_quarters":0,"coeff":"1"},{"exp_quarters":4,"coeff":"1"}]}"#
        );
    }
}

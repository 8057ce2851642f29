//! Dense univariate polynomials and Laurent polynomials in `q` with
//! arbitrary-precision integer coefficients.
//!
//! Coefficients are stored ascending by exponent. All values are immutable
//! from the outside; the in-place helpers (`mul_one_minus_pow_assign` and
//! friends) exist for the hot accumulation loops in [`crate::qseries`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational numbers.
pub type Rational = BigRational;

/// Operand length (in coefficients) below which multiplication falls back to
/// the schoolbook method.
pub const KARATSUBA_THRESHOLD: usize = 32;

/// A dense polynomial in `q` with integer coefficients.
///
/// The highest stored coefficient is always nonzero; the zero polynomial has
/// no coefficients at all.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `c * q^degree`.
    pub fn monomial(c: BigInt, degree: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c;
        Poly { coeffs }
    }

    /// `1 - q^m`.
    pub fn one_minus_pow(m: usize) -> Self {
        let mut p = Poly::one();
        p.mul_one_minus_pow_assign(m);
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Divides by `q^k`, dropping the low coefficients. Caller guarantees
    /// they are zero.
    fn unshift(mut self, k: usize) -> Poly {
        self.coeffs.drain(..k.min(self.coeffs.len()));
        self
    }

    /// Multiplies in place by `1 - q^m`.
    pub fn mul_one_minus_pow_assign(&mut self, m: usize) {
        if self.is_zero() {
            return;
        }
        if m == 0 {
            self.coeffs.clear();
            return;
        }
        let len = self.coeffs.len();
        self.coeffs.resize(len + m, BigInt::zero());
        for i in (m..len + m).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            hi[0] -= &lo[i - m];
        }
        self.trim();
    }

    /// Exact division by `1 - q^m`.
    pub fn div_one_minus_pow_exact(&self, m: usize) -> Result<Poly> {
        if m == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Poly::zero());
        }
        // (1 - q^m) * b = a  =>  b_i = a_i + b_{i-m}
        let len = self.coeffs.len();
        if len <= m {
            return Err(Error::InexactDivision);
        }
        let qlen = len - m;
        let mut quot: Vec<BigInt> = Vec::with_capacity(qlen);
        for i in 0..qlen {
            let mut c = self.coeffs[i].clone();
            if i >= m {
                c += &quot[i - m];
            }
            quot.push(c);
        }
        // remaining coefficients must match -b_{i-m}
        for i in qlen..len {
            let mut expect = if i >= m { -&quot[i - m] } else { BigInt::zero() };
            if i < qlen {
                expect += &quot[i];
            }
            if expect != self.coeffs[i] {
                return Err(Error::InexactDivision);
            }
        }
        Ok(Poly::from_coeffs(quot))
    }

    /// Product using the default Karatsuba threshold.
    pub fn mul_poly(&self, other: &Poly) -> Poly {
        self.mul_with_threshold(other, KARATSUBA_THRESHOLD)
    }

    pub fn mul_with_threshold(&self, other: &Poly, threshold: usize) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(karatsuba(&self.coeffs, &other.coeffs, threshold.max(1)))
    }

    pub fn mul_schoolbook(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(schoolbook(&self.coeffs, &other.coeffs))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_poly(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_poly(&base);
            }
        }
        acc
    }

    /// Division with remainder by a monic polynomial of degree at least one.
    pub fn div_rem_monic(&self, m: &Poly) -> Result<(Poly, Poly)> {
        let dm = check_monic_divisor(m)?;
        if self.coeffs.len() <= dm {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let quot = div_rem_in_place(&mut rem, m, dm);
        rem.truncate(dm);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Exact quotient by a monic divisor; errors if the remainder is nonzero.
    pub fn div_exact_monic(&self, m: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem_monic(m)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    /// Largest `e` with `m^e | self`, by repeated monic division.
    pub fn valuation(&self, m: &Poly) -> Result<Valuation> {
        let dm = check_monic_divisor(m)?;
        if self.is_zero() {
            return Ok(Valuation::Infinite);
        }
        let mut cur = self.coeffs.clone();
        let mut count = 0u64;
        loop {
            if cur.len() <= dm {
                return Ok(Valuation::Finite(count));
            }
            let mut rem = cur;
            let quot = div_rem_in_place(&mut rem, m, dm);
            if rem[..dm].iter().any(|c| !c.is_zero()) {
                return Ok(Valuation::Finite(count));
            }
            count += 1;
            cur = quot;
            while cur.last().is_some_and(Zero::is_zero) {
                cur.pop();
            }
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Substitutes `q -> q^s`.
    pub fn inflate(&self, s: usize) -> Poly {
        assert!(s >= 1, "inflation factor must be positive");
        if self.is_zero() || s == 1 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); (self.coeffs.len() - 1) * s + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * s] = c.clone();
        }
        Poly { coeffs }
    }

    fn add_assign_at(&mut self, other: &Poly, at: usize) {
        if other.coeffs.len() + at > self.coeffs.len() {
            self.coeffs.resize(other.coeffs.len() + at, BigInt::zero());
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            self.coeffs[i + at] += c;
        }
        self.trim();
    }

    fn sub_assign_at(&mut self, other: &Poly, at: usize) {
        if other.coeffs.len() + at > self.coeffs.len() {
            self.coeffs.resize(other.coeffs.len() + at, BigInt::zero());
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            self.coeffs[i + at] -= c;
        }
        self.trim();
    }
}

fn check_monic_divisor(m: &Poly) -> Result<usize> {
    match m.degree() {
        None | Some(0) => Err(Error::ConstantDivisor),
        Some(d) if m.is_monic() => Ok(d),
        Some(_) => Err(Error::NotMonic),
    }
}

/// Long division of `rem` by monic `m` (degree `dm`), in place. Returns the
/// quotient coefficients; the low `dm` entries of `rem` hold the remainder.
fn div_rem_in_place(rem: &mut [BigInt], m: &Poly, dm: usize) -> Vec<BigInt> {
    let terms: Vec<(usize, &BigInt)> = m.coeffs[..dm]
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let qlen = rem.len() - dm;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = std::mem::take(&mut rem[i + dm]);
        if c.is_zero() {
            continue;
        }
        for &(j, mj) in &terms {
            if mj.is_one() {
                rem[i + j] -= &c;
            } else if (-mj).is_one() {
                rem[i + j] += &c;
            } else {
                rem[i + j] -= &c * mj;
            }
        }
        quot[i] = c;
    }
    quot
}

fn schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn add_slices(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o += s;
    }
    out
}

fn karatsuba(a: &[BigInt], b: &[BigInt], threshold: usize) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (a, b) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if a.len() < threshold || a.len() < 2 {
        return schoolbook(a, b);
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    if b.len() >= 2 * a.len() {
        for (i, chunk) in b.chunks(a.len()).enumerate() {
            let prod = karatsuba(a, chunk, threshold);
            for (j, c) in prod.into_iter().enumerate() {
                out[i * a.len() + j] += c;
            }
        }
        return out;
    }
    let half = b.len() / 2;
    let (a0, a1) = a.split_at(half);
    let (b0, b1) = b.split_at(half);
    let z0 = karatsuba(a0, b0, threshold);
    let z2 = karatsuba(a1, b1, threshold);
    let mut z1 = karatsuba(&add_slices(a0, a1), &add_slices(b0, b1), threshold);
    for (i, c) in z0.iter().enumerate() {
        z1[i] -= c;
    }
    for (i, c) in z2.iter().enumerate() {
        z1[i] -= c;
    }
    for (i, c) in z0.into_iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in z1.into_iter().enumerate() {
        if i + half < out.len() {
            out[i + half] += c;
        } else {
            debug_assert!(c.is_zero());
        }
    }
    for (i, c) in z2.into_iter().enumerate() {
        out[i + 2 * half] += c;
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            fmt_term(f, c, i as i64, first)?;
            first = false;
        }
        Ok(())
    }
}

fn fmt_term(f: &mut fmt::Formatter<'_>, c: &BigInt, exp: i64, first: bool) -> fmt::Result {
    let neg = c.is_negative();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, " {} ", if neg { '-' } else { '+' })?;
    }
    let mag = c.abs();
    if exp == 0 {
        return write!(f, "{mag}");
    }
    if !mag.is_one() {
        write!(f, "{mag}*")?;
    }
    if exp == 1 {
        write!(f, "q")
    } else {
        write!(f, "q^{exp}")
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_at(rhs, 0);
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.sub_assign_at(rhs, 0);
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_poly(rhs)
    }
}

/// Divisibility count; `Infinite` for the zero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn saturating_add(self, k: u64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + k),
            Valuation::Infinite => Valuation::Infinite,
        }
    }

    /// `self - required`, `None` if infinite.
    pub fn margin(self, required: u64) -> Option<i64> {
        self.finite().map(|v| v as i64 - required as i64)
    }

    pub fn at_least(self, required: u64) -> bool {
        match self {
            Valuation::Finite(v) => v >= required,
            Valuation::Infinite => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_u64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

/// `sign * q^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub negative: bool,
    pub exponent: i64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        negative: false,
        exponent: 0,
    };

    pub fn new(negative: bool, exponent: i64) -> Self {
        Monomial { negative, exponent }
    }

    pub fn mul(self, other: Monomial) -> Monomial {
        Monomial {
            negative: self.negative != other.negative,
            exponent: self.exponent + other.exponent,
        }
    }

    pub fn pow(self, e: u64) -> Monomial {
        Monomial {
            negative: self.negative && e % 2 == 1,
            exponent: self.exponent * e as i64,
        }
    }

    pub fn inverse(self) -> Monomial {
        Monomial {
            negative: self.negative,
            exponent: -self.exponent,
        }
    }

    pub fn to_laurent(self) -> LaurentPoly {
        let c = if self.negative {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        LaurentPoly::new(Poly::constant(c), self.exponent)
    }
}

/// Rewrites `1 - q^m` as `unit * (1 - q^|m|)`.
///
/// For `m < 0`, `1 - q^m = -q^m (1 - q^{-m})`.
pub fn normalize_one_minus_pow(m: i64) -> Result<(Monomial, u64)> {
    match m.cmp(&0) {
        Ordering::Equal => Err(Error::ZeroFactor),
        Ordering::Greater => Ok((Monomial::ONE, m as u64)),
        Ordering::Less => Ok((Monomial::new(true, m), m.unsigned_abs())),
    }
}

/// `q^offset * body`, with `body` carrying a nonzero constant term unless
/// the value is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    body: Poly,
    offset: i64,
}

impl LaurentPoly {
    pub fn new(body: Poly, offset: i64) -> Self {
        match body.low_degree() {
            None => LaurentPoly::zero(),
            Some(0) => LaurentPoly { body, offset },
            Some(k) => LaurentPoly {
                body: body.unshift(k),
                offset: offset + k as i64,
            },
        }
    }

    pub fn zero() -> Self {
        LaurentPoly {
            body: Poly::zero(),
            offset: 0,
        }
    }

    pub fn one() -> Self {
        LaurentPoly {
            body: Poly::one(),
            offset: 0,
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::new(p, 0)
    }

    pub fn body(&self) -> &Poly {
        &self.body
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    /// Converts to a plain polynomial when the offset is nonnegative.
    pub fn to_poly(&self) -> Option<Poly> {
        (self.offset >= 0 || self.is_zero()).then(|| self.body.shift(self.offset.max(0) as usize))
    }

    pub fn shift(&self, k: i64) -> LaurentPoly {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            body: self.body.clone(),
            offset: self.offset + k,
        }
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        LaurentPoly::new(self.body.scale(c), self.offset)
    }

    pub fn mul_monomial(&self, m: Monomial) -> LaurentPoly {
        let body = if m.negative { -&self.body } else { self.body.clone() };
        LaurentPoly::new(body, self.offset + m.exponent)
    }

    pub fn mul_poly(&self, p: &Poly) -> LaurentPoly {
        LaurentPoly::new(self.body.mul_poly(p), self.offset)
    }

    pub fn mul_one_minus_pow_assign(&mut self, m: usize) {
        self.body.mul_one_minus_pow_assign(m);
        if self.body.is_zero() {
            self.offset = 0;
        }
    }

    pub fn div_one_minus_pow_exact(&self, m: usize) -> Result<LaurentPoly> {
        Ok(LaurentPoly::new(self.body.div_one_minus_pow_exact(m)?, self.offset))
    }

    /// Largest `e` with `m^e` dividing the value. The offset is a unit
    /// whenever `m` has nonzero constant term, and is then ignored.
    pub fn valuation(&self, m: &Poly) -> Result<Valuation> {
        if self.is_zero() {
            return Ok(Valuation::Infinite);
        }
        if m.coeff(0).is_zero() {
            if self.offset < 0 {
                return Err(Error::NonUnitOffset {
                    offset: self.offset,
                });
            }
            return self.body.shift(self.offset as usize).valuation(m);
        }
        self.body.valuation(m)
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        if self.is_zero() {
            return Ok(Rational::zero());
        }
        if x.is_zero() {
            return match self.offset.cmp(&0) {
                Ordering::Less => Err(Error::DivisionByZero),
                Ordering::Equal => Ok(Rational::from_integer(self.body.coeff(0))),
                Ordering::Greater => Ok(Rational::zero()),
            };
        }
        let v = self.body.eval(x);
        let xp = num_traits::pow(x.clone(), self.offset.unsigned_abs() as usize);
        Ok(if self.offset >= 0 { v * xp } else { v / xp })
    }

    fn aligned(&self, other: &LaurentPoly) -> (Poly, Poly, i64) {
        let base = self.offset.min(other.offset);
        (
            self.body.shift((self.offset - base) as usize),
            other.body.shift((other.offset - base) as usize),
            base,
        )
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.body.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            fmt_term(f, c, i as i64 + self.offset, first)?;
            first = false;
        }
        Ok(())
    }
}

impl From<Poly> for LaurentPoly {
    fn from(p: Poly) -> Self {
        LaurentPoly::from_poly(p)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let base = self.offset.min(rhs.offset);
        let mut body = self.body.shift((self.offset - base) as usize);
        body.add_assign_at(&rhs.body, (rhs.offset - base) as usize);
        LaurentPoly::new(body, base)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b, base) = self.aligned(rhs);
        LaurentPoly::new(&a - &b, base)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            body: -&self.body,
            offset: self.offset,
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly::new(self.body.mul_poly(&rhs.body), self.offset + rhs.offset)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64s(c)
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&p(&[1, 1]) * &p(&[1, -1]), p(&[1, 0, -1]));
    }

    #[test]
    fn cube_minus_one() {
        assert_eq!(&p(&[-1, 1]) * &p(&[1, 1, 1]), p(&[-1, 0, 0, 1]));
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let a = p(&[1, 2, 0, 0]);
        assert_eq!(a.degree(), Some(1));
        assert_eq!(p(&[0, 0]), Poly::zero());
        assert_eq!(&p(&[1, 1]) - &p(&[1, 1]), Poly::zero());
    }

    #[test]
    fn geometric_division() {
        let (q, r) = p(&[-1, 0, 0, 1]).div_rem_monic(&p(&[-1, 1])).unwrap();
        assert_eq!(q, p(&[1, 1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn long_division_with_remainder() {
        let (q, r) = p(&[1, 0, 1]).div_rem_monic(&p(&[1, 1])).unwrap();
        assert_eq!(q, p(&[-1, 1]));
        assert_eq!(r, p(&[2]));
    }

    #[test]
    fn division_rejects_bad_divisors() {
        assert_eq!(p(&[1, 1]).div_rem_monic(&p(&[1, 2])), Err(Error::NotMonic));
        assert_eq!(p(&[1, 1]).div_rem_monic(&p(&[1])), Err(Error::ConstantDivisor));
        assert_eq!(p(&[1, 1]).div_rem_monic(&Poly::zero()), Err(Error::ConstantDivisor));
    }

    #[test]
    fn low_degree_dividend() {
        let (q, r) = p(&[3]).div_rem_monic(&p(&[1, 1])).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, p(&[3]));
    }

    #[test]
    fn valuation_examples() {
        let phi3 = p(&[1, 1, 1]);
        let mut a = Poly::one_minus_pow(6);
        a = &a * &a;
        assert_eq!(LaurentPoly::from(a).valuation(&phi3), Ok(Valuation::Finite(2)));
        assert_eq!(LaurentPoly::zero().valuation(&phi3), Ok(Valuation::Infinite));
        // q (1+q)^3
        let b = LaurentPoly::new(p(&[1, 1]).pow(3), 1);
        assert_eq!(b.valuation(&phi3), Ok(Valuation::Finite(0)));
        let (_, r) = p(&[1, 1]).div_rem_monic(&phi3).unwrap();
        assert!(!r.is_zero());
    }

    #[test]
    fn valuation_ignores_unit_offset() {
        let phi3 = p(&[1, 1, 1]);
        let a = LaurentPoly::new(phi3.clone(), -5);
        assert_eq!(a.valuation(&phi3), Ok(Valuation::Finite(1)));
    }

    #[test]
    fn valuation_with_non_unit_offset_errors() {
        let qq = p(&[0, 1]);
        let a = LaurentPoly::new(p(&[1, 1]), -2);
        assert_eq!(a.valuation(&qq), Err(Error::NonUnitOffset { offset: -2 }));
        let b = LaurentPoly::new(p(&[1, 1]), 2);
        assert_eq!(b.valuation(&qq), Ok(Valuation::Finite(2)));
    }

    #[test]
    fn evaluation_examples() {
        let three = p(&[1, 1, 1]);
        assert_eq!(three.eval(&rat(1, 1)), rat(3, 1));
        let sq = p(&[1, -1]).pow(2);
        assert_eq!(sq.eval(&rat(2, 1)), rat(1, 1));
        let l = LaurentPoly::new(p(&[1, 1]), -1);
        assert_eq!(l.eval(&rat(2, 1)), Ok(rat(3, 2)));
        assert_eq!(l.eval(&rat(0, 1)), Err(Error::DivisionByZero));
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_one_minus_pow(-2), Ok((Monomial::new(true, -2), 2)));
        assert_eq!(normalize_one_minus_pow(5), Ok((Monomial::ONE, 5)));
        assert_eq!(normalize_one_minus_pow(0), Err(Error::ZeroFactor));
    }

    #[test]
    fn normalized_rewrite_is_exact() {
        // 1 - q^{-3} == -q^{-3} (1 - q^3)
        let lhs = &LaurentPoly::one() - &LaurentPoly::new(Poly::one(), -3);
        let (unit, m) = normalize_one_minus_pow(-3).unwrap();
        let rhs = LaurentPoly::from(Poly::one_minus_pow(m as usize)).mul_monomial(unit);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn one_minus_pow_division_round_trip() {
        let a = p(&[3, -1, 4, 1, -5, 9]);
        let mut b = a.clone();
        b.mul_one_minus_pow_assign(3);
        assert_eq!(b.div_one_minus_pow_exact(3), Ok(a));
        assert_eq!(p(&[1, 1]).div_one_minus_pow_exact(1), Err(Error::InexactDivision));
    }

    #[test]
    fn laurent_arithmetic_aligns_offsets() {
        let a = LaurentPoly::new(p(&[1]), -2);
        let b = LaurentPoly::new(p(&[1]), 3);
        let s = &a + &b;
        assert_eq!(s.offset(), -2);
        assert_eq!(s.body(), &p(&[1, 0, 0, 0, 0, 1]));
        assert_eq!(&s - &a, b);
        assert_eq!((&a * &b).offset(), 1);
        assert!((&s - &s).is_zero());
    }

    #[test]
    fn karatsuba_matches_schoolbook_on_structured_input() {
        let a = Poly::from_coeffs((0..200).map(|i| BigInt::from(i * 7 - 300)).collect());
        let b = Poly::from_coeffs((0..137).map(|i| BigInt::from((i * i) % 23 - 11)).collect());
        assert_eq!(a.mul_with_threshold(&b, 4), a.mul_schoolbook(&b));
        assert_eq!(a.mul_with_threshold(&b, 2), a.mul_schoolbook(&b));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -1, 0, 2]).to_string(), "1 - q + 2*q^3");
        assert_eq!(LaurentPoly::new(p(&[1, 1]), -1).to_string(), "q^-1 + 1");
    }
}

//! q-integers, q-shifted factorials, the term families and their truncated
//! sums held over structured (factored) denominators.
//!
//! A truncated sum is never reduced to lowest terms. Consecutive term
//! denominators nest, so accumulation only multiplies the running numerator
//! by the handful of new `1 - q^m` factors introduced at each step. The
//! denominator stays factored, which makes its cyclotomic valuations a
//! matter of counting.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polycore::{normalize_one_minus_pow, LaurentPoly, Monomial, Poly, Rational};

/// `[N]_{q^s} = 1 + q^s + ... + q^{s(N-1)}`.
pub fn q_integer(n: u64, s: u64) -> Poly {
    assert!(n >= 1 && s >= 1, "q-integer needs N >= 1 and s >= 1");
    let s = s as usize;
    let mut coeffs = vec![BigInt::zero(); (n as usize - 1) * s + 1];
    for i in 0..n as usize {
        coeffs[i * s] = BigInt::one();
    }
    Poly::from_coeffs(coeffs)
}

/// `±q^t · ∏ (1 - q^m)^{e_m}` with every `m >= 1` and `e_m >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactoredProduct {
    unit: Monomial,
    factors: BTreeMap<u64, u64>,
}

impl Default for FactoredProduct {
    fn default() -> Self {
        Self::one()
    }
}

impl FactoredProduct {
    pub fn one() -> Self {
        FactoredProduct {
            unit: Monomial::ONE,
            factors: BTreeMap::new(),
        }
    }

    pub fn from_unit(unit: Monomial) -> Self {
        FactoredProduct {
            unit,
            factors: BTreeMap::new(),
        }
    }

    pub fn unit(&self) -> Monomial {
        self.unit
    }

    pub fn factors(&self) -> &BTreeMap<u64, u64> {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.unit == Monomial::ONE && self.factors.is_empty()
    }

    /// Multiplies in `(1 - q^m)^e` for a positive `m`.
    pub fn push(&mut self, m: u64, e: u64) {
        assert!(m >= 1, "factor base must be positive");
        if e > 0 {
            *self.factors.entry(m).or_insert(0) += e;
        }
    }

    /// Multiplies in `(1 - q^m)^e` for any nonzero `m`, normalizing a
    /// negative `m` into the unit.
    pub fn push_signed(&mut self, m: i64, e: u64) -> Result<()> {
        let (unit, base) = normalize_one_minus_pow(m)?;
        self.unit = self.unit.mul(unit.pow(e));
        self.push(base, e);
        Ok(())
    }

    pub fn mul(&self, other: &FactoredProduct) -> FactoredProduct {
        let mut out = self.clone();
        out.unit = out.unit.mul(other.unit);
        for (&m, &e) in &other.factors {
            out.push(m, e);
        }
        out
    }

    /// Total number of `1 - q^m` factors, counted with multiplicity.
    pub fn factor_count(&self) -> u64 {
        self.factors.values().sum()
    }

    /// Degree of `∏ (1 - q^m)^{e_m}` (unit excluded).
    pub fn degree(&self) -> u64 {
        self.factors.iter().map(|(m, e)| m * e).sum()
    }

    /// Multiplicity of `Φ_d` in this product: `Σ_{d | m} e_m`.
    pub fn ord_cyclotomic(&self, d: u64) -> u64 {
        assert!(d >= 2, "Φ_1 = q - 1 divides every factor; use d >= 2");
        self.factors
            .iter()
            .filter(|(m, _)| *m % d == 0)
            .map(|(_, e)| e)
            .sum()
    }

    /// `self / other` when every factor of `other` appears in `self` with at
    /// least the same exponent. Units always divide.
    pub fn cofactor(&self, other: &FactoredProduct) -> Option<FactoredProduct> {
        let mut out = self.clone();
        out.unit = self.unit.mul(other.unit.inverse());
        for (&m, &e) in &other.factors {
            let have = out.factors.get_mut(&m)?;
            match (*have).cmp(&e) {
                std::cmp::Ordering::Less => return None,
                std::cmp::Ordering::Equal => {
                    out.factors.remove(&m);
                }
                std::cmp::Ordering::Greater => *have -= e,
            }
        }
        Some(out)
    }

    /// Factorwise minimum of exponents, with trivial unit.
    pub fn common(&self, other: &FactoredProduct) -> FactoredProduct {
        let mut out = FactoredProduct::one();
        for (&m, &e) in &self.factors {
            if let Some(&f) = other.factors.get(&m) {
                out.push(m, e.min(f));
            }
        }
        out
    }

    /// Factorwise maximum of exponents, with trivial unit.
    pub fn common_multiple(&self, other: &FactoredProduct) -> FactoredProduct {
        let mut out = FactoredProduct::one();
        for (&m, &e) in self.factors.iter().chain(other.factors.iter()) {
            let slot = out.factors.entry(m).or_insert(0);
            *slot = (*slot).max(e);
        }
        out
    }

    /// `p · self`, applying the factors one at a time.
    pub fn apply_to(&self, p: &LaurentPoly) -> LaurentPoly {
        let mut out = p.mul_monomial(self.unit);
        for (&m, &e) in &self.factors {
            for _ in 0..e {
                out.mul_one_minus_pow_assign(m as usize);
            }
        }
        out
    }

    pub fn expand(&self) -> LaurentPoly {
        self.apply_to(&LaurentPoly::one())
    }

    /// `∏ m^{e_m}`, the value of `∏ ((1 - q^m)/(1 - q))^{e_m}` at `q = 1`.
    fn reduced_value_at_one(&self) -> BigInt {
        self.factors
            .iter()
            .fold(BigInt::one(), |acc, (&m, &e)| acc * num_traits::pow(BigInt::from(m), e as usize))
    }
}

impl fmt::Display for FactoredProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unit.negative {
            write!(f, "-")?;
        }
        write!(f, "q^{}", self.unit.exponent)?;
        for (m, e) in &self.factors {
            write!(f, "·(1-q^{m})^{e}")?;
        }
        Ok(())
    }
}

/// A q-shifted factorial `(q^t; q^s)_k = ∏_{i<k} (1 - q^{t+si})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pochhammer {
    /// Some factor is `1 - q^0`; `at` is its index `i`.
    Vanishes { at: u64 },
    Product(FactoredProduct),
}

pub fn q_pochhammer(start: i64, step: u64, k: u64) -> Pochhammer {
    assert!(step >= 1, "Pochhammer step must be positive");
    let mut out = FactoredProduct::one();
    for i in 0..k {
        let m = start + (step * i) as i64;
        if out.push_signed(m, 1).is_err() {
            return Pochhammer::Vanishes { at: i };
        }
    }
    Pochhammer::Product(out)
}

/// As [`q_pochhammer`], but a vanishing factor is an error.
pub fn q_pochhammer_denominator(start: i64, step: u64, k: u64) -> Result<FactoredProduct> {
    match q_pochhammer(start, step, k) {
        Pochhammer::Product(p) => Ok(p),
        Pochhammer::Vanishes { at } => Err(Error::VanishingDenominator { index: at }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// `[4k+1] (q;q^2)_k^4 / (q^2;q^2)_k^4`
    C,
    /// `q^{k^2} [6k+1] (q;q^2)_k^2 (q^2;q^4)_k / (q^4;q^4)_k^3`
    J,
    /// `q^{2k} (q;q^2)_k^4 / (q^2;q^2)_k^4`
    M,
    /// `[4k+1] (aq;q^2)_k (q/a;q^2)_k (q;q^2)_k^2 / ((aq^2;q^2)_k (q^2/a;q^2)_k (q^2;q^2)_k^2)`
    CParam,
    /// `q^{k^2} [6k+1] (aq;q^2)_k (q/a;q^2)_k (q^2;q^4)_k / ((aq^4;q^4)_k (q^4/a;q^4)_k (q^4;q^4)_k)`
    JParam,
}

impl Family {
    pub fn is_parametric(self) -> bool {
        matches!(self, Family::CParam | Family::JParam)
    }
}

/// How the base-shifted `J` parametric sum writes its monomial and
/// q-integer. `Consistent` uses `q^{sk^2} [6k+1]_{q^s}` (what the `a -> 1`
/// limit requires); `Printed` uses `q^{k^2} [6k+1]_{q^2}` regardless of the
/// base.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reading {
    #[default]
    Consistent,
    Printed,
}

/// One truncated sum `Σ_{k=0}^{upper} term_k` of a family in base `q^base`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub family: Family,
    pub base: u64,
    /// `a = q^t` for the parametric families.
    pub specialization: Option<i64>,
    pub upper: u64,
    pub reading: Reading,
}

impl FamilySpec {
    pub fn plain(family: Family, base: u64, upper: u64) -> Self {
        FamilySpec {
            family,
            base,
            specialization: None,
            upper,
            reading: Reading::Consistent,
        }
    }

    pub fn parametric(family: Family, base: u64, t: i64, upper: u64) -> Self {
        FamilySpec {
            family,
            base,
            specialization: Some(t),
            upper,
            reading: Reading::Consistent,
        }
    }

    pub fn with_reading(mut self, reading: Reading) -> Self {
        self.reading = reading;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.base == 0 {
            return Err(Error::InvalidParameter("base exponent must be positive".into()));
        }
        match (self.family.is_parametric(), self.specialization) {
            (true, None) => Err(Error::InvalidParameter(
                "parametric family needs a specialization a = q^t".into(),
            )),
            (false, Some(_)) => Err(Error::InvalidParameter(
                "plain family takes no specialization".into(),
            )),
            (true, Some(t)) if t % 2 == 0 => Err(Error::InvalidParameter(format!(
                "specialization exponent t = {t} must be odd"
            ))),
            _ => Ok(()),
        }
    }

    fn shape(&self) -> Shape {
        let s = self.base as i64;
        let t = self.specialization.unwrap_or(0);
        let slot = |start: i64, step: i64, power: u64| Slot {
            start,
            step: step as u64,
            power,
        };
        match self.family {
            Family::C => Shape {
                num: vec![slot(s, 2 * s, 4)],
                den: vec![slot(2 * s, 2 * s, 4)],
                q_int: Some((4, self.base)),
                monomial: MonomialRule::None,
            },
            Family::J => Shape {
                num: vec![slot(s, 2 * s, 2), slot(2 * s, 4 * s, 1)],
                den: vec![slot(4 * s, 4 * s, 3)],
                q_int: Some((6, self.base)),
                monomial: MonomialRule::Square(self.base),
            },
            Family::M => Shape {
                num: vec![slot(s, 2 * s, 4)],
                den: vec![slot(2 * s, 2 * s, 4)],
                q_int: None,
                monomial: MonomialRule::Linear(2 * self.base),
            },
            Family::CParam => Shape {
                num: vec![slot(s + t, 2 * s, 1), slot(s - t, 2 * s, 1), slot(s, 2 * s, 2)],
                den: vec![
                    slot(2 * s + t, 2 * s, 1),
                    slot(2 * s - t, 2 * s, 1),
                    slot(2 * s, 2 * s, 2),
                ],
                q_int: Some((4, self.base)),
                monomial: MonomialRule::None,
            },
            Family::JParam => {
                let (q_base, mono_base) = match self.reading {
                    Reading::Consistent => (self.base, self.base),
                    Reading::Printed => (2, 1),
                };
                Shape {
                    num: vec![slot(s + t, 2 * s, 1), slot(s - t, 2 * s, 1), slot(2 * s, 4 * s, 1)],
                    den: vec![
                        slot(4 * s + t, 4 * s, 1),
                        slot(4 * s - t, 4 * s, 1),
                        slot(4 * s, 4 * s, 1),
                    ],
                    q_int: Some((6, q_base)),
                    monomial: MonomialRule::Square(mono_base),
                }
            }
        }
    }
}

/// `(q^start; q^step)_k^power`
#[derive(Clone, Copy, Debug)]
struct Slot {
    start: i64,
    step: u64,
    power: u64,
}

impl Slot {
    /// Exponent of the factor entering at index `i` (the step `k = i+1`).
    fn exponent(&self, i: u64) -> i64 {
        self.start + (self.step * i) as i64
    }
}

#[derive(Clone, Copy, Debug)]
enum MonomialRule {
    None,
    /// `q^{c k}`
    Linear(u64),
    /// `q^{c k^2}`
    Square(u64),
}

impl MonomialRule {
    fn exponent(self, k: u64) -> i64 {
        match self {
            MonomialRule::None => 0,
            MonomialRule::Linear(c) => (c * k) as i64,
            MonomialRule::Square(c) => (c * k * k) as i64,
        }
    }
}

#[derive(Clone, Debug)]
struct Shape {
    num: Vec<Slot>,
    den: Vec<Slot>,
    /// `[a k + 1]_{q^b}` as `(a, b)`
    q_int: Option<(u64, u64)>,
    monomial: MonomialRule,
}

/// The k-th term of a family with every part kept separate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub monomial: Monomial,
    /// `[N]_{q^s}` factors as `(N, s)`.
    pub q_integers: Vec<(u64, u64)>,
    /// `None` when a numerator factor vanishes (the term is zero).
    pub numerator: Option<FactoredProduct>,
    pub denominator: FactoredProduct,
}

impl Term {
    pub fn is_zero(&self) -> bool {
        self.numerator.is_none()
    }

    pub fn numerator_laurent(&self) -> LaurentPoly {
        let Some(num) = &self.numerator else {
            return LaurentPoly::zero();
        };
        let mut out = num.apply_to(&self.monomial.to_laurent());
        for &(n, s) in &self.q_integers {
            out = out.mul_poly(&q_integer(n, s));
        }
        out
    }

    /// Value at `q = 1`, pairing each `1 - q^m` upstairs and downstairs so
    /// that `(1 - q^m)/(1 - q) -> m`. Requires equal factor counts.
    pub fn limit_at_one(&self) -> Result<Rational> {
        let Some(num) = &self.numerator else {
            return Ok(Rational::zero());
        };
        if num.factor_count() != self.denominator.factor_count() {
            return Err(Error::SingularLimit(format!(
                "{} numerator factors against {} denominator factors",
                num.factor_count(),
                self.denominator.factor_count()
            )));
        }
        let sign = if num.unit.negative != self.denominator.unit.negative {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let q_ints: BigInt = self.q_integers.iter().map(|&(n, _)| BigInt::from(n)).product();
        Ok(Rational::new(
            sign * q_ints * num.reduced_value_at_one(),
            self.denominator.reduced_value_at_one(),
        ))
    }
}

/// All parts of the k-th term, built from scratch.
pub fn term_parts(spec: &FamilySpec, k: u64) -> Result<Term> {
    spec.validate()?;
    let shape = spec.shape();
    let mut numerator = Some(FactoredProduct::one());
    for slot in &shape.num {
        numerator = match (numerator, q_pochhammer(slot.start, slot.step, k)) {
            (Some(acc), Pochhammer::Product(p)) => {
                let mut acc = acc;
                for _ in 0..slot.power {
                    acc = acc.mul(&p);
                }
                Some(acc)
            }
            _ => None,
        };
    }
    let mut denominator = FactoredProduct::one();
    for slot in &shape.den {
        let p = q_pochhammer_denominator(slot.start, slot.step, k)?;
        for _ in 0..slot.power {
            denominator = denominator.mul(&p);
        }
    }
    Ok(Term {
        monomial: Monomial::new(false, shape.monomial.exponent(k)),
        q_integers: shape.q_int.map(|(a, b)| vec![(a * k + 1, b)]).unwrap_or_default(),
        numerator,
        denominator,
    })
}

/// The k-th term as `(numerator, factored denominator)`.
pub fn term_of(spec: &FamilySpec, k: u64) -> Result<(LaurentPoly, FactoredProduct)> {
    let t = term_parts(spec, k)?;
    Ok((t.numerator_laurent(), t.denominator))
}

/// A rational function `numerator / (scalar · expand(denominator))`.
///
/// `scalar` is a positive integer, used for the `(n^2 - 1)/24` right sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesSum {
    pub numerator: LaurentPoly,
    pub denominator: FactoredProduct,
    pub scalar: BigInt,
}

impl SeriesSum {
    pub fn from_laurent(p: LaurentPoly) -> Self {
        SeriesSum {
            numerator: p,
            denominator: FactoredProduct::one(),
            scalar: BigInt::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_laurent(LaurentPoly::one())
    }

    pub fn new(numerator: LaurentPoly, denominator: FactoredProduct, scalar: BigInt) -> Result<Self> {
        if !scalar.is_positive() {
            return Err(Error::InvalidParameter("scalar denominator must be positive".into()));
        }
        Ok(SeriesSum {
            numerator,
            denominator,
            scalar,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn mul(&self, other: &SeriesSum) -> SeriesSum {
        SeriesSum {
            numerator: &self.numerator * &other.numerator,
            denominator: self.denominator.mul(&other.denominator),
            scalar: &self.scalar * &other.scalar,
        }
    }

    pub fn mul_laurent(&self, p: &LaurentPoly) -> SeriesSum {
        SeriesSum {
            numerator: &self.numerator * p,
            denominator: self.denominator.clone(),
            scalar: self.scalar.clone(),
        }
    }

    pub fn neg(&self) -> SeriesSum {
        SeriesSum {
            numerator: -&self.numerator,
            ..self.clone()
        }
    }

    pub fn add(&self, other: &SeriesSum) -> SeriesSum {
        let common = self.denominator.common_multiple(&other.denominator);
        let left = common
            .cofactor(&self.denominator)
            .expect("common multiple contains each operand");
        let right = common
            .cofactor(&other.denominator)
            .expect("common multiple contains each operand");
        let g = self.scalar.gcd(&other.scalar);
        let ls = &other.scalar / &g;
        let rs = &self.scalar / &g;
        let numerator = &left.apply_to(&self.numerator).scale(&ls) + &right.apply_to(&other.numerator).scale(&rs);
        SeriesSum {
            numerator,
            denominator: common,
            scalar: ls * &self.scalar,
        }
    }

    /// Value at a rational point. Fails if the denominator vanishes there.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let den = self.denominator.expand().eval(x)? * Rational::from_integer(self.scalar.clone());
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.numerator.eval(x)? / den)
    }
}

/// `Σ_{k=0}^{upper} term_k` over the denominator of the last nonzero term.
///
/// Runs incrementally: the numerator Pochhammer product is maintained in
/// expanded form, and the running sum is multiplied by the new denominator
/// factors at each step. Terms after a vanishing numerator factor are all
/// zero and are skipped.
pub fn sum_truncated(spec: &FamilySpec) -> Result<SeriesSum> {
    spec.validate()?;
    let shape = spec.shape();
    let mut pochhammer = LaurentPoly::one();
    let mut sum = LaurentPoly::one();
    let mut denominator = FactoredProduct::one();
    for k in 1..=spec.upper {
        let i = k - 1;
        let mut vanished = false;
        for slot in &shape.num {
            let (unit, m) = match normalize_one_minus_pow(slot.exponent(i)) {
                Ok(v) => v,
                Err(_) => {
                    vanished = true;
                    break;
                }
            };
            pochhammer = pochhammer.mul_monomial(unit.pow(slot.power));
            for _ in 0..slot.power {
                pochhammer.mul_one_minus_pow_assign(m as usize);
            }
        }
        if vanished {
            break;
        }
        let mut step = FactoredProduct::one();
        for slot in &shape.den {
            step.push_signed(slot.exponent(i), slot.power)
                .map_err(|_| Error::VanishingDenominator { index: i })?;
        }
        denominator = denominator.mul(&step);
        sum = step.apply_to(&sum);
        let mut term = pochhammer.shift(shape.monomial.exponent(k));
        if let Some((a, b)) = shape.q_int {
            let n = (a * k + 1) * b;
            term.mul_one_minus_pow_assign(n as usize);
            term = term.div_one_minus_pow_exact(b as usize)?;
        }
        sum = &sum + &term;
    }
    Ok(SeriesSum {
        numerator: sum,
        denominator,
        scalar: BigInt::one(),
    })
}

/// `q^{(1-n)/2} [n]`, or `(-q)^{(1-n)/2} [n]` when `negate` is set.
pub fn scale_prefactor(n: u64, negate: bool) -> LaurentPoly {
    assert!(n % 2 == 1, "prefactor needs odd n");
    let e = (1 - n as i64) / 2;
    let negative = negate && e.rem_euclid(2) == 1;
    LaurentPoly::from(q_integer(n, 1)).mul_monomial(Monomial::new(negative, e))
}

fn central_binomial(k: u64) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(2 * k - i) / BigInt::from(i + 1);
    }
    c
}

/// `(1/2)_k / k! = C(2k, k) / 4^k`.
pub fn half_pochhammer_ratio(k: u64) -> Rational {
    Rational::new(central_binomial(k), BigInt::one() << (2 * k))
}

/// The `q -> 1` value of the plain families' k-th term.
pub fn classical_term_value(family: Family, k: u64) -> Result<Rational> {
    let h = half_pochhammer_ratio(k);
    let int = |v: u64| Rational::from_integer(BigInt::from(v));
    match family {
        Family::C => Ok(int(4 * k + 1) * num_traits::pow(h, 4)),
        Family::J => Ok(int(6 * k + 1) * num_traits::pow(h, 3) / Rational::from_integer(BigInt::one() << (2 * k))),
        Family::M => Ok(num_traits::pow(h, 4)),
        _ => Err(Error::InvalidParameter(
            "classical values exist only for the plain families".into(),
        )),
    }
}

/// `γ_1..γ_N` in `q (q^2;q^2)_∞^4 (q^4;q^4)_∞^4 = Σ γ_n q^n`.
pub fn eta_product_coefficients(n: u64) -> Vec<BigInt> {
    assert!(n >= 1, "need at least one coefficient");
    // series S with q·S; γ_j is the coefficient of q^{j-1} in S
    let len = n as usize;
    let mut s = vec![BigInt::zero(); len];
    s[0] = BigInt::one();
    let mut apply = |m: usize| {
        for i in (m..len).rev() {
            let (lo, hi) = s.split_at_mut(i);
            hi[0] -= &lo[i - m];
        }
    };
    for m in (2..len.max(2)).step_by(2) {
        for _ in 0..4 {
            apply(m);
        }
        if m % 4 == 0 {
            for _ in 0..4 {
                apply(m);
            }
        }
    }
    s
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
    fn q_integer_examples() {
        assert_eq!(q_integer(1, 1), Poly::one());
        assert_eq!(q_integer(3, 1), p(&[1, 1, 1]));
        assert_eq!(q_integer(5, 3), p(&[1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1]));
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(q_pochhammer(1, 2, 0), Pochhammer::Product(FactoredProduct::one()));
        let Pochhammer::Product(two) = q_pochhammer(1, 2, 2) else {
            panic!("unexpected zero")
        };
        assert_eq!(two.expand(), LaurentPoly::from(&Poly::one_minus_pow(1) * &Poly::one_minus_pow(3)));
        let Pochhammer::Product(neg) = q_pochhammer(-2, 2, 1) else {
            panic!("unexpected zero")
        };
        assert_eq!(neg.unit(), Monomial::new(true, -2));
        assert_eq!(neg.factors().iter().collect::<Vec<_>>(), vec![(&2, &1)]);
    }

    #[test]
    fn vanishing_pochhammer() {
        // (q^{-4}; q^2)_3 hits 1 - q^0 at i = 2
        assert_eq!(q_pochhammer(-4, 2, 3), Pochhammer::Vanishes { at: 2 });
        assert_eq!(
            q_pochhammer_denominator(-4, 2, 3),
            Err(Error::VanishingDenominator { index: 2 })
        );
        assert!(matches!(q_pochhammer(-4, 2, 2), Pochhammer::Product(_)));
    }

    #[test]
    fn family_c_first_terms() {
        let spec = FamilySpec::plain(Family::C, 1, 5);
        assert_eq!(term_of(&spec, 0).unwrap(), (LaurentPoly::one(), FactoredProduct::one()));
        let (num, den) = term_of(&spec, 1).unwrap();
        let expect = &q_integer(5, 1) * &Poly::one_minus_pow(1).pow(4);
        assert_eq!(num, LaurentPoly::from(expect));
        let mut d = FactoredProduct::one();
        d.push(2, 4);
        assert_eq!(den, d);
    }

    #[test]
    fn family_j_first_term() {
        let spec = FamilySpec::plain(Family::J, 1, 5);
        let (num, den) = term_of(&spec, 1).unwrap();
        let expect = &(&q_integer(7, 1) * &Poly::one_minus_pow(1).pow(2)) * &Poly::one_minus_pow(2);
        assert_eq!(num, LaurentPoly::new(expect, 1));
        let mut d = FactoredProduct::one();
        d.push(4, 3);
        assert_eq!(den, d);
    }

    #[test]
    fn sum_with_one_step() {
        let s = sum_truncated(&FamilySpec::plain(Family::C, 1, 1)).unwrap();
        let lhs = &Poly::one_minus_pow(2).pow(4) + &(&q_integer(5, 1) * &Poly::one_minus_pow(1).pow(4));
        assert_eq!(s.numerator, LaurentPoly::from(lhs));
        let mut d = FactoredProduct::one();
        d.push(2, 4);
        assert_eq!(s.denominator, d);
    }

    #[test]
    fn empty_sum_is_one() {
        for family in [Family::C, Family::J, Family::M] {
            let s = sum_truncated(&FamilySpec::plain(family, 1, 0)).unwrap();
            assert_eq!(s, SeriesSum::one());
        }
        let s = sum_truncated(&FamilySpec::parametric(Family::CParam, 3, 5, 0)).unwrap();
        assert_eq!(s, SeriesSum::one());
    }

    #[test]
    fn spec_validation() {
        assert!(FamilySpec::parametric(Family::CParam, 1, 2, 3).validate().is_err());
        assert!(FamilySpec::plain(Family::CParam, 1, 3).validate().is_err());
        assert!(FamilySpec::parametric(Family::C, 1, 3, 3).validate().is_err());
        assert!(FamilySpec::plain(Family::C, 0, 3).validate().is_err());
        assert!(sum_truncated(&FamilySpec::parametric(Family::JParam, 1, 4, 2)).is_err());
    }

    #[test]
    fn classical_values() {
        assert_eq!(classical_term_value(Family::C, 1).unwrap(), rat(5, 16));
        assert_eq!(classical_term_value(Family::J, 1).unwrap(), rat(7, 32));
        assert_eq!(classical_term_value(Family::C, 2).unwrap(), rat(729, 4096));
        assert_eq!(classical_term_value(Family::M, 0).unwrap(), rat(1, 1));
        assert!(classical_term_value(Family::CParam, 1).is_err());
    }

    #[test]
    fn limits_match_classical_values() {
        for family in [Family::C, Family::J, Family::M] {
            let spec = FamilySpec::plain(family, 1, 0);
            for k in 0..10 {
                let t = term_parts(&spec, k).unwrap();
                assert_eq!(t.limit_at_one().unwrap(), classical_term_value(family, k).unwrap());
            }
        }
    }

    #[test]
    fn eta_examples() {
        let g = eta_product_coefficients(12);
        assert_eq!(g[0], BigInt::from(1));
        assert_eq!(g[1], BigInt::from(0));
        assert_eq!(g[2], BigInt::from(-4));
        for (i, c) in g.iter().enumerate() {
            if (i + 1) % 2 == 0 {
                assert!(c.is_zero(), "γ_{} = {}", i + 1, c);
            }
        }
    }

    #[test]
    fn prefactor_signs() {
        // n = 3: q^{-1}[3] and (-q)^{-1}[3] = -q^{-1}[3]
        let a = scale_prefactor(3, false);
        assert_eq!(a, LaurentPoly::new(p(&[1, 1, 1]), -1));
        assert_eq!(scale_prefactor(3, true), -&a);
        // n = 5: (-q)^{-2} = q^{-2}
        assert_eq!(scale_prefactor(5, true), scale_prefactor(5, false));
        assert_eq!(scale_prefactor(1, true), LaurentPoly::one());
    }

    #[test]
    fn factored_division_and_common() {
        let mut a = FactoredProduct::one();
        a.push(2, 3);
        a.push(4, 1);
        let mut b = FactoredProduct::one();
        b.push(2, 1);
        b.push_signed(-3, 1).unwrap();
        assert!(a.cofactor(&b).is_none());
        let c = a.mul(&b);
        assert_eq!(c.cofactor(&b).unwrap(), a);
        assert_eq!(a.common(&b).factors().iter().collect::<Vec<_>>(), vec![(&2, &1)]);
        assert_eq!(c.ord_cyclotomic(2), 5);
        assert_eq!(c.ord_cyclotomic(3), 1);
        assert_eq!(c.ord_cyclotomic(4), 1);
    }

    #[test]
    fn series_addition_matches_rational_value() {
        let a = sum_truncated(&FamilySpec::plain(Family::C, 1, 2)).unwrap();
        let b = sum_truncated(&FamilySpec::plain(Family::M, 3, 2)).unwrap();
        let x = rat(2, 3);
        assert_eq!(a.add(&b).eval(&x).unwrap(), a.eval(&x).unwrap() + b.eval(&x).unwrap());
        assert_eq!(a.mul(&b).eval(&x).unwrap(), a.eval(&x).unwrap() * b.eval(&x).unwrap());
    }
}

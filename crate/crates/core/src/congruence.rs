//! Certification of q-congruences between truncated sums.
//!
//! Two rational functions `A/(sa·Da)` and `B/(sb·Db)` are congruent modulo
//! `Φ_d^e` when the `Φ_d`-adic valuation of their difference is at least
//! `e`. With factored denominators that reads
//!
//! ```text
//! ord_d(sb·A·Db - sa·B·Da) >= e + ord_d(Da) + ord_d(Db)
//! ```
//!
//! where the right side is pure counting and the left side comes from
//! repeated monic division of a single difference polynomial.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{cyclotomic, divisors, q_integer_cyclotomic_factors, CyclotomicIndex};
use crate::error::{Error, Result};
use crate::polycore::{LaurentPoly, Monomial, Poly, Valuation};
use crate::qseries::{q_integer, scale_prefactor, sum_truncated, FactoredProduct, Family, FamilySpec, Reading, SeriesSum};

/// `∏ Φ_d^{e_d}` over distinct `d >= 2`, kept sorted by `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ModulusSpec {
    parts: Vec<(CyclotomicIndex, u64)>,
}

impl ModulusSpec {
    pub fn new(parts: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (d, e) in parts {
            if d < 2 || e == 0 {
                return Err(Error::InvalidParameter(format!(
                    "modulus part Φ_{d}^{e} needs d >= 2 and e >= 1"
                )));
            }
            if map.insert(d, e).is_some() {
                return Err(Error::InvalidParameter(format!("repeated modulus index {d}")));
            }
        }
        Ok(ModulusSpec {
            parts: map
                .into_iter()
                .map(|(d, e)| (CyclotomicIndex::new(d).expect("d >= 2"), e))
                .collect(),
        })
    }

    pub fn parts(&self) -> &[(CyclotomicIndex, u64)] {
        &self.parts
    }

    /// `[N]` itself.
    pub fn q_integer(n: u64) -> Result<Self> {
        Self::new(q_integer_cyclotomic_factors(n).into_iter().map(|d| (d.get(), 1)))
    }

    /// `[N] Φ_N^extra`.
    pub fn q_integer_times(n: u64, extra: u64) -> Result<Self> {
        Self::new(
            q_integer_cyclotomic_factors(n)
                .into_iter()
                .map(|d| (d.get(), if d.get() == n { 1 + extra } else { 1 })),
        )
    }

    pub fn expand(&self) -> Poly {
        self.parts
            .iter()
            .fold(Poly::one(), |acc, (d, e)| acc.mul_poly(&d.poly().pow(*e as u32)))
    }
}

impl fmt::Display for ModulusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|(d, e)| format!("{d}^{e}")).collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// `[n^r] ∏_{j=1}^r Φ_{n^j}^2`.
pub fn build_modulus_theorem(n: u64, r: u64) -> Result<ModulusSpec> {
    require_odd_n(n)?;
    require_r(r)?;
    let nr = n.pow(r as u32);
    let powers: Vec<u64> = (1..=r).map(|j| n.pow(j as u32)).collect();
    ModulusSpec::new(
        divisors(nr)
            .into_iter()
            .filter(|&d| d > 1)
            .map(|d| (d, if powers.contains(&d) { 3 } else { 1 })),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Thm1Half,
    Thm1Full,
    Thm2Half,
    Thm2Full,
    Gw,
    Qj2,
    Conj41,
    Conj42,
    Conj43,
    Lemma22,
    Lemma31,
    ParamRootsC,
    ParamRootsJ,
    ParamSampledC,
    ParamSampledJ,
    ParamGenericC,
    ParamGenericJ,
    HalfVsFullM,
}

impl CheckKind {
    pub const ALL: [CheckKind; 18] = [
        CheckKind::Thm1Half,
        CheckKind::Thm1Full,
        CheckKind::Thm2Half,
        CheckKind::Thm2Full,
        CheckKind::Gw,
        CheckKind::Qj2,
        CheckKind::Conj41,
        CheckKind::Conj42,
        CheckKind::Conj43,
        CheckKind::Lemma22,
        CheckKind::Lemma31,
        CheckKind::ParamRootsC,
        CheckKind::ParamRootsJ,
        CheckKind::ParamSampledC,
        CheckKind::ParamSampledJ,
        CheckKind::ParamGenericC,
        CheckKind::ParamGenericJ,
        CheckKind::HalfVsFullM,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Thm1Half => "thm1-half",
            CheckKind::Thm1Full => "thm1-full",
            CheckKind::Thm2Half => "thm2-half",
            CheckKind::Thm2Full => "thm2-full",
            CheckKind::Gw => "gw",
            CheckKind::Qj2 => "qj2",
            CheckKind::Conj41 => "conj41",
            CheckKind::Conj42 => "conj42",
            CheckKind::Conj43 => "conj43",
            CheckKind::Lemma22 => "lemma22",
            CheckKind::Lemma31 => "lemma31",
            CheckKind::ParamRootsC => "param-roots-c",
            CheckKind::ParamRootsJ => "param-roots-j",
            CheckKind::ParamSampledC => "param-sampled-c",
            CheckKind::ParamSampledJ => "param-sampled-j",
            CheckKind::ParamGenericC => "param-generic-c",
            CheckKind::ParamGenericJ => "param-generic-j",
            CheckKind::HalfVsFullM => "half-vs-full-m",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            CheckKind::Thm1Half => "Σ_{k≤(n^r-1)/2} [4k+1](q;q²)_k⁴/(q²;q²)_k⁴ vs q^{(1-n)/2}[n]·(base q^n), mod [n^r]∏Φ_{n^j}²",
            CheckKind::Thm1Full => "as thm1-half with full ranges n^r-1 and n^{r-1}-1",
            CheckKind::Thm2Half => "Σ q^{k²}[6k+1](q;q²)_k²(q²;q⁴)_k/(q⁴;q⁴)_k³ vs (-q)^{(1-n)/2}[n]·(base q^n), mod [n^r]∏Φ_{n^j}²",
            CheckKind::Thm2Full => "as thm2-half with full ranges",
            CheckKind::Gw => "C sum to (n-1)/2 vs q^{(1-n)/2}[n] + (n²-1)/24 (1-q)² q^{(1-n)/2}[n]³, mod [n]Φ_n³",
            CheckKind::Qj2 => "J sum to (n-1)/2 vs the (-q)^{(1-n)/2} cubic closed form, mod [n]Φ_n³ (conjectural)",
            CheckKind::Conj41 => "M sum to n^{r+1}-1 vs product of M sums in q and q^{n²}, mod Φ_n³ (conjectural)",
            CheckKind::Conj42 => "half-range version of conj41, mod Φ_n³ (conjectural)",
            CheckKind::Conj43 => "M sums with bases q and q^n, ranges /d, mod Φ_n² (conjectural)",
            CheckKind::Lemma22 => "terminating C parametric sum at a = q^{-n} equals q^{(1-n)/2}[n]",
            CheckKind::Lemma31 => "terminating J parametric sum at a = q^{-n} equals (-q)^{(1-n)/2}[n]",
            CheckKind::ParamRootsC => "C parametric congruence at a = q^{-(2j+1)n} holds with equality",
            CheckKind::ParamRootsJ => "J parametric congruence at a = q^{-(2j+1)n}, both right-side readings",
            CheckKind::ParamSampledC => "C parametric sums at a = q^t: LHS ≡ RHS ≡ 0 mod [n^r]",
            CheckKind::ParamSampledJ => "J parametric sums at a = q^t: LHS ≡ RHS ≡ 0 mod [n^r]",
            CheckKind::ParamGenericC => "C parametric sums at a constant a = c: LHS ≡ RHS ≡ 0 mod [n^r]",
            CheckKind::ParamGenericJ => "J parametric sums at a constant a = c: LHS ≡ RHS ≡ 0 mod [n^r]",
            CheckKind::HalfVsFullM => "half- and full-range M sums: ≢ mod Φ_n, ≡ mod Φ_{n^{r+1}}⁴",
        }
    }

    pub fn uses_r(self) -> bool {
        !matches!(self, CheckKind::Gw | CheckKind::Qj2 | CheckKind::Lemma22 | CheckKind::Lemma31)
    }

    pub fn uses_d(self) -> bool {
        matches!(
            self,
            CheckKind::Conj43
                | CheckKind::ParamRootsC
                | CheckKind::ParamRootsJ
                | CheckKind::ParamSampledC
                | CheckKind::ParamSampledJ
                | CheckKind::ParamGenericC
                | CheckKind::ParamGenericJ
        )
    }

    /// Conjectural statements: a failure is a finding, not a defect.
    pub fn is_conjectural(self) -> bool {
        matches!(self, CheckKind::Qj2 | CheckKind::Conj41 | CheckKind::Conj42 | CheckKind::Conj43)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown check kind `{s}`")))
    }
}

/// One modulus part of a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartResult {
    pub component: String,
    pub d: u64,
    pub required: u64,
    pub found: Valuation,
    /// `found - required`; absent when `found` is infinite.
    pub margin: Option<i64>,
    /// `false` for contrast parts that must fail.
    pub expect_holds: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityResult {
    pub component: String,
    pub equal: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reading: Option<Reading>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CongruenceReport {
    pub case_label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<CheckKind>,
    pub params: CaseParams,
    pub conjectural: bool,
    pub parts: Vec<PartResult>,
    pub identities: Vec<IdentityResult>,
    pub pass: bool,
    pub identically_equal: bool,
    /// Milliseconds per phase.
    pub timings: BTreeMap<String, f64>,
}

impl CongruenceReport {
    fn new(label: impl Into<String>) -> Self {
        CongruenceReport {
            case_label: label.into(),
            kind: None,
            params: CaseParams::default(),
            conjectural: false,
            parts: Vec::new(),
            identities: Vec::new(),
            pass: false,
            identically_equal: false,
            timings: BTreeMap::new(),
        }
    }

    fn finish(mut self) -> Self {
        self.pass = self.parts.iter().all(|p| p.ok) && self.identities.iter().all(|i| i.equal);
        self
    }

    pub fn elapsed_ms(&self) -> f64 {
        self.timings.values().sum()
    }

    fn time(&mut self, phase: &str, since: Instant) {
        *self.timings.entry(phase.to_string()).or_insert(0.0) += since.elapsed().as_secs_f64() * 1e3;
    }
}

/// The cross-multiplied difference of two sums, with the shared part of
/// the denominators split off.
///
/// With `Da = G·L` and `Db = G·R`, `A/(sa·Da) - B/(sb·Db)` equals
/// `(sb·A·R - sa·B·L) / (sa·sb·G·L·R)`, so only `L` and `R` are ever
/// applied to the numerators.
#[derive(Clone, Debug)]
pub struct Difference {
    delta: LaurentPoly,
    common: FactoredProduct,
    lhs_den: FactoredProduct,
    rhs_den: FactoredProduct,
}

impl Difference {
    pub fn new(lhs: &SeriesSum, rhs: &SeriesSum) -> Self {
        let common = lhs.denominator.common(&rhs.denominator);
        let left = lhs.denominator.cofactor(&common).expect("common part divides lhs");
        let right = rhs.denominator.cofactor(&common).expect("common part divides rhs");
        let a = right.apply_to(&lhs.numerator).scale(&rhs.scalar);
        let b = left.apply_to(&rhs.numerator).scale(&lhs.scalar);
        Difference {
            delta: &a - &b,
            common,
            lhs_den: lhs.denominator.clone(),
            rhs_den: rhs.denominator.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.delta.is_zero()
    }

    /// The reduced difference numerator `sb·A·R - sa·B·L`.
    pub fn numerator(&self) -> &LaurentPoly {
        &self.delta
    }

    /// Valuation of the full cross-multiplied difference `sb·A·Db - sa·B·Da`.
    pub fn found(&self, d: u64) -> Result<Valuation> {
        Ok(self.delta.valuation(&cyclotomic(d))?.saturating_add(self.common.ord_cyclotomic(d)))
    }

    pub fn required(&self, d: u64, e: u64) -> u64 {
        e + self.lhs_den.ord_cyclotomic(d) + self.rhs_den.ord_cyclotomic(d)
    }

    pub fn part(&self, component: &str, d: u64, e: u64, expect_holds: bool) -> Result<PartResult> {
        let required = self.required(d, e);
        let found = self.found(d)?;
        let holds = found.at_least(required);
        Ok(PartResult {
            component: component.to_string(),
            d,
            required,
            found,
            margin: found.margin(required),
            expect_holds,
            ok: holds == expect_holds,
        })
    }

    pub fn parts(&self, component: &str, modulus: &ModulusSpec, expect_holds: bool) -> Result<Vec<PartResult>> {
        modulus
            .parts()
            .iter()
            .map(|(d, e)| self.part(component, d.get(), *e, expect_holds))
            .collect()
    }
}

/// Certifies `lhs ≡ rhs` modulo the given cyclotomic product.
pub fn check_congruence(lhs: &SeriesSum, rhs: &SeriesSum, modulus: &ModulusSpec) -> Result<CongruenceReport> {
    let mut report = CongruenceReport::new(format!("congruence mod {modulus}"));
    let start = Instant::now();
    let diff = Difference::new(lhs, rhs);
    report.time("delta", start);
    let start = Instant::now();
    report.parts = diff.parts("lhs-rhs", modulus, true)?;
    report.time("valuation", start);
    report.identically_equal = diff.is_zero();
    Ok(report.finish())
}

/// Exact equality of two sums as rational functions.
pub fn check_identity_equal(lhs: &SeriesSum, rhs: &SeriesSum) -> bool {
    Difference::new(lhs, rhs).is_zero()
}

/// Multiplies `(q^start; q^step)_k` into `into`; `false` if it vanishes.
fn pochhammer_factors(start: i64, step: u64, k: u64, into: &mut FactoredProduct) -> bool {
    (0..k).all(|i| into.push_signed(start + (step * i) as i64, 1).is_ok())
}

fn denominator_factors(start: i64, step: u64, k: u64, into: &mut FactoredProduct) -> Result<()> {
    for i in 0..k {
        into.push_signed(start + (step * i) as i64, 1)
            .map_err(|_| Error::VanishingDenominator { index: i })?;
    }
    Ok(())
}

/// Both sides of Jackson's terminating very-well-poised `6φ5` summation
/// with `a = q^{a_exp}`, `b = q^{b_exp}`, `c = q^{c_exp}` and base `q^s`:
///
/// ```text
/// Σ_{k=0}^{N} (1 - a p^{2k}) (a, b, c, p^{-N}; p)_k
///             / ((1 - a) (p, ap/b, ap/c, ap^{N+1}; p)_k) · (ap^{N+1}/(bc))^k
///   = (ap, ap/(bc); p)_N / ((ap/b, ap/c; p)_N),      p = q^s
/// ```
pub fn jackson_6phi5_sides(a_exp: i64, b_exp: i64, c_exp: i64, n: u64, s: u64) -> Result<(SeriesSum, SeriesSum)> {
    if s == 0 {
        return Err(Error::InvalidParameter("base step must be positive".into()));
    }
    let st = s as i64;
    let big_n = n as i64;
    let z_exp = a_exp + st * (big_n + 1) - b_exp - c_exp;
    let mut lhs = SeriesSum::new(LaurentPoly::zero(), FactoredProduct::one(), BigInt::one())?;
    for k in 0..=n {
        let ki = k as i64;
        let mut num = FactoredProduct::from_unit(Monomial::new(false, z_exp * ki));
        let alive = num.push_signed(a_exp + 2 * st * ki, 1).is_ok()
            && pochhammer_factors(a_exp, s, k, &mut num)
            && pochhammer_factors(b_exp, s, k, &mut num)
            && pochhammer_factors(c_exp, s, k, &mut num)
            && pochhammer_factors(-st * big_n, s, k, &mut num);
        let mut den = FactoredProduct::one();
        den.push_signed(a_exp, 1)
            .map_err(|_| Error::VanishingDenominator { index: 0 })?;
        denominator_factors(st, s, k, &mut den)?;
        denominator_factors(a_exp + st - b_exp, s, k, &mut den)?;
        denominator_factors(a_exp + st - c_exp, s, k, &mut den)?;
        denominator_factors(a_exp + st * (big_n + 1), s, k, &mut den)?;
        if alive {
            let term = SeriesSum::new(num.expand(), den, BigInt::one())?;
            lhs = lhs.add(&term);
        }
    }
    let mut num = FactoredProduct::one();
    let alive = pochhammer_factors(a_exp + st, s, n, &mut num)
        && pochhammer_factors(a_exp + st - b_exp - c_exp, s, n, &mut num);
    let mut den = FactoredProduct::one();
    denominator_factors(a_exp + st - b_exp, s, n, &mut den)?;
    denominator_factors(a_exp + st - c_exp, s, n, &mut den)?;
    let rhs_num = if alive { num.expand() } else { LaurentPoly::zero() };
    Ok((lhs, SeriesSum::new(rhs_num, den, BigInt::one())?))
}

/// Checks Jackson's terminating `6φ5` summation exactly.
pub fn jackson_6phi5_terminating(a_exp: i64, b_exp: i64, c_exp: i64, n: u64, s: u64) -> Result<bool> {
    let (lhs, rhs) = jackson_6phi5_sides(a_exp, b_exp, c_exp, n, s)?;
    Ok(check_identity_equal(&lhs, &rhs))
}

fn require_odd_n(n: u64) -> Result<()> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidParameter(format!("n = {n} must be odd and at least 3")));
    }
    Ok(())
}

fn require_r(r: u64) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    Ok(())
}

fn require_d(d: u64) -> Result<()> {
    if d != 1 && d != 2 {
        return Err(Error::InvalidParameter(format!("d = {d} must be 1 or 2")));
    }
    Ok(())
}

fn pow(n: u64, e: u64) -> Result<u64> {
    n.checked_pow(e as u32)
        .ok_or_else(|| Error::InvalidParameter(format!("{n}^{e} overflows")))
}

/// One fully specified case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CaseSpec {
    pub kind: CheckKind,
    pub n: u64,
    pub r: u64,
    pub d: u64,
    /// Root index for the `param-roots-*` kinds.
    pub j: Option<u64>,
    /// Specialization `a = q^t` for the `param-sampled-*` kinds.
    pub t: Option<i64>,
    /// Constant value `a = c` for the `param-generic-*` kinds.
    pub c: Option<i64>,
    pub reading: Reading,
}

impl CaseSpec {
    pub fn new(kind: CheckKind, n: u64, r: u64, d: u64) -> Self {
        CaseSpec {
            kind,
            n,
            r,
            d,
            j: None,
            t: None,
            c: None,
            reading: Reading::Consistent,
        }
    }

    pub fn with_j(mut self, j: u64) -> Self {
        self.j = Some(j);
        self
    }

    pub fn with_t(mut self, t: i64) -> Self {
        self.t = Some(t);
        self
    }

    pub fn with_c(mut self, c: i64) -> Self {
        self.c = Some(c);
        self
    }

    pub fn with_reading(mut self, reading: Reading) -> Self {
        self.reading = reading;
        self
    }

    pub fn params(&self) -> CaseParams {
        let k = self.kind;
        CaseParams {
            n: Some(self.n),
            r: k.uses_r().then_some(self.r),
            d: k.uses_d().then_some(self.d),
            j: matches!(k, CheckKind::ParamRootsC | CheckKind::ParamRootsJ)
                .then_some(self.j)
                .flatten(),
            t: matches!(k, CheckKind::ParamSampledC | CheckKind::ParamSampledJ)
                .then_some(self.t)
                .flatten(),
            c: matches!(k, CheckKind::ParamGenericC | CheckKind::ParamGenericJ)
                .then_some(self.c)
                .flatten(),
            reading: (k == CheckKind::ParamRootsJ).then_some(self.reading),
        }
    }

    pub fn is_conjectural(&self) -> bool {
        self.kind.is_conjectural() || (self.kind == CheckKind::ParamRootsJ && self.reading == Reading::Printed)
    }

    /// Canonical label, e.g. `thm1-half n=3 r=2`.
    pub fn label(&self) -> String {
        let p = self.params();
        let mut s = self.kind.name().to_string();
        let mut add = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                s.push_str(&format!(" {k}={v}"));
            }
        };
        add("n", p.n.map(|v| format!("{v:03}")));
        add("r", p.r.map(|v| v.to_string()));
        add("d", p.d.map(|v| v.to_string()));
        add("j", p.j.map(|v| format!("{v:03}")));
        add("t", p.t.map(|v| format!("{v:+04}")));
        add("c", p.c.map(|v| format!("{v:+04}")));
        add(
            "reading",
            p.reading.map(|v| match v {
                Reading::Consistent => "consistent".to_string(),
                Reading::Printed => "printed".to_string(),
            }),
        );
        s
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            CheckKind::Lemma22 | CheckKind::Lemma31 => {
                if self.n % 2 == 0 {
                    return Err(Error::InvalidParameter(format!("n = {} must be odd", self.n)));
                }
            }
            _ => require_odd_n(self.n)?,
        }
        if self.kind.uses_r() {
            require_r(self.r)?;
        }
        if self.kind.uses_d() {
            require_d(self.d)?;
        }
        match self.kind {
            CheckKind::ParamRootsC | CheckKind::ParamRootsJ => {
                let j = self
                    .j
                    .ok_or_else(|| Error::InvalidParameter("root checks need j".into()))?;
                let max = (pow(self.n, self.r - 1)? - 1) / self.d;
                if j > max {
                    return Err(Error::InvalidParameter(format!("j = {j} exceeds (n^(r-1)-1)/d = {max}")));
                }
            }
            CheckKind::ParamSampledC | CheckKind::ParamSampledJ => {
                let t = self
                    .t
                    .ok_or_else(|| Error::InvalidParameter("sampled checks need t".into()))?;
                if t % 2 == 0 {
                    return Err(Error::InvalidParameter(format!("t = {t} must be odd")));
                }
            }
            CheckKind::ParamGenericC | CheckKind::ParamGenericJ => {
                let c = self
                    .c
                    .ok_or_else(|| Error::InvalidParameter("generic checks need c".into()))?;
                if c.abs() < 2 {
                    return Err(Error::InvalidParameter(format!("c = {c} must satisfy |c| >= 2")));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Largest admissible root index `(n^{r-1} - 1)/d`.
pub fn max_root_index(n: u64, r: u64, d: u64) -> Result<u64> {
    require_odd_n(n)?;
    require_r(r)?;
    require_d(d)?;
    Ok((pow(n, r - 1)? - 1) / d)
}

fn plain_sum(family: Family, base: u64, upper: u64) -> Result<SeriesSum> {
    sum_truncated(&FamilySpec::plain(family, base, upper))
}

/// The closed form `q^{(1-n)/2}[n] + (n²-1)/24 (1-q)² q^{(1-n)/2}[n]³`,
/// with `(-q)` in place of `q` in the prefactor when `negate`.
pub fn gw_closed_form(n: u64, negate: bool) -> Result<SeriesSum> {
    require_odd_n(n)?;
    let pre = scale_prefactor(n, negate);
    let qn = q_integer(n, 1);
    let cubic = pre
        .mul_poly(&qn.mul_poly(&qn))
        .mul_poly(&Poly::one_minus_pow(1).pow(2))
        .scale(&BigInt::from(n * n - 1));
    let numerator = &pre.scale(&BigInt::from(24)) + &cubic;
    SeriesSum::new(numerator, FactoredProduct::one(), BigInt::from(24))
}

fn theorem_sides(spec: &CaseSpec) -> Result<(SeriesSum, SeriesSum)> {
    let (n, r) = (spec.n, spec.r);
    let (family, negate) = match spec.kind {
        CheckKind::Thm1Half | CheckKind::Thm1Full => (Family::C, false),
        _ => (Family::J, true),
    };
    let half = matches!(spec.kind, CheckKind::Thm1Half | CheckKind::Thm2Half);
    let nr = pow(n, r)?;
    let nr1 = pow(n, r - 1)?;
    let (k_lhs, k_rhs) = if half {
        ((nr - 1) / 2, (nr1 - 1) / 2)
    } else {
        (nr - 1, nr1 - 1)
    };
    let lhs = plain_sum(family, 1, k_lhs)?;
    let rhs = plain_sum(family, n, k_rhs)?.mul_laurent(&scale_prefactor(n, negate));
    Ok((lhs, rhs))
}

fn param_family(kind: CheckKind) -> (Family, bool) {
    match kind {
        CheckKind::ParamRootsC | CheckKind::ParamSampledC | CheckKind::ParamGenericC | CheckKind::Lemma22 => {
            (Family::CParam, false)
        }
        _ => (Family::JParam, true),
    }
}

fn param_sides(family: Family, negate: bool, spec: &CaseSpec, t: i64) -> Result<(SeriesSum, SeriesSum)> {
    let (n, r, d) = (spec.n, spec.r, spec.d);
    let lhs = sum_truncated(&FamilySpec::parametric(family, 1, t, (pow(n, r)? - 1) / d))?;
    let rhs_spec = FamilySpec::parametric(family, n, t, (pow(n, r - 1)? - 1) / d).with_reading(spec.reading);
    let rhs = sum_truncated(&rhs_spec)?.mul_laurent(&scale_prefactor(n, negate));
    Ok((lhs, rhs))
}

fn run_inner(spec: &CaseSpec, report: &mut CongruenceReport) -> Result<()> {
    let (n, r) = (spec.n, spec.r);
    let build = Instant::now();
    match spec.kind {
        CheckKind::Thm1Half | CheckKind::Thm1Full | CheckKind::Thm2Half | CheckKind::Thm2Full => {
            let (lhs, rhs) = theorem_sides(spec)?;
            report.time("build", build);
            congruence_into(report, &lhs, &rhs, &build_modulus_theorem(n, r)?, "lhs-rhs", true)?;
        }
        CheckKind::Gw | CheckKind::Qj2 => {
            let (family, negate) = if spec.kind == CheckKind::Gw {
                (Family::C, false)
            } else {
                (Family::J, true)
            };
            let lhs = plain_sum(family, 1, (n - 1) / 2)?;
            let rhs = gw_closed_form(n, negate)?;
            report.time("build", build);
            congruence_into(report, &lhs, &rhs, &ModulusSpec::q_integer_times(n, 3)?, "lhs-rhs", true)?;
        }
        CheckKind::Conj41 | CheckKind::Conj42 | CheckKind::Conj43 => {
            let (lhs, rhs, modulus) = conjecture_sides(spec)?;
            report.time("build", build);
            congruence_into(report, &lhs, &rhs, &modulus, "lhs-rhs", true)?;
        }
        CheckKind::HalfVsFullM => {
            let top = pow(n, r + 1)?;
            let half = plain_sum(Family::M, 1, (top - 1) / 2)?;
            let full = plain_sum(Family::M, 1, top - 1)?;
            report.time("build", build);
            let start = Instant::now();
            let diff = Difference::new(&half, &full);
            report.time("delta", start);
            let start = Instant::now();
            report.parts.push(diff.part("half-full", top, 4, true)?);
            report.parts.push(diff.part("half-full", n, 1, false)?);
            report.time("valuation", start);
            report.identically_equal = diff.is_zero();
        }
        CheckKind::Lemma22 | CheckKind::Lemma31 => {
            let (family, negate) = param_family(spec.kind);
            let t = -(n as i64);
            let lhs = sum_truncated(&FamilySpec::parametric(family, 1, t, (n - 1) / 2))?;
            let rhs = SeriesSum::from_laurent(scale_prefactor(n, negate));
            report.time("build", build);
            identity_into(report, &lhs, &rhs, "sum=closed-form");
        }
        CheckKind::ParamRootsC | CheckKind::ParamRootsJ => {
            let (family, negate) = param_family(spec.kind);
            let j = spec.j.expect("validated");
            let m = (2 * j + 1) * n;
            let t = -(m as i64);
            let (lhs, rhs) = param_sides(family, negate, spec, t)?;
            let closed = SeriesSum::from_laurent(scale_prefactor(m, negate));
            report.time("build", build);
            identity_into(report, &lhs, &rhs, "lhs=rhs");
            identity_into(report, &lhs, &closed, "lhs=closed-form");
            // a -> 1/a leaves the sums unchanged
            let (lhs_flip, _) = param_sides(family, negate, spec, -t)?;
            let start = Instant::now();
            report.identities.push(IdentityResult {
                component: "a<->1/a".into(),
                equal: check_identity_equal(&lhs, &lhs_flip),
            });
            report.time("identity", start);
        }
        CheckKind::ParamSampledC | CheckKind::ParamSampledJ => {
            let (family, negate) = param_family(spec.kind);
            let t = spec.t.expect("validated");
            let (lhs, rhs) = param_sides(family, negate, spec, t)?;
            report.time("build", build);
            let modulus = ModulusSpec::q_integer(pow(n, r)?)?;
            let zero = SeriesSum::from_laurent(LaurentPoly::zero());
            congruence_into(report, &lhs, &zero, &modulus, "lhs≡0", true)?;
            congruence_into(report, &rhs, &zero, &modulus, "rhs≡0", true)?;
            congruence_into(report, &lhs, &rhs, &modulus, "lhs≡rhs", true)?;
        }
        CheckKind::ParamGenericC | CheckKind::ParamGenericJ => {
            let (family, negate) = param_family(spec.kind);
            let c = spec.c.expect("validated");
            let lhs = constant_parameter_sum(family, 1, c, (pow(n, r)? - 1) / spec.d)?;
            let rhs = constant_parameter_sum(family, n, c, (pow(n, r - 1)? - 1) / spec.d)?
                .mul_laurent(&scale_prefactor(n, negate));
            report.time("build", build);
            let zero = RationalFunction::zero();
            let m = pow(n, r)?;
            for (component, a, b) in [("lhs≡0", &lhs, &zero), ("rhs≡0", &rhs, &zero), ("lhs≡rhs", &lhs, &rhs)] {
                let start = Instant::now();
                let diff = a.sub(b);
                report.time("delta", start);
                let start = Instant::now();
                for d in q_integer_cyclotomic_factors(m) {
                    report.parts.push(diff.part(component, d.get(), 1)?);
                }
                report.time("valuation", start);
                if component == "lhs≡rhs" {
                    report.identically_equal = diff.numerator.is_zero();
                }
            }
        }
    }
    Ok(())
}

/// `numerator / denominator` with an arbitrary integer denominator.
#[derive(Clone, Debug)]
struct RationalFunction {
    numerator: LaurentPoly,
    denominator: Poly,
}

impl RationalFunction {
    fn zero() -> Self {
        RationalFunction {
            numerator: LaurentPoly::zero(),
            denominator: Poly::one(),
        }
    }

    fn mul_laurent(&self, p: &LaurentPoly) -> Self {
        RationalFunction {
            numerator: &self.numerator * p,
            denominator: self.denominator.clone(),
        }
    }

    fn sub(&self, other: &RationalFunction) -> Self {
        RationalFunction {
            numerator: &self.numerator.mul_poly(&other.denominator) - &other.numerator.mul_poly(&self.denominator),
            denominator: self.denominator.mul_poly(&other.denominator),
        }
    }

    fn part(&self, component: &str, d: u64, e: u64) -> Result<PartResult> {
        let phi = cyclotomic(d);
        let found = self.numerator.valuation(&phi)?;
        let Valuation::Finite(den) = self.denominator.valuation(&phi)? else {
            return Err(Error::DivisionByZero);
        };
        let required = e + den;
        Ok(PartResult {
            component: component.to_string(),
            d,
            required,
            found,
            margin: found.margin(required),
            expect_holds: true,
            ok: found.at_least(required),
        })
    }
}

/// The parametric C or J sum in base `q^s` with `a` replaced by the integer
/// `c`. Each `(q^m/a)` factor is written `(c - q^m)/c`; the powers of `c`
/// cancel between numerator and denominator.
fn constant_parameter_sum(family: Family, s: u64, c: i64, upper: u64) -> Result<RationalFunction> {
    let c = BigInt::from(c);
    let times_a = |m: u64| {
        let mut v = vec![BigInt::from(0); m as usize + 1];
        v[0] = BigInt::one();
        v[m as usize] = -c.clone();
        Poly::from_coeffs(v)
    };
    let over_a = |m: u64| {
        let mut v = vec![BigInt::from(0); m as usize + 1];
        v[0] = c.clone();
        v[m as usize] = -BigInt::one();
        Poly::from_coeffs(v)
    };
    // (num a-step, den a-step, plain num (start, step, power), plain den, q-integer coefficient)
    let (num_a, den_a, plain_num, plain_den, q_coef) = match family {
        Family::CParam => ((s, 2 * s), (2 * s, 2 * s), (s, 2 * s, 2), (2 * s, 2 * s, 2), 4),
        Family::JParam => ((s, 2 * s), (4 * s, 4 * s), (2 * s, 4 * s, 1), (4 * s, 4 * s, 1), 6),
        _ => return Err(Error::InvalidParameter("constant-parameter sums need a parametric family".into())),
    };
    let mut sum = RationalFunction {
        numerator: LaurentPoly::from(Poly::one()),
        denominator: Poly::one(),
    };
    let mut pochhammer = Poly::one();
    for k in 1..=upper {
        let i = k - 1;
        let mut step_num = times_a(num_a.0 + num_a.1 * i).mul_poly(&over_a(num_a.0 + num_a.1 * i));
        step_num = step_num.mul_poly(&Poly::one_minus_pow((plain_num.0 + plain_num.1 * i) as usize).pow(plain_num.2));
        let mut step_den = times_a(den_a.0 + den_a.1 * i).mul_poly(&over_a(den_a.0 + den_a.1 * i));
        step_den = step_den.mul_poly(&Poly::one_minus_pow((plain_den.0 + plain_den.1 * i) as usize).pow(plain_den.2));
        pochhammer = pochhammer.mul_poly(&step_num);
        let mut term = pochhammer.mul_poly(&q_integer(q_coef * k + 1, s));
        if family == Family::JParam {
            term = term.shift((s * k * k) as usize);
        }
        sum.numerator = &sum.numerator.mul_poly(&step_den) + &LaurentPoly::from(term);
        sum.denominator = sum.denominator.mul_poly(&step_den);
    }
    Ok(sum)
}

fn conjecture_sides(spec: &CaseSpec) -> Result<(SeriesSum, SeriesSum, ModulusSpec)> {
    let (n, r) = (spec.n, spec.r);
    let top = pow(n, r + 1)?;
    let nr = pow(n, r)?;
    match spec.kind {
        CheckKind::Conj41 => {
            let lhs = plain_sum(Family::M, 1, top - 1)?;
            let rhs = plain_sum(Family::M, 1, n - 1)?.mul(&plain_sum(Family::M, n * n, nr - 1)?);
            Ok((lhs, rhs, ModulusSpec::new([(n, 3)])?))
        }
        CheckKind::Conj42 => {
            let lhs = plain_sum(Family::M, 1, (top - 1) / 2)?;
            let rhs = plain_sum(Family::M, 1, (n - 1) / 2)?.mul(&plain_sum(Family::M, n * n, (nr - 1) / 2)?);
            Ok((lhs, rhs, ModulusSpec::new([(n, 3)])?))
        }
        _ => {
            let d = spec.d;
            let lhs = plain_sum(Family::M, 1, (top - 1) / d)?;
            let rhs = plain_sum(Family::M, 1, (n - 1) / d)?.mul(&plain_sum(Family::M, n, (nr - 1) / d)?);
            Ok((lhs, rhs, ModulusSpec::new([(n, 2)])?))
        }
    }
}

fn congruence_into(
    report: &mut CongruenceReport,
    lhs: &SeriesSum,
    rhs: &SeriesSum,
    modulus: &ModulusSpec,
    component: &str,
    expect_holds: bool,
) -> Result<()> {
    let start = Instant::now();
    let diff = Difference::new(lhs, rhs);
    report.time("delta", start);
    let start = Instant::now();
    report.parts.extend(diff.parts(component, modulus, expect_holds)?);
    report.time("valuation", start);
    if component == "lhs-rhs" || component == "lhs≡rhs" {
        report.identically_equal = diff.is_zero();
    }
    Ok(())
}

fn identity_into(report: &mut CongruenceReport, lhs: &SeriesSum, rhs: &SeriesSum, component: &str) {
    let start = Instant::now();
    let equal = check_identity_equal(lhs, rhs);
    report.time("identity", start);
    if component == "lhs=rhs" || component == "sum=closed-form" {
        report.identically_equal = equal;
    }
    report.identities.push(IdentityResult {
        component: component.to_string(),
        equal,
    });
}

/// Runs one case end to end.
pub fn run_case(spec: &CaseSpec) -> Result<CongruenceReport> {
    spec.validate()?;
    let mut report = CongruenceReport::new(spec.label());
    report.kind = Some(spec.kind);
    report.params = spec.params();
    report.conjectural = spec.is_conjectural();
    run_inner(spec, &mut report)?;
    Ok(report.finish())
}

/// Runs a non-parametric case; the parametric kinds need [`run_case`] with
/// `j` or `t` set, or [`verify_parametric_roots`] / [`verify_parametric_sampled`].
pub fn verify_case(kind: CheckKind, n: u64, r: u64, d: u64) -> Result<CongruenceReport> {
    run_case(&CaseSpec::new(kind, n, r, d))
}

pub fn verify_parametric_roots(family: Family, n: u64, r: u64, d: u64, j: u64, reading: Reading) -> Result<CongruenceReport> {
    let kind = match family {
        Family::C | Family::CParam => CheckKind::ParamRootsC,
        Family::J | Family::JParam => CheckKind::ParamRootsJ,
        Family::M => return Err(Error::InvalidParameter("root checks exist for C and J only".into())),
    };
    run_case(&CaseSpec::new(kind, n, r, d).with_j(j).with_reading(reading))
}

/// The mod `[n^r]` part of the parametric congruences with `a` set to an
/// integer constant `c`, `|c| >= 2`, which keeps every specialized
/// denominator prime to each cyclotomic factor.
pub fn verify_parametric_generic(family: Family, n: u64, r: u64, d: u64, c: i64) -> Result<CongruenceReport> {
    let kind = match family {
        Family::C | Family::CParam => CheckKind::ParamGenericC,
        Family::J | Family::JParam => CheckKind::ParamGenericJ,
        Family::M => return Err(Error::InvalidParameter("generic checks exist for C and J only".into())),
    };
    run_case(&CaseSpec::new(kind, n, r, d).with_c(c))
}

pub fn verify_parametric_sampled(family: Family, n: u64, r: u64, d: u64, t: i64) -> Result<CongruenceReport> {
    let kind = match family {
        Family::C | Family::CParam => CheckKind::ParamSampledC,
        Family::J | Family::JParam => CheckKind::ParamSampledJ,
        Family::M => return Err(Error::InvalidParameter("sampled checks exist for C and J only".into())),
    };
    run_case(&CaseSpec::new(kind, n, r, d).with_t(t))
}

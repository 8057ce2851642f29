//! The classical (`q = 1`) supercongruences modulo prime powers.
//!
//! Every classical term is a rational with a power-of-two denominator, so
//! reductions modulo `p^s` for odd `p` only ever invert powers of two.
//! Each reported residue is computed twice: from the exact rational sum
//! reduced once, and from termwise reductions accumulated in `Z/p^s`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polycore::{Rational, Valuation};
use crate::qseries::{classical_term_value, eta_product_coefficients, half_pochhammer_ratio, Family};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassicalKind {
    C2,
    J2,
    C3,
    J3,
    Cc,
    Jj,
    M2,
    Dwork,
    Lucas,
}

impl ClassicalKind {
    pub const ALL: [ClassicalKind; 9] = [
        ClassicalKind::C2,
        ClassicalKind::J2,
        ClassicalKind::C3,
        ClassicalKind::J3,
        ClassicalKind::Cc,
        ClassicalKind::Jj,
        ClassicalKind::M2,
        ClassicalKind::Dwork,
        ClassicalKind::Lucas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassicalKind::C2 => "c2",
            ClassicalKind::J2 => "j2",
            ClassicalKind::C3 => "c3",
            ClassicalKind::J3 => "j3",
            ClassicalKind::Cc => "cc",
            ClassicalKind::Jj => "jj",
            ClassicalKind::M2 => "m2",
            ClassicalKind::Dwork => "dwork",
            ClassicalKind::Lucas => "lucas",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ClassicalKind::C2 => "Σ_{k≤(p-1)/2} (4k+1)(1/2)_k⁴/k!⁴ ≡ p mod p^s",
            ClassicalKind::J2 => "Σ_{k≤(p-1)/2} (6k+1)(1/2)_k³/(k!³4^k) ≡ (-1)^{(p-1)/2} p mod p^s",
            ClassicalKind::C3 => "C sum to (p^r-1)/2 ≡ p·(C sum to (p^{r-1}-1)/2) mod p^s",
            ClassicalKind::J3 => "J sum to (p^r-1)/2 ≡ ±p·(J sum to (p^{r-1}-1)/2) mod p^s",
            ClassicalKind::Cc => "C sum to p^r-1 ≡ p·(C sum to p^{r-1}-1) mod p^s",
            ClassicalKind::Jj => "J sum to p^r-1 ≡ ±p·(J sum to p^{r-1}-1) mod p^s",
            ClassicalKind::M2 => "Σ (1/2)_k⁴/k!⁴ over half and full ranges ≡ γ_p mod p³",
            ClassicalKind::Dwork => "f_{r+1}(z) f_{r-1}(z^p) ≡ f_r(z) f_r(z^p) mod p^r up to z^K",
            ClassicalKind::Lucas => "v_p(A_k) ≥ 4 for (p^s+1)/2 ≤ k ≤ p^s-1, s ≤ r",
        }
    }

    fn swisher_family(self) -> Option<(Family, bool)> {
        match self {
            ClassicalKind::C3 => Some((Family::C, true)),
            ClassicalKind::J3 => Some((Family::J, true)),
            ClassicalKind::Cc => Some((Family::C, false)),
            ClassicalKind::Jj => Some((Family::J, false)),
            _ => None,
        }
    }

    /// Whether the kind needs `p > 3`.
    pub fn needs_p_above_three(self) -> bool {
        matches!(
            self,
            ClassicalKind::C2
                | ClassicalKind::J2
                | ClassicalKind::C3
                | ClassicalKind::J3
                | ClassicalKind::Cc
                | ClassicalKind::Jj
        )
    }

    pub fn uses_r(self) -> bool {
        !matches!(self, ClassicalKind::C2 | ClassicalKind::J2 | ClassicalKind::M2)
    }
}

impl fmt::Display for ClassicalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassicalKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ClassicalKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown classical check `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidueReport {
    pub case_label: String,
    pub kind: ClassicalKind,
    pub p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    /// The claimed modulus is `p^exponent`.
    pub exponent: u64,
    /// p-adic valuation of the checked difference (minimum over all
    /// coefficients or sub-claims).
    pub valuation: Valuation,
    pub pass: bool,
    pub conjectural: bool,
    /// The residue(s) reported, as decimal strings modulo `p^exponent`.
    pub residues: Vec<(String, String)>,
    /// Exact-then-reduce agrees with reduce-then-accumulate on every residue.
    pub paths_agree: bool,
    pub elapsed_ms: f64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn require_odd_prime(p: u64, above_three: bool) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidParameter(format!("p = {p} must be an odd prime")));
    }
    if above_three && p <= 3 {
        return Err(Error::InvalidParameter(format!("p = {p} must exceed 3")));
    }
    Ok(())
}

fn p_pow(p: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

fn checked_pow(p: u64, e: u64) -> Result<u64> {
    p.checked_pow(e as u32)
        .ok_or_else(|| Error::InvalidParameter(format!("{p}^{e} overflows")))
}

/// `v_p(x)`; `Infinite` for zero.
pub fn integer_valuation(x: &BigInt, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        v += 1;
        x = q;
    }
}

/// `v_p` of a rational whose denominator is prime to `p`.
pub fn rational_valuation(x: &Rational, p: u64) -> Valuation {
    debug_assert!(integer_valuation(x.denom(), p) == Valuation::Finite(0));
    integer_valuation(x.numer(), p)
}

/// `x mod m` in `[0, m)` for a rational with denominator prime to `m`.
pub fn residue(x: &Rational, m: &BigInt) -> Result<BigInt> {
    let inv = mod_inverse(x.denom(), m)?;
    Ok((x.numer() * inv).mod_floor(m))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return Err(Error::DivisionByZero);
    }
    Ok(e.x.mod_floor(m))
}

/// `A_k = ((1/2)_k / k!)^4`.
pub fn dwork_coefficient(k: u64) -> Rational {
    num_traits::pow(half_pochhammer_ratio(k), 4)
}

/// The coefficients `A_0..A_K` of a truncation `f_r(z) = Σ_{k < p^r} A_k z^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub coefficients: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn coefficient(&self, k: usize) -> Rational {
        self.coefficients.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `f(z^p)` truncated to degree `cap`.
    fn inflate(&self, p: u64, cap: usize) -> TruncatedSeries {
        let mut out = vec![Rational::zero(); cap + 1];
        for (k, c) in self.coefficients.iter().enumerate() {
            let idx = k * p as usize;
            if idx > cap {
                break;
            }
            out[idx] = c.clone();
        }
        TruncatedSeries { coefficients: out }
    }

    fn mul_truncated(&self, other: &TruncatedSeries, cap: usize) -> TruncatedSeries {
        let mut out = vec![Rational::zero(); cap + 1];
        for (i, a) in self.coefficients.iter().enumerate().take(cap + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate().take(cap + 1 - i) {
                out[i + j] += a * b;
            }
        }
        TruncatedSeries { coefficients: out }
    }
}

/// `f_r` with `A_k = (1/2)_k^4/k!^4` for `k < p^r`, stopping after `cap`.
/// `f_0 = A_0 = 1`.
pub fn truncation(p: u64, r: u64, cap: u64) -> Result<TruncatedSeries> {
    require_odd_prime(p, false)?;
    let len = checked_pow(p, r)?.min(cap + 1);
    Ok(TruncatedSeries {
        coefficients: (0..len).map(dwork_coefficient).collect(),
    })
}

/// `Σ_{k=0}^{upper}` of a family's classical term.
pub fn classical_sum(family: Family, upper: u64) -> Result<Rational> {
    (0..=upper).try_fold(Rational::zero(), |acc, k| Ok(acc + classical_term_value(family, k)?))
}

fn classical_sum_mod(family: Family, upper: u64, m: &BigInt) -> Result<BigInt> {
    (0..=upper).try_fold(BigInt::zero(), |acc, k| {
        Ok((acc + residue(&classical_term_value(family, k)?, m)?).mod_floor(m))
    })
}

fn j_sign(p: u64) -> BigInt {
    if ((p - 1) / 2) % 2 == 1 {
        -BigInt::one()
    } else {
        BigInt::one()
    }
}

struct Claim {
    label: String,
    kind: ClassicalKind,
    p: u64,
    r: Option<u64>,
    exponent: u64,
    conjectural: bool,
}

impl Claim {
    fn report(self, valuation: Valuation, residues: Vec<(String, String)>, paths_agree: bool, start: Instant) -> ResidueReport {
        ResidueReport {
            case_label: self.label,
            kind: self.kind,
            p: self.p,
            r: self.r,
            exponent: self.exponent,
            pass: valuation.at_least(self.exponent) && paths_agree,
            valuation,
            conjectural: self.conjectural,
            residues,
            paths_agree,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        }
    }
}

/// `sum - target`, its valuation and the two-path residue check.
fn difference_report(
    claim: Claim,
    lhs: (Family, u64),
    rhs_scale: &BigInt,
    rhs: Option<(Family, u64)>,
    start: Instant,
) -> Result<ResidueReport> {
    let m = p_pow(claim.p, claim.exponent);
    let exact_rhs = match rhs {
        Some((f, k)) => classical_sum(f, k)?,
        None => Rational::one(),
    };
    let diff = classical_sum(lhs.0, lhs.1)? - Rational::from_integer(rhs_scale.clone()) * exact_rhs;
    let valuation = rational_valuation(&diff, claim.p);
    let once = residue(&diff, &m)?;
    let rhs_mod = match rhs {
        Some((f, k)) => classical_sum_mod(f, k, &m)?,
        None => BigInt::one(),
    };
    let termwise = (classical_sum_mod(lhs.0, lhs.1, &m)? - rhs_scale * rhs_mod).mod_floor(&m);
    let agree = once == termwise;
    Ok(claim.report(valuation, vec![("difference".into(), once.to_string())], agree, start))
}

/// Van Hamme's `(C.2)` / `(J.2)` at modulus `p^s`.
pub fn verify_van_hamme(kind: ClassicalKind, p: u64, s: u64) -> Result<ResidueReport> {
    let start = Instant::now();
    require_odd_prime(p, true)?;
    let (family, scale) = match kind {
        ClassicalKind::C2 => (Family::C, BigInt::from(p)),
        ClassicalKind::J2 => (Family::J, j_sign(p) * BigInt::from(p)),
        _ => return Err(Error::InvalidParameter(format!("{kind} is not a Van Hamme check"))),
    };
    if s == 0 {
        return Err(Error::InvalidParameter("exponent must be positive".into()));
    }
    let claim = Claim {
        label: format!("{kind} p={p:03} s={s}"),
        kind,
        p,
        r: None,
        exponent: s,
        conjectural: s > 4,
    };
    difference_report(claim, (family, (p - 1) / 2), &scale, None, start)
}

/// Swisher's `(C.3)` / `(J.3)` and the full-range companions at `p^s`.
/// Exponents up to `3r` are the proven range; beyond is conjectural.
pub fn verify_swisher(kind: ClassicalKind, p: u64, r: u64, s: u64) -> Result<ResidueReport> {
    let start = Instant::now();
    require_odd_prime(p, true)?;
    let (family, half) = kind
        .swisher_family()
        .ok_or_else(|| Error::InvalidParameter(format!("{kind} is not a Dwork-type check")))?;
    if r == 0 || s == 0 {
        return Err(Error::InvalidParameter("r and the exponent must be positive".into()));
    }
    let pr = checked_pow(p, r)?;
    let pr1 = checked_pow(p, r - 1)?;
    let (k_lhs, k_rhs) = if half {
        ((pr - 1) / 2, (pr1 - 1) / 2)
    } else {
        (pr - 1, pr1 - 1)
    };
    let sign = if family == Family::J { j_sign(p) } else { BigInt::one() };
    let claim = Claim {
        label: format!("{kind} p={p:03} r={r} s={s}"),
        kind,
        p,
        r: Some(r),
        exponent: s,
        conjectural: s > 3 * r,
    };
    difference_report(claim, (family, k_lhs), &(sign * BigInt::from(p)), Some((family, k_rhs)), start)
}

/// `(M.2)`: half and full sums of `A_k` are both `≡ γ_p (mod p^3)`.
pub fn verify_m2(p: u64) -> Result<ResidueReport> {
    let start = Instant::now();
    require_odd_prime(p, false)?;
    let m = p_pow(p, 3);
    let gamma = eta_product_coefficients(p)[p as usize - 1].clone();
    let gamma_mod = gamma.mod_floor(&m);
    let mut residues = vec![("gamma_p".to_string(), gamma_mod.to_string())];
    let mut valuation = Valuation::Infinite;
    let mut agree = true;
    for (name, upper) in [("half", (p - 1) / 2), ("full", p - 1)] {
        let exact = classical_sum(Family::M, upper)?;
        let once = residue(&exact, &m)?;
        agree &= once == classical_sum_mod(Family::M, upper, &m)?;
        valuation = valuation.min(rational_valuation(&(exact - Rational::from_integer(gamma.clone())), p));
        residues.push((name.to_string(), once.to_string()));
    }
    let claim = Claim {
        label: format!("m2 p={p:03}"),
        kind: ClassicalKind::M2,
        p,
        r: None,
        exponent: 3,
        conjectural: false,
    };
    Ok(claim.report(valuation, residues, agree, start))
}

/// Cross-multiplied Dwork congruence `f_{r+1}(z) f_{r-1}(z^p) ≡ f_r(z) f_r(z^p)`
/// modulo `p^r`, coefficientwise through `z^K`.
pub fn dwork_quotient_check(p: u64, r: u64, k_cap: u64) -> Result<ResidueReport> {
    let start = Instant::now();
    require_odd_prime(p, false)?;
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    let cap = k_cap as usize;
    let f_next = truncation(p, r + 1, k_cap)?;
    let f_cur = truncation(p, r, k_cap)?;
    let f_prev = truncation(p, r - 1, k_cap)?;
    let lhs = f_next.mul_truncated(&f_prev.inflate(p, cap), cap);
    let rhs = f_cur.mul_truncated(&f_cur.inflate(p, cap), cap);
    let m = p_pow(p, r);
    let mut valuation = Valuation::Infinite;
    for k in 0..=cap {
        valuation = valuation.min(rational_valuation(&(lhs.coefficient(k) - rhs.coefficient(k)), p));
    }
    // the same products accumulated in Z/p^r
    let reduce = |s: &TruncatedSeries| -> Result<Vec<BigInt>> {
        (0..=cap).map(|k| residue(&s.coefficient(k), &m)).collect()
    };
    let mul_mod = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); cap + 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(cap + 1 - i) {
                out[i + j] = (&out[i + j] + x * y).mod_floor(&m);
            }
        }
        out
    };
    let lhs_mod = mul_mod(&reduce(&f_next)?, &reduce(&f_prev.inflate(p, cap))?);
    let rhs_mod = mul_mod(&reduce(&f_cur)?, &reduce(&f_cur.inflate(p, cap))?);
    let mut agree = true;
    for k in 0..=cap {
        agree &= residue(&lhs.coefficient(k), &m)? == lhs_mod[k];
        agree &= residue(&rhs.coefficient(k), &m)? == rhs_mod[k];
    }
    let mismatches = (0..=cap).filter(|&k| lhs_mod[k] != rhs_mod[k]).count();
    let claim = Claim {
        label: format!("dwork p={p:03} r={r} K={k_cap}"),
        kind: ClassicalKind::Dwork,
        p,
        r: Some(r),
        exponent: r,
        conjectural: false,
    };
    Ok(claim.report(valuation, vec![("mismatched_coefficients".into(), mismatches.to_string())], agree, start))
}

/// Minimum `v_p(A_k)` over `(p^s+1)/2 ≤ k ≤ p^s - 1` for `s = 1..=r`.
pub fn lucas_min_valuation(p: u64, r: u64) -> Result<Valuation> {
    require_odd_prime(p, false)?;
    let mut min = Valuation::Infinite;
    for s in 1..=r {
        let ps = checked_pow(p, s)?;
        for k in (ps + 1) / 2..ps {
            min = min.min(rational_valuation(&dwork_coefficient(k), p));
        }
    }
    Ok(min)
}

/// True iff every `A_k` in the Lucas ranges is divisible by `p^4`.
pub fn lucas_vanishing(p: u64, r: u64) -> Result<bool> {
    Ok(lucas_min_valuation(p, r)?.at_least(4))
}

pub fn lucas_report(p: u64, r: u64) -> Result<ResidueReport> {
    let start = Instant::now();
    let v = lucas_min_valuation(p, r)?;
    let claim = Claim {
        label: format!("lucas p={p:03} r={r}"),
        kind: ClassicalKind::Lucas,
        p,
        r: Some(r),
        exponent: 4,
        conjectural: false,
    };
    Ok(claim.report(v, Vec::new(), true, start))
}

/// Dispatches any classical kind. `r` is ignored where unused; `exponent`
/// is ignored by the kinds with a fixed modulus (m2, dwork, lucas).
pub fn run_classical(kind: ClassicalKind, p: u64, r: u64, exponent: u64, k_cap: u64) -> Result<ResidueReport> {
    match kind {
        ClassicalKind::C2 | ClassicalKind::J2 => verify_van_hamme(kind, p, exponent),
        ClassicalKind::C3 | ClassicalKind::J3 | ClassicalKind::Cc | ClassicalKind::Jj => {
            verify_swisher(kind, p, r, exponent)
        }
        ClassicalKind::M2 => verify_m2(p),
        ClassicalKind::Dwork => dwork_quotient_check(p, r, k_cap),
        ClassicalKind::Lucas => lucas_report(p, r),
    }
}

//! Brute-force oracles shared by the integration suites. Every expected
//! value is rebuilt from the textbook definitions with plain arithmetic.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use qcong_core::congruence::{jackson_6phi5_sides, jackson_6phi5_terminating};
use qcong_core::cyclotomic::{cyclotomic, divisors, euler_phi};
use qcong_core::polycore::{LaurentPoly, Monomial, Poly, Rational, Valuation};
use qcong_core::qseries::{sum_truncated, term_parts, FactoredProduct, Family, FamilySpec, SeriesSum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type Outcome = Result<usize, String>;

pub fn q_pow(e: i64) -> LaurentPoly {
    LaurentPoly::new(Poly::one(), e)
}

pub fn one_minus(e: i64) -> LaurentPoly {
    assert!(e != 0);
    &LaurentPoly::one() - &q_pow(e)
}

/// `(q^start; q^step)_k`, or `None` when a factor is `1 - q^0`.
pub fn poch(start: i64, step: i64, k: u64) -> Option<LaurentPoly> {
    let mut acc = LaurentPoly::one();
    for i in 0..k as i64 {
        let e = start + step * i;
        if e == 0 {
            return None;
        }
        acc = &acc * &one_minus(e);
    }
    Some(acc)
}

pub fn q_int(n: u64, s: u64) -> LaurentPoly {
    let mut acc = LaurentPoly::zero();
    for i in 0..n {
        acc = &acc + &q_pow((i * s) as i64);
    }
    acc
}

pub fn pw(p: LaurentPoly, e: u32) -> LaurentPoly {
    (0..e).fold(LaurentPoly::one(), |acc, _| &acc * &p)
}

/// Term `k` as `(numerator, denominator)` straight from the definitions.
pub fn brute_term(family: Family, s: u64, t: i64, k: u64) -> (LaurentPoly, LaurentPoly) {
    let si = s as i64;
    let ki = k as i64;
    let get = |x: Option<LaurentPoly>| x.unwrap_or_else(LaurentPoly::zero);
    match family {
        Family::C => (
            &q_int(4 * k + 1, s) * &pw(get(poch(si, 2 * si, k)), 4),
            pw(get(poch(2 * si, 2 * si, k)), 4),
        ),
        Family::J => (
            &(&q_pow(si * ki * ki) * &q_int(6 * k + 1, s))
                * &(&pw(get(poch(si, 2 * si, k)), 2) * &get(poch(2 * si, 4 * si, k))),
            pw(get(poch(4 * si, 4 * si, k)), 3),
        ),
        Family::M => (
            &q_pow(2 * si * ki) * &pw(get(poch(si, 2 * si, k)), 4),
            pw(get(poch(2 * si, 2 * si, k)), 4),
        ),
        Family::CParam => {
            let num = &(&get(poch(si + t, 2 * si, k)) * &get(poch(si - t, 2 * si, k))) * &pw(get(poch(si, 2 * si, k)), 2);
            let den = &(&get(poch(2 * si + t, 2 * si, k)) * &get(poch(2 * si - t, 2 * si, k)))
                * &pw(get(poch(2 * si, 2 * si, k)), 2);
            (&q_int(4 * k + 1, s) * &num, den)
        }
        Family::JParam => {
            let num = &(&get(poch(si + t, 2 * si, k)) * &get(poch(si - t, 2 * si, k))) * &get(poch(2 * si, 4 * si, k));
            let den = &(&get(poch(4 * si + t, 4 * si, k)) * &get(poch(4 * si - t, 4 * si, k)))
                * &get(poch(4 * si, 4 * si, k));
            (&(&q_pow(si * ki * ki) * &q_int(6 * k + 1, s)) * &num, den)
        }
    }
}

pub fn brute_sum(family: Family, s: u64, t: i64, upper: u64) -> (LaurentPoly, LaurentPoly) {
    let mut num = LaurentPoly::zero();
    let mut den = LaurentPoly::one();
    for k in 0..=upper {
        let (n, d) = brute_term(family, s, t, k);
        num = &(&num * &d) + &(&n * &den);
        den = &den * &d;
    }
    (num, den)
}

pub fn same_function(sum: &SeriesSum, num: &LaurentPoly, den: &LaurentPoly) -> bool {
    let lib_den = sum.denominator.expand().scale(&sum.scalar);
    &sum.numerator * den == num * &lib_den
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

pub fn random_product(rng: &mut StdRng) -> FactoredProduct {
    let mut fp = FactoredProduct::from_unit(Monomial::new(rng.gen(), rng.gen_range(-20..20)));
    for _ in 0..rng.gen_range(0..7) {
        fp.push(rng.gen_range(1..=30), rng.gen_range(1..=3));
    }
    fp
}

pub fn qx(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        Rational::one() / num_traits::pow(x.clone(), (-e) as usize)
    }
}

pub fn poch_at(x: &Rational, start: i64, step: i64, k: i64) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| acc * (Rational::one() - qx(x, start + step * i)))
}

/// Both Jackson sides at `q = x`, directly from the summation formula.
pub fn jackson_at(x: &Rational, a: i64, b: i64, c: i64, n: i64, s: i64) -> (Rational, Rational) {
    let p = |e: i64| qx(x, e);
    let mut lhs = Rational::zero();
    for k in 0..=n {
        let num = (Rational::one() - p(a + 2 * s * k))
            * poch_at(x, a, s, k)
            * poch_at(x, b, s, k)
            * poch_at(x, c, s, k)
            * poch_at(x, -s * n, s, k)
            * p((a + s * (n + 1) - b - c) * k);
        let den = (Rational::one() - p(a))
            * poch_at(x, s, s, k)
            * poch_at(x, a + s - b, s, k)
            * poch_at(x, a + s - c, s, k)
            * poch_at(x, a + s * (n + 1), s, k);
        lhs += num / den;
    }
    let rhs = poch_at(x, a + s, s, n) * poch_at(x, a + s - b - c, s, n)
        / (poch_at(x, a + s - b, s, n) * poch_at(x, a + s - c, s, n));
    (lhs, rhs)
}

pub fn jackson_admissible(a: i64, b: i64, c: i64, n: i64, s: i64) -> bool {
    let clear = |start: i64, len: i64| (0..len).all(|i| start + s * i != 0);
    a != 0 && clear(s, n) && clear(a + s - b, n.max(1)) && clear(a + s - c, n.max(1)) && clear(a + s * (n + 1), n)
}

/// Truncated sums of every family against term-by-term fraction addition,
/// for upper limits up to 12. Returns the number of sums compared.
pub fn sums_match_brute_force() -> Outcome {
    let mut cases = Vec::new();
    for family in [Family::C, Family::J, Family::M] {
        for upper in [0, 1, 2, 5, 9, 12] {
            cases.push(FamilySpec::plain(family, 1, upper));
        }
        for upper in [3, 6] {
            cases.push(FamilySpec::plain(family, 3, upper));
        }
    }
    for family in [Family::CParam, Family::JParam] {
        for t in [-5, 3, 7, 9] {
            for upper in [0, 1, 4, 8, 12] {
                cases.push(FamilySpec::parametric(family, 1, t, upper));
            }
            cases.push(FamilySpec::parametric(family, 3, t, 4));
        }
    }
    let count = cases.len();
    for spec in cases {
        let lib = sum_truncated(&spec).map_err(|e| format!("{spec:?}: {e}"))?;
        let t = spec.specialization.unwrap_or(0);
        let (num, den) = brute_sum(spec.family, spec.base, t, spec.upper);
        if !same_function(&lib, &num, &den) {
            return Err(format!("{spec:?}: sum differs"));
        }
        let (tn, td) = brute_term(spec.family, spec.base, t, spec.upper);
        let part = term_parts(&spec, spec.upper).map_err(|e| e.to_string())?;
        if &part.numerator_laurent() * &td != &tn * &part.denominator.expand() {
            return Err(format!("{spec:?}: last term differs"));
        }
    }
    Ok(count)
}

/// `∏_{d|n} Φ_d = q^n - 1`, `deg Φ_n = φ(n)` and `Φ_n(-1)` odd for odd `n > 1`.
pub fn cyclotomic_product_identity(max_n: u64) -> Outcome {
    for n in 1..=max_n {
        let prod = divisors(n).into_iter().fold(Poly::one(), |acc, d| acc.mul_poly(&cyclotomic(d)));
        if prod != &Poly::monomial(BigInt::one(), n as usize) - &Poly::one() {
            return Err(format!("product identity at n = {n}"));
        }
        if cyclotomic(n).degree() != Some(euler_phi(n) as usize) {
            return Err(format!("degree at n = {n}"));
        }
        if n % 2 == 1 && n > 1 && (cyclotomic(n).eval_int(&BigInt::from(-1)) % 2u32).is_zero() {
            return Err(format!("Φ_{n}(-1) even"));
        }
    }
    Ok(max_n as usize)
}

/// `a = qm + r` with `deg r < deg m` for random `a` and random monic `m`.
pub fn division_reconstruction(count: usize, seed: u64) -> Outcome {
    let mut rng = StdRng::seed_from_u64(seed);
    for i in 0..count {
        let a: Vec<i64> = (0..rng.gen_range(0..60)).map(|_| rng.gen_range(-40..=40)).collect();
        let mut m: Vec<i64> = (0..rng.gen_range(1..12)).map(|_| rng.gen_range(-9..=9)).collect();
        m.push(1);
        let (a, m) = (Poly::from_i64s(&a), Poly::from_i64s(&m));
        let (q, r) = a.div_rem_monic(&m).map_err(|e| format!("instance {i}: {e}"))?;
        if &(&q * &m) + &r != a {
            return Err(format!("instance {i}: qm + r != a"));
        }
        if let (Some(dr), Some(dm)) = (r.degree(), m.degree()) {
            if dr >= dm {
                return Err(format!("instance {i}: remainder degree {dr} >= {dm}"));
            }
        }
    }
    Ok(count)
}

/// Analytic `ord_{Φ_d}` of random factored products against repeated division.
pub fn analytic_valuation_agrees(count: usize, seed: u64) -> Outcome {
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..count {
        let fp = random_product(&mut rng);
        let expanded = fp.expand();
        for d in 2..=31u64 {
            let by_division = expanded.valuation(&cyclotomic(d)).map_err(|e| e.to_string())?;
            if by_division != Valuation::Finite(fp.ord_cyclotomic(d)) {
                return Err(format!("{fp:?} at Φ_{d}"));
            }
        }
    }
    Ok(count)
}

/// Random admissible terminating instances, both sides evaluated at three
/// rational points against the summation formula.
pub fn jackson_random(count: usize, seed: u64) -> Outcome {
    let mut rng = StdRng::seed_from_u64(seed);
    let points = [Rational::new(2.into(), 1.into()), Rational::new((-3).into(), 2.into()), Rational::new(5.into(), 7.into())];
    let mut checked = 0;
    while checked < count {
        let s = rng.gen_range(1..=3);
        let (a, b, c) = (rng.gen_range(-6..=6), rng.gen_range(-6..=6), rng.gen_range(-6..=6));
        let n = rng.gen_range(0..=4);
        if !jackson_admissible(a, b, c, n, s) {
            continue;
        }
        let tag = format!("a={a} b={b} c={c} n={n} s={s}");
        let (lhs, rhs) = jackson_6phi5_sides(a, b, c, n as u64, s as u64).map_err(|e| format!("{tag}: {e}"))?;
        for x in &points {
            let (bl, br) = jackson_at(x, a, b, c, n, s);
            if bl != br {
                return Err(format!("{tag}: brute force disagrees with itself"));
            }
            if lhs.eval(x).map_err(|e| e.to_string())? != bl || rhs.eval(x).map_err(|e| e.to_string())? != br {
                return Err(format!("{tag}: sides differ from brute force at {x}"));
            }
        }
        if !jackson_6phi5_terminating(a, b, c, n as u64, s as u64).map_err(|e| e.to_string())? {
            return Err(format!("{tag}: not an identity"));
        }
        checked += 1;
    }
    Ok(checked)
}

/// The specialization `a = q, b = q, c = q^{1+n}, base q²` that collapses to
/// the `[4k+1]` sum, for odd `n <= max_n`.
pub fn jackson_specialization(max_n: u64) -> Outcome {
    let mut count = 0;
    for n in (1..=max_n).step_by(2) {
        if !jackson_6phi5_terminating(1, 1, 1 + n as i64, (n - 1) / 2, 2).map_err(|e| e.to_string())? {
            return Err(format!("n = {n}"));
        }
        count += 1;
    }
    Ok(count)
}

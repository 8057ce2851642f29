//! Timing table for the polynomial kernels.

use std::fmt::Write as _;
use std::time::Instant;

use qcong_core::cyclotomic::cyclotomic;
use qcong_core::polycore::Poly;
use qcong_core::qseries::{sum_truncated, Family, FamilySpec};

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub degree: usize,
    pub karatsuba_ms: f64,
    pub schoolbook_ms: f64,
    pub division_ms: f64,
    pub valuation_ms: f64,
}

/// Dense test polynomial with coefficients of a few dozen bits, fixed per degree.
fn sample(degree: usize, salt: u64) -> Poly {
    let mut x = 0x9e37_79b9_7f4a_7c15u64 ^ salt ^ degree as u64;
    let coeffs: Vec<i64> = (0..=degree)
        .map(|_| {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            (x >> 20) as i64 - (1 << 43)
        })
        .collect();
    Poly::from_i64s(&coeffs)
}

fn time_ms<T>(reps: usize, mut f: impl FnMut() -> T) -> f64 {
    let start = Instant::now();
    for _ in 0..reps {
        std::hint::black_box(f());
    }
    start.elapsed().as_secs_f64() * 1e3 / reps as f64
}

pub fn run(degrees: &[usize], reps: usize) -> Vec<BenchRow> {
    let reps = reps.max(1);
    degrees
        .iter()
        .map(|&degree| {
            let a = sample(degree, 1);
            let b = sample(degree, 2);
            let prod = a.mul_poly(&b);
            let phi = cyclotomic(105);
            let powered = a.mul_poly(&phi.pow(3));
            BenchRow {
                degree,
                karatsuba_ms: time_ms(reps, || a.mul_poly(&b)),
                schoolbook_ms: time_ms(reps, || a.mul_schoolbook(&b)),
                division_ms: time_ms(reps, || prod.div_rem_monic(&phi)),
                valuation_ms: time_ms(reps, || powered.valuation(&phi)),
            }
        })
        .collect()
}

pub fn table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>7}  {:>13}  {:>13}  {:>12}  {:>13}",
        "degree", "karatsuba ms", "schoolbook ms", "div Φ105 ms", "ord Φ105 ms"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:>7}  {:>13.3}  {:>13.3}  {:>12.3}  {:>13.3}",
            r.degree, r.karatsuba_ms, r.schoolbook_ms, r.division_ms, r.valuation_ms
        );
    }
    out
}

/// Wall time of one truncated sum, as context for the kernel numbers.
pub fn sum_ms(family: Family, upper: u64) -> f64 {
    time_ms(1, || sum_truncated(&FamilySpec::plain(family, 1, upper)))
}

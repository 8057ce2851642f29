//! Cyclotomic polynomials and their multiplicities in `1 - q^m` and `[N]`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::polycore::Poly;

/// Index `n >= 1` of the cyclotomic polynomial `Φ_n(q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct CyclotomicIndex(u64);

impl CyclotomicIndex {
    pub fn new(n: u64) -> Option<Self> {
        (n >= 1).then_some(CyclotomicIndex(n))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn poly(self) -> Arc<Poly> {
        cyclotomic(self.0)
    }
}

impl std::fmt::Display for CyclotomicIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Φ_{}", self.0)
    }
}

fn table() -> &'static RwLock<HashMap<u64, Arc<Poly>>> {
    static TABLE: OnceLock<RwLock<HashMap<u64, Arc<Poly>>>> = OnceLock::new();
    TABLE.get_or_init(Default::default)
}

/// `Φ_n(q)`, built as `(q^n - 1) / ∏_{d | n, d < n} Φ_d(q)` by exact
/// division and memoized.
///
/// Concurrent callers may compute the same entry twice; both results are
/// identical so whichever lands in the table is fine.
pub fn cyclotomic(n: u64) -> Arc<Poly> {
    assert!(n >= 1, "cyclotomic index must be positive");
    if let Some(p) = table().read().expect("cyclotomic table poisoned").get(&n) {
        return Arc::clone(p);
    }
    let mut quot = Poly::monomial(BigInt::one(), n as usize);
    quot = &quot - &Poly::one();
    for d in divisors(n) {
        if d < n {
            quot = quot
                .div_exact_monic(&cyclotomic(d))
                .expect("cyclotomic divisor must divide q^n - 1");
        }
    }
    let p = Arc::new(quot);
    table()
        .write()
        .expect("cyclotomic table poisoned")
        .entry(n)
        .or_insert_with(|| Arc::clone(&p));
    p
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Multiplicity of `Φ_d` in `1 - q^m`: one if `d | m`, else zero.
pub fn ord_cyclotomic_in_one_minus_pow(d: CyclotomicIndex, m: u64) -> u64 {
    debug_assert!(d.0 >= 2 && m >= 1);
    u64::from(m % d.0 == 0)
}

/// The cyclotomic factors of the q-integer `[N] = ∏_{d | N, d > 1} Φ_d`.
pub fn q_integer_cyclotomic_factors(n: u64) -> Vec<CyclotomicIndex> {
    divisors(n)
        .into_iter()
        .filter(|&d| d > 1)
        .map(CyclotomicIndex)
        .collect()
}

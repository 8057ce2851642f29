//! Exact-arithmetic engine for q-analogues of Dwork-type supercongruences.
//!
//! - [`polycore`]: dense integer polynomials and Laurent polynomials in `q`
//! - [`cyclotomic`]: `Φ_n(q)` and cyclotomic multiplicities
//! - [`qseries`]: term families and truncated sums over factored denominators
//! - [`congruence`]: cyclotomic-valuation certification of q-congruences
//! - [`padic`]: the classical limits modulo prime powers

pub mod congruence;
pub mod cyclotomic;
pub mod error;
pub mod padic;
pub mod polycore;
pub mod qseries;

pub use error::{Error, Result};
pub use polycore::{LaurentPoly, Monomial, Poly, Rational, Valuation};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

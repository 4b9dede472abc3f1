//! Cohen-Ramanujan sums `c_r^s(n)`, their expansions, and the asymptotics of
//! shifted convolution sums built from them.
//!
//! * [`arith`]: factorization, Möbius, generalized gcd, Jordan and Klee
//!   totients, divisor sums, zeta.
//! * [`crs`]: exact, fast and oracle evaluation of `c_r^s(n)`.
//! * [`expansion`]: coefficient families and truncated expansions.
//! * [`correlation`]: empirical correlation sums, predicted constants and
//!   lemma bound grids.
//!
//! Series code is generic over [`Scalar`]; the aliases below fix the common
//! choices.

pub mod arith;
pub mod correlation;
pub mod crs;
pub mod error;
pub mod expansion;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

/// Coefficient family over `f64`.
pub type Family = expansion::CoefficientFamily<f64>;
/// Coefficient family with exact rational coefficients.
pub type ExactFamily = expansion::CoefficientFamily<num_rational::BigRational>;

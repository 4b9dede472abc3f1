//! Exact integer arithmetic for the multiplicative functions and the
//! generalized gcd, plus real-valued zeta.

mod factor;
mod functions;
mod sieve;
mod zeta;

pub use factor::{factorize, is_prime, Factorization, TRIAL_LIMIT};
pub use functions::{
    gen_gcd, jordan_of, jordan_totient, klee_phi, mobius, mobius_of, sigma, sigma_spower, tau, tau_s, SPower,
};
pub(crate) use functions::pow_or_overflow;
pub use sieve::{primes_up_to, LinearSieve};
pub use zeta::{euler_gamma, harmonic, zeta, zeta_euler_product, RealApprox};

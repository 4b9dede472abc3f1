//! Riemann zeta on the real axis right of 1, the Euler constant, and
//! harmonic sums, each with an explicit error bound.

use serde::{Deserialize, Serialize};

use super::sieve::primes_up_to;
use crate::error::{Error, Result};
use crate::scalar::{Neumaier, Real};

/// A real value together with an explicit bound on its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealApprox<T = f64> {
    pub value: T,
    pub abs_error_bound: T,
}

impl<T: Real> RealApprox<T> {
    pub fn new(value: T, abs_error_bound: T) -> Self {
        debug_assert!(abs_error_bound >= T::zero());
        Self {
            value,
            abs_error_bound,
        }
    }

    pub fn exact(value: T) -> Self {
        Self::new(value, T::zero())
    }

    pub fn contains(&self, x: T) -> bool {
        (self.value - x).abs() <= self.abs_error_bound
    }

    pub fn mul(self, other: Self) -> Self {
        let value = self.value * other.value;
        let err = self.value.abs() * other.abs_error_bound
            + other.value.abs() * self.abs_error_bound
            + self.abs_error_bound * other.abs_error_bound
            + value.abs() * T::epsilon();
        Self::new(value, err)
    }

    pub fn div(self, other: Self) -> Self {
        let d = other.value.abs() - other.abs_error_bound;
        let value = self.value / other.value;
        let err = if d > T::zero() {
            (self.abs_error_bound + value.abs() * other.abs_error_bound) / d + value.abs() * T::epsilon()
        } else {
            T::infinity()
        };
        Self::new(value, err)
    }

    pub fn scale(self, k: T) -> Self {
        Self::new(self.value * k, self.abs_error_bound * k.abs() + (self.value * k).abs() * T::epsilon())
    }
}

/// Even-index Bernoulli numbers `B_2, B_4, ..., B_20`.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

const ZETA_HEAD: u32 = 16;
const ZETA_CORRECTIONS: usize = 8;

fn cast<T: Real>(x: f64) -> T {
    T::from(x).expect("finite constant")
}

/// `zeta(x)` for real `x > 1`.
///
/// Direct partial sum over `n < 16`, the integral tail `M^(1-x)/(x-1)`,
/// then Euler-Maclaurin corrections. For real `x` the remainder is bounded
/// by the first omitted correction; rounding is bounded separately.
pub fn zeta<T: Real>(x: T) -> Result<RealApprox<T>> {
    if !(x > T::one()) || !x.is_finite() {
        return Err(Error::Domain(format!("zeta needs x > 1, got {x:?}")));
    }
    let m = cast::<T>(ZETA_HEAD as f64);
    let mut acc = Neumaier::default();
    for n in 1..ZETA_HEAD {
        acc.add(cast::<T>(n as f64).powf(-x));
    }
    let m_pow = m.powf(-x);
    acc.add(m * m_pow / (x - T::one()));
    acc.add(m_pow / cast(2.0));

    // j-th correction: B_2j / (2j)! * x (x+1) ... (x+2j-2) * M^(-x-2j+1)
    let mut rising = x; // x (x+1) ... (x + 2j - 2)
    let mut factorial = 2.0f64; // (2j)!
    let mut m_term = m_pow / m; // M^(-x-1)
    let mut omitted = T::zero();
    for (j, &b) in BERNOULLI_EVEN.iter().enumerate().take(ZETA_CORRECTIONS + 1) {
        let term = cast::<T>(b / factorial) * rising * m_term;
        if j == ZETA_CORRECTIONS {
            omitted = term.abs();
            break;
        }
        acc.add(term);
        let k = (2 * j + 2) as f64;
        rising = rising * (x + cast(k - 1.0)) * (x + cast(k));
        factorial *= (k + 1.0) * (k + 2.0);
        m_term = m_term / (m * m);
    }
    let value = acc.total();
    let rounding = cast::<T>((ZETA_HEAD as usize + 2 * ZETA_CORRECTIONS + 8) as f64) * T::epsilon() * value.abs();
    Ok(RealApprox::new(value, omitted + rounding))
}

/// `prod_{p <= cutoff} 1 / (1 - p^-x)`, kept as a cross-check for [`zeta`].
/// The bound covers the omitted primes via `-log(1 - y) <= y / (1 - y)`.
pub fn zeta_euler_product<T: Real>(x: T, prime_cutoff: usize) -> Result<RealApprox<T>> {
    if !(x > T::one()) {
        return Err(Error::Domain(format!("Euler product needs x > 1, got {x:?}")));
    }
    let primes = primes_up_to(prime_cutoff);
    let mut log_acc = Neumaier::default();
    for &p in &primes {
        log_acc.add(-(T::one() - cast::<T>(p as f64).powf(-x)).ln());
    }
    let value = log_acc.total().exp();
    let p = cast::<T>(prime_cutoff.max(1) as f64);
    let y = p.powf(-x);
    let tail = p.powf(T::one() - x) / ((x - T::one()) * (T::one() - y));
    let rounding = cast::<T>(primes.len() as f64 + 4.0) * T::epsilon() * value;
    Ok(RealApprox::new(value, value * tail.exp_m1() + rounding))
}

/// `sum_{n <= x} 1/n`.
pub fn harmonic<T: Real>(x: u64) -> T {
    let mut acc = Neumaier::default();
    for n in (1..=x).rev() {
        acc.add(T::one() / cast::<T>(n as f64));
    }
    acc.total()
}

const GAMMA_TERMS: u64 = 10_000;

/// Euler's constant as `H_n - log n` at `n = 10^4`, with the
/// Euler-Maclaurin tail `-1/(2n) + sum B_2k / (2k n^2k)` added back.
pub fn euler_gamma<T: Real>() -> RealApprox<T> {
    let n = GAMMA_TERMS as f64;
    let mut acc = Neumaier::default();
    acc.add(harmonic::<T>(GAMMA_TERMS));
    acc.add(-cast::<T>(n).ln());
    acc.add(-cast::<T>(1.0 / (2.0 * n)));
    for (k, &b) in BERNOULLI_EVEN.iter().enumerate().take(3) {
        let two_k = (2 * k + 2) as f64;
        acc.add(cast(b / (two_k * n.powf(two_k))));
    }
    let omitted = cast::<T>((BERNOULLI_EVEN[3] / (8.0 * n.powi(8))).abs());
    let value = acc.total();
    // rounding of the harmonic sum and the logarithm
    let rounding = cast::<T>(4.0 * n.ln()) * T::epsilon() * cast(10.0);
    RealApprox::new(value, omitted + rounding)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn closed_forms() {
        let z2 = zeta(2.0f64).unwrap();
        assert!(z2.abs_error_bound <= 1e-12);
        assert!((z2.value - PI * PI / 6.0).abs() <= 1e-14);
        assert!((z2.value - 1.6449340668).abs() < 1e-10);

        let z6 = zeta(6.0f64).unwrap();
        assert!((z6.value - PI.powi(6) / 945.0).abs() <= 1e-14);
        assert!((z6.value - 1.0173430619).abs() < 1e-10);

        let z4 = zeta(4.0f64).unwrap();
        assert!((z4.value - PI.powi(4) / 90.0).abs() <= 1e-14);
    }

    #[test]
    fn zeta_twenty_against_direct_series() {
        // direct series; tail after 100 terms is below 100^-19 / 19
        let direct: f64 = (1..=100).rev().map(|n: i32| (n as f64).powi(-20)).sum();
        let z = zeta(20.0f64).unwrap();
        assert!((z.value - direct).abs() < 1e-15);
        assert!((z.value - 1.0000009540).abs() < 1e-10);
    }

    #[test]
    fn bound_is_tight_for_x_at_least_two() {
        for x in [2.0, 2.5, 3.0, 5.0, 10.0, 40.0] {
            let z = zeta(x).unwrap();
            assert!(z.abs_error_bound <= 1e-12, "x={x} bound={}", z.abs_error_bound);
        }
    }

    #[test]
    fn euler_product_agrees() {
        for x in [2.0f64, 3.0, 6.0] {
            let series = zeta(x).unwrap();
            let product = zeta_euler_product(x, 100_000).unwrap();
            assert!(
                (series.value - product.value).abs() <= series.abs_error_bound + product.abs_error_bound,
                "x={x}"
            );
        }
    }

    #[test]
    fn rejects_x_at_most_one() {
        assert!(zeta(1.0f64).is_err());
        assert!(zeta(0.5f64).is_err());
        assert!(zeta(f64::NAN).is_err());
    }

    #[test]
    fn single_precision() {
        let z = zeta(3.0f32).unwrap();
        assert!((z.value as f64 - 1.2020569031595942).abs() <= z.abs_error_bound as f64 + 1e-7);
    }

    #[test]
    fn euler_constant() {
        let c = euler_gamma::<f64>();
        assert!(c.abs_error_bound <= 1e-9);
        assert!(c.contains(0.5772156649015329));
    }

    #[test]
    fn harmonic_sum_lemma() {
        let c = euler_gamma::<f64>().value;
        for x in [1_000u64, 10_000, 100_000] {
            let dev = (harmonic::<f64>(x) - (x as f64).ln() - c).abs();
            assert!(dev <= 1.0 / x as f64, "x={x} dev={dev}");
        }
    }
}

//! Scalar abstraction shared by the expansion and correlation code.
//!
//! Everything that sums coefficients or function values is generic over
//! [`Scalar`], which is implemented for `f32`, `f64` and the exact
//! [`BigRational`]. Floating-point types additionally implement [`Real`]
//! and sum with Neumaier compensation; rationals sum exactly.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, Num, One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + Send + Sync + 'static {
    /// `num / den`, exact for rational scalars.
    fn from_ratio(num: i128, den: u128) -> Self;

    /// Nearest representable value; rationals take the exact binary value.
    fn from_real(x: f64) -> Self;

    fn to_real(&self) -> f64;

    fn from_rational(q: &BigRational) -> Self;

    /// Literal accepted back by the tabulated-function reader.
    fn to_literal(&self) -> String;

    /// Sum in iteration order.
    fn sum_in_order<I: IntoIterator<Item = Self>>(items: I) -> Self {
        items.into_iter().fold(Self::zero(), |acc, x| acc + x)
    }

    /// `base^(-exp)`.
    fn recip_pow(base: u64, exp: u32) -> Self {
        let mut acc = Self::one();
        let b = Self::from_ratio(base as i128, 1);
        for _ in 0..exp {
            acc = acc * b.clone();
        }
        Self::one() / acc
    }
}

/// Floating-point scalars.
pub trait Real: Scalar + Float {}

impl Scalar for f64 {
    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn to_literal(&self) -> String {
        format!("{:?}", self)
    }
    fn from_ratio(num: i128, den: u128) -> Self {
        num as f64 / den as f64
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn to_real(&self) -> f64 {
        *self
    }
    fn sum_in_order<I: IntoIterator<Item = Self>>(items: I) -> Self {
        let mut acc = Neumaier::default();
        for x in items {
            acc.add(x);
        }
        acc.total()
    }
    fn recip_pow(base: u64, exp: u32) -> Self {
        (base as f64).powi(-(exp as i32))
    }
}

impl Scalar for f32 {
    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN) as f32
    }
    fn to_literal(&self) -> String {
        format!("{:?}", self)
    }
    fn from_ratio(num: i128, den: u128) -> Self {
        (num as f64 / den as f64) as f32
    }
    fn from_real(x: f64) -> Self {
        x as f32
    }
    fn to_real(&self) -> f64 {
        *self as f64
    }
    fn sum_in_order<I: IntoIterator<Item = Self>>(items: I) -> Self {
        let mut acc = Neumaier::default();
        for x in items {
            acc.add(x);
        }
        acc.total()
    }
    fn recip_pow(base: u64, exp: u32) -> Self {
        (base as f64).powi(-(exp as i32)) as f32
    }
}

impl Scalar for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn to_literal(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
    fn from_ratio(num: i128, den: u128) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_real(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(BigRational::zero)
    }
    fn to_real(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
    fn recip_pow(base: u64, exp: u32) -> Self {
        BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(base), exp as usize))
    }
}

impl Real for f64 {}
impl Real for f32 {}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy)]
pub struct Neumaier<T> {
    sum: T,
    compensation: T,
}

impl<T: Float> Default for Neumaier<T> {
    fn default() -> Self {
        Self {
            sum: T::zero(),
            compensation: T::zero(),
        }
    }
}

impl<T: Float> Neumaier<T> {
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation = self.compensation + ((self.sum - t) + x);
        } else {
            self.compensation = self.compensation + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn total(&self) -> T {
        self.sum + self.compensation
    }
}

/// Block length used by [`blocked_sum`]. Fixed so results do not depend on
/// the thread count.
pub const SUM_BLOCK: usize = 1 << 14;

/// Sums `term(i)` for `i` in `range` by fixed-size blocks, each summed in
/// order, then combined by a pairwise tree over the block totals. The
/// result is bit-identical for any rayon pool size.
pub fn blocked_sum<T, F>(range: std::ops::Range<usize>, term: F) -> T
where
    T: Scalar,
    F: Fn(usize) -> T + Sync,
{
    if range.is_empty() {
        return T::zero();
    }
    let start = range.start;
    let len = range.end - range.start;
    let blocks = len.div_ceil(SUM_BLOCK);
    let partials: Vec<T> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = start + b * SUM_BLOCK;
            let hi = (lo + SUM_BLOCK).min(range.end);
            T::sum_in_order((lo..hi).map(&term))
        })
        .collect();
    pairwise(partials)
}

fn pairwise<T: Scalar>(mut values: Vec<T>) -> T {
    while values.len() > 1 {
        let mut next = Vec::with_capacity(values.len().div_ceil(2));
        let mut it = values.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a + b),
                None => next.push(a),
            }
        }
        values = next;
    }
    values.pop().unwrap_or_else(T::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let values = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(f64::sum_in_order(values), 2.0);
    }

    #[test]
    fn blocked_sum_is_independent_of_pool_size() {
        let term = |i: usize| 1.0 / ((i + 1) as f64).powi(2);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a: f64 = one.install(|| blocked_sum(0..200_000, term));
        let b: f64 = four.install(|| blocked_sum(0..200_000, term));
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn rational_sum_is_exact() {
        let total: BigRational = blocked_sum(0..40_000, |i| BigRational::from_ratio(1, (i % 7 + 1) as u128));
        let per_cycle = BigRational::from_ratio(363, 140);
        // 40000 = 7 * 5714 + 2
        let expected = per_cycle * BigRational::from_ratio(5714, 1) + BigRational::from_ratio(3, 2);
        assert_eq!(total, expected);
    }

    #[test]
    fn recip_pow_matches_across_scalars() {
        assert_eq!(f64::recip_pow(2, 5), 1.0 / 32.0);
        assert_eq!(BigRational::recip_pow(2, 5), BigRational::from_ratio(1, 32));
    }
}

//! Cohen-Ramanujan sums `c_r^s(n)`.
//!
//! The canonical evaluator is the Möbius-divisor form
//! `c_r^s(n) = sum_{d | r, d^s | n} mu(r/d) d^s`. The exponential sum that
//! defines `c_r^s` is kept as a floating-point oracle.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, mobius_of, Factorization, RealApprox, SPower};
use crate::error::{Error, Result};

/// Largest modulus `r^s` accepted by the exponential-sum oracle.
pub const DIRECT_MODULUS_LIMIT: u128 = 1_000_000;

/// Tolerance for rounding the oracle to an integer.
pub const DIRECT_TOLERANCE: f64 = 1e-6;

/// Largest modulus for which [`CrsTable`] stores a full period.
pub const TABLE_MODULUS_LIMIT: u128 = 1 << 26;

/// The pair `(r, s)` with `r^s` precomputed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrsParams {
    r: u64,
    s: u32,
    modulus: SPower,
    r_factors: Factorization,
}

impl CrsParams {
    pub fn new(r: u64, s: u32) -> Result<Self> {
        let modulus = SPower::new(r, s)?;
        Ok(Self {
            r,
            s,
            modulus,
            r_factors: factorize(r)?,
        })
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn modulus(&self) -> SPower {
        self.modulus
    }

    pub fn r_factors(&self) -> &Factorization {
        &self.r_factors
    }

    fn reduce(&self, n: u128) -> u128 {
        n % self.modulus.value()
    }
}

/// Exact `c_r^s(n)` by the Möbius-divisor sum.
pub fn crs_exact(p: &CrsParams, n: u128) -> Result<i128> {
    let n = p.reduce(n);
    let mut acc: i128 = 0;
    for d in p.r_factors.divisors() {
        let ds = (d as u128).pow(p.s);
        if !n.is_multiple_of(ds) {
            continue;
        }
        let mu = mobius_of(&factorize(p.r / d)?);
        acc += mu as i128 * ds as i128;
    }
    Ok(acc)
}

/// `c_r^s(n)` as a product over the prime powers `p^e || r`. Only the
/// divisors `p^e` and `p^(e-1)` contribute to each local sum.
pub fn crs_fast(p: &CrsParams, n: u128) -> Result<i128> {
    let n = p.reduce(n);
    let mut acc: i128 = 1;
    for &(q, e) in p.r_factors.factors() {
        let qs = (q as u128).pow(p.s);
        let lower = qs.pow(e - 1);
        let upper = lower * qs;
        let local = if n.is_multiple_of(upper) {
            (upper - lower) as i128
        } else if n.is_multiple_of(lower) {
            -(lower as i128)
        } else {
            return Ok(0);
        };
        acc *= local;
    }
    Ok(acc)
}

/// Residues `h` in `[1, r^s]` with `(h, r^s)_s = 1`, as a mask indexed by
/// `h mod r^s`. A common `l^s > 1` exists iff some prime `q | r` has
/// `q^s | h`.
fn s_coprime_mask(p: &CrsParams) -> Result<Vec<bool>> {
    let m = p.modulus.value();
    if m > DIRECT_MODULUS_LIMIT {
        return Err(Error::Domain(format!(
            "oracle modulus r^s = {m} exceeds {DIRECT_MODULUS_LIMIT}"
        )));
    }
    let m = m as usize;
    let mut mask = vec![true; m];
    for q in p.r_factors.primes() {
        let qs = (q as usize).pow(p.s);
        for h in (0..m).step_by(qs) {
            mask[h] = false;
        }
    }
    Ok(mask)
}

fn round_checked(context: impl FnOnce() -> String, z: Complex64, bound: f64) -> Result<RealApprox> {
    let rounded = z.re.round();
    let deviation = z.im.abs().max((z.re - rounded).abs());
    if deviation >= DIRECT_TOLERANCE {
        return Err(Error::Tolerance {
            context: context(),
            deviation,
            tolerance: DIRECT_TOLERANCE,
        });
    }
    Ok(RealApprox::new(z.re, bound))
}

/// Direct evaluation of `sum_{h <= r^s, (h, r^s)_s = 1} e(nh / r^s)`.
///
/// Fails if the imaginary part or the distance of the real part to the
/// nearest integer reaches [`DIRECT_TOLERANCE`].
pub fn crs_direct(p: &CrsParams, n: u128) -> Result<RealApprox> {
    let mask = s_coprime_mask(p)?;
    let m = mask.len() as u128;
    let step = (n % m) as usize;
    let m = m as usize;
    let mut idx = 0usize;
    let mut z = Complex64::new(0.0, 0.0);
    let mut terms = 0usize;
    for h in 1..=m {
        idx += step;
        if idx >= m {
            idx -= m;
        }
        if mask[h % m] {
            let (sin, cos) = (TAU * idx as f64 / m as f64).sin_cos();
            z += Complex64::new(cos, sin);
            terms += 1;
        }
    }
    let bound = 4.0 * terms as f64 * f64::EPSILON;
    round_checked(|| format!("crs_direct(r={}, s={}, n={n})", p.r, p.s), z, bound)
}

/// [`crs_direct`] for every residue `n = 0, ..., r^s - 1` at once, through
/// an inverse DFT of the indicator of the `s`-reduced residues.
pub fn crs_direct_period(p: &CrsParams) -> Result<Vec<RealApprox>> {
    let mask = s_coprime_mask(p)?;
    let m = mask.len();
    let mut buf: Vec<Complex64> = mask
        .iter()
        .map(|&b| Complex64::new(if b { 1.0 } else { 0.0 }, 0.0))
        .collect();
    let fft = FftPlanner::new().plan_fft_inverse(m);
    fft.process(&mut buf);
    let terms = mask.iter().filter(|&&b| b).count() as f64;
    let bound = 8.0 * terms * ((m as f64).log2() + 1.0) * f64::EPSILON;
    buf.into_iter()
        .enumerate()
        .map(|(n, z)| round_checked(|| format!("crs_direct_period(r={}, s={}, n={n})", p.r, p.s), z, bound))
        .collect()
}

/// One full period of `c_r^s`, for repeated lookups.
#[derive(Debug, Clone)]
pub struct CrsTable {
    r: u64,
    s: u32,
    values: Vec<i64>,
}

impl CrsTable {
    pub fn new(p: &CrsParams) -> Result<Self> {
        let m = p.modulus.value();
        if m > TABLE_MODULUS_LIMIT {
            return Err(Error::Domain(format!("period r^s = {m} too long to tabulate")));
        }
        let m = m as usize;
        let mut values = vec![0i64; m];
        for d in p.r_factors.divisors() {
            let mu = mobius_of(&factorize(p.r / d)?) as i64;
            if mu == 0 {
                continue;
            }
            let ds = (d as usize).pow(p.s);
            for j in (0..m).step_by(ds) {
                values[j] += mu * ds as i64;
            }
        }
        Ok(Self {
            r: p.r,
            s: p.s,
            values,
        })
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn get(&self, n: u64) -> i64 {
        self.values[(n % self.values.len() as u64) as usize]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

/// `(1/r^s) sum_{m=1}^{r^s} c_d^s(m) c_t^s(m)` for all `d, t | r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalityTable {
    pub r: u64,
    pub s: u32,
    pub entries: BTreeMap<(u64, u64), i128>,
}

pub fn orthogonality_table(r: u64, s: u32) -> Result<OrthogonalityTable> {
    let p = CrsParams::new(r, s)?;
    let m = p.modulus.value();
    if m > DIRECT_MODULUS_LIMIT {
        return Err(Error::Domain(format!("r^s = {m} exceeds {DIRECT_MODULUS_LIMIT}")));
    }
    let divisors = p.r_factors.divisors();
    let tables = divisors
        .iter()
        .map(|&d| CrsTable::new(&CrsParams::new(d, s)?))
        .collect::<Result<Vec<_>>>()?;
    let mut entries = BTreeMap::new();
    for (i, &d) in divisors.iter().enumerate() {
        for (j, &t) in divisors.iter().enumerate() {
            let total: i128 = (1..=m as u64)
                .map(|k| tables[i].get(k) as i128 * tables[j].get(k) as i128)
                .sum();
            if total % m as i128 != 0 {
                return Err(Error::InexactDivision {
                    numerator: total,
                    denominator: m as i128,
                });
            }
            entries.insert((d, t), total / m as i128);
        }
    }
    Ok(OrthogonalityTable { r, s, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{gen_gcd, jordan_totient, klee_phi, sigma_spower};
    use proptest::prelude::*;

    fn params(r: u64, s: u32) -> CrsParams {
        CrsParams::new(r, s).unwrap()
    }

    // e(nh/M) summed over h with (h, M)_s = 1 using the gcd routine itself
    fn definitional(r: u64, s: u32, n: u64) -> f64 {
        let m = r.pow(s);
        (1..=m)
            .filter(|&h| gen_gcd(s, h, m).unwrap() == 1)
            .map(|h| (TAU * ((n % m) * h % m) as f64 / m as f64).cos())
            .sum()
    }

    #[test]
    fn exact_examples() {
        assert_eq!(crs_exact(&params(3, 2), 0).unwrap(), 8);
        assert_eq!(crs_exact(&params(1, 2), 17).unwrap(), 1);
        assert_eq!(crs_exact(&params(2, 2), 1).unwrap(), -1);
        assert_eq!(crs_exact(&params(2, 2), 4).unwrap(), 3);
        assert_eq!(definitional(2, 2, 1).round(), -1.0);
        assert_eq!(definitional(2, 2, 4).round(), 3.0);
    }

    #[test]
    fn direct_examples() {
        assert_eq!(crs_direct(&params(2, 1), 1).unwrap().value.round(), -1.0);
        assert_eq!(crs_direct(&params(2, 2), 2).unwrap().value.round(), -1.0);
        assert_eq!(crs_direct(&params(4, 1), 0).unwrap().value.round(), 2.0);
    }

    #[test]
    fn fast_examples() {
        assert_eq!(crs_fast(&params(6, 1), 3).unwrap(), crs_exact(&params(6, 1), 3).unwrap());
        assert_eq!(crs_fast(&params(6, 1), 3).unwrap(), -2);
        assert_eq!(crs_fast(&params(1, 1), 0).unwrap(), 1);
        // mu(5) * 1 + mu(1) * 25
        assert_eq!(crs_exact(&params(5, 2), 25).unwrap(), 24);
        assert_eq!(crs_fast(&params(5, 2), 25).unwrap(), 24);
    }

    #[test]
    fn mask_matches_generalized_gcd() {
        for (r, s) in [(12u64, 2u32), (6, 3), (10, 1), (9, 2)] {
            let p = params(r, s);
            let mask = s_coprime_mask(&p).unwrap();
            let m = r.pow(s);
            for h in 1..=m {
                assert_eq!(mask[(h % m) as usize], gen_gcd(s, h, m).unwrap() == 1, "r={r} s={s} h={h}");
            }
        }
    }

    #[test]
    fn exact_matches_definitional_sum() {
        for s in 1..=2 {
            for r in 1..=8u64 {
                for n in 0..r.pow(s) {
                    let exact = crs_exact(&params(r, s), n as u128).unwrap();
                    assert_eq!(exact as f64, definitional(r, s, n).round(), "r={r} s={s} n={n}");
                }
            }
        }
    }

    #[test]
    fn period_oracle_matches_pointwise_oracle() {
        for (r, s) in [(12u64, 1u32), (6, 2), (4, 3), (1, 2)] {
            let p = params(r, s);
            let batch = crs_direct_period(&p).unwrap();
            for (n, v) in batch.iter().enumerate() {
                let single = crs_direct(&p, n as u128).unwrap();
                assert_eq!(v.value.round(), single.value.round());
            }
        }
    }

    #[test]
    fn oracle_rejects_large_modulus() {
        assert!(crs_direct(&params(1001, 2), 1).is_err());
    }

    #[test]
    fn overflow_reported() {
        assert!(matches!(CrsParams::new(1 << 40, 4), Err(Error::Overflow { .. })));
    }

    #[test]
    fn table_matches_exact() {
        for s in 1..=3 {
            for r in 1..=12u64 {
                let p = params(r, s);
                let t = CrsTable::new(&p).unwrap();
                for n in 0..2 * t.period() as u64 {
                    assert_eq!(t.get(n) as i128, crs_exact(&p, n as u128).unwrap());
                }
            }
        }
    }

    #[test]
    fn orthogonality_examples() {
        let t = orthogonality_table(2, 1).unwrap();
        let expected: BTreeMap<_, _> = [((1, 1), 1), ((1, 2), 0), ((2, 1), 0), ((2, 2), 1)].into_iter().collect();
        assert_eq!(t.entries, expected);
        let t = orthogonality_table(1, 3).unwrap();
        assert_eq!(t.entries, [((1, 1), 1)].into_iter().collect());
        let t = orthogonality_table(6, 1).unwrap();
        for (&(d, e), &v) in &t.entries {
            let want = if d == e { [1, 1, 2, 2][[1, 2, 3, 6].iter().position(|&x| x == d).unwrap()] } else { 0 };
            assert_eq!(v, want, "d={d} t={e}");
        }
    }

    #[test]
    fn n_zero_is_jordan() {
        for s in 1..=3 {
            for r in 1..=50u64 {
                let c0 = crs_exact(&params(r, s), 0).unwrap();
                assert_eq!(c0 as u128, jordan_totient(s, r).unwrap());
                assert_eq!(c0 as u64, klee_phi(s, r.pow(s)).unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn fast_equals_exact(r in 1u64..=60, s in 1u32..=3, n in 0u128..1_000_000_000) {
            let p = params(r, s);
            prop_assert_eq!(crs_fast(&p, n).unwrap(), crs_exact(&p, n).unwrap());
        }

        #[test]
        fn periodic(r in 1u64..=30, s in 1u32..=3, n in 0u128..100_000) {
            let p = params(r, s);
            let m = p.modulus().value();
            prop_assert_eq!(crs_exact(&p, n + m).unwrap(), crs_exact(&p, n).unwrap());
        }

        #[test]
        fn multiplicative_in_r(a in 1u64..=30, b in 1u64..=30, s in 1u32..=3, n in 0u128..50_000) {
            prop_assume!(num_integer::gcd(a, b) == 1);
            let ab = crs_exact(&params(a * b, s), n).unwrap();
            prop_assert_eq!(ab, crs_exact(&params(a, s), n).unwrap() * crs_exact(&params(b, s), n).unwrap());
        }

        #[test]
        fn bounded_by_sigma_spower(r in 1u64..=30, s in 1u32..=3, n in 1u64..=10_000) {
            let c = crs_exact(&params(r, s), n as u128).unwrap();
            prop_assert!(c.unsigned_abs() <= sigma_spower(s, n).unwrap());
        }
    }
}

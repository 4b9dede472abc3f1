use serde::{Deserialize, Serialize};

use super::family::{ArgumentMode, CoefficientFamily, Envelope, FamilyKind};
use crate::arith::{factorize, primes_up_to, sigma_spower, RealApprox};
use crate::crs::{crs_fast, CrsParams, CrsTable};
use crate::error::{Error, Result};
use crate::scalar::{blocked_sum, Scalar};

/// Partial sum of an expansion at one `n`, with a bound on the omitted tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedEvaluation<T> {
    pub n: u64,
    pub rank: u64,
    pub partial_sum: T,
    /// `None` when no bound is available.
    pub tail_bound: Option<f64>,
}

/// `sigma_{1,s}(arg)`, the bound on `|c_r^s(arg)|` used for tails.
pub fn crs_magnitude_bound(s: u32, mode: ArgumentMode, n: u64) -> Result<f64> {
    match mode {
        ArgumentMode::Plain => Ok(sigma_spower(s, n)? as f64),
        // sigma_{1,s}(n^s) = sum_{d | n} d^s
        ArgumentMode::SPower => Ok(factorize(n)?
            .divisors()
            .iter()
            .map(|&d| (d as f64).powi(s as i32))
            .sum()),
    }
}

/// `sum_{r > rank} |f^(r)|` from the family envelope.
fn coefficient_tail<T: Scalar>(family: &CoefficientFamily<T>, rank: u64) -> Result<Option<f64>> {
    match family.envelope() {
        Envelope::Power { scale, decay } if decay > 1.0 => {
            Ok(Some(scale * (rank as f64).powf(1.0 - decay) / (decay - 1.0)))
        }
        Envelope::Power { .. } => Ok(None),
        Envelope::Finite { len } => {
            let mut acc = 0.0;
            for r in rank + 1..=len {
                acc += family.coeff(r)?.to_real().abs();
            }
            Ok(Some(acc))
        }
    }
}

/// `sum_{r <= rank} f^(r) c_r^s(arg(n))`.
pub fn eval_truncated<T: Scalar>(family: &CoefficientFamily<T>, n: u64, rank: u64) -> Result<TruncatedEvaluation<T>> {
    if n == 0 {
        return Err(Error::ZeroArgument("expansion argument n"));
    }
    if rank == 0 {
        return Err(Error::ZeroArgument("truncation rank"));
    }
    let arg = family.argument(n)?;
    let terms = (1..=rank)
        .map(|r| {
            let c = crs_fast(&CrsParams::new(r, family.s())?, arg)?;
            if c == 0 {
                return Ok(T::zero());
            }
            Ok(family.coeff(r)? * T::from_ratio(c, 1))
        })
        .collect::<Result<Vec<T>>>()?;
    let abs_sum: f64 = terms.iter().map(|t| t.to_real().abs()).sum();
    let partial_sum = blocked_sum(0..terms.len(), |i| terms[i].clone());
    let bound = crs_magnitude_bound(family.s(), family.mode(), n)?;
    let rounding = (rank as f64 + 2.0) * f64::EPSILON * abs_sum;
    let tail_bound = coefficient_tail(family, rank)?.map(|t| t * bound + rounding);
    Ok(TruncatedEvaluation {
        n,
        rank,
        partial_sum,
        tail_bound,
    })
}

/// Smallest rank whose power-envelope tail at `n` is at most `target`.
pub fn rank_for_tail<T: Scalar>(family: &CoefficientFamily<T>, n: u64, target: f64) -> Result<Option<u64>> {
    if target <= 0.0 {
        return Err(Error::Domain("target tail must be positive".into()));
    }
    let bound = crs_magnitude_bound(family.s(), family.mode(), n)?;
    Ok(match family.envelope() {
        Envelope::Power { scale, decay } if decay > 1.0 => {
            let r = (scale * bound / ((decay - 1.0) * target)).powf(1.0 / (decay - 1.0));
            Some(r.ceil().max(1.0) as u64)
        }
        Envelope::Power { .. } => None,
        Envelope::Finite { len } => Some(len.max(1)),
    })
}

/// Infinite sum of a `Sigma` or `Jordan` family at `n`, by its Euler
/// product. Primes up to `prime_cutoff` are multiplied out term by term
/// from the coefficients and `c_{p^e}^s`; the remaining primes, none of
/// which divide `n`, contribute a zeta closed form.
pub fn eval_euler_product<T: Scalar>(
    family: &CoefficientFamily<T>,
    n: u64,
    prime_cutoff: u64,
) -> Result<RealApprox> {
    if !family.euler_factorable() || family.mode() != ArgumentMode::SPower {
        return Err(Error::Domain(
            "Euler product evaluation needs a sigma or jordan family in s-power mode".into(),
        ));
    }
    let nf = factorize(n)?;
    if nf.primes().any(|p| p > prime_cutoff) {
        return Err(Error::Domain("prime cutoff below a prime factor of n".into()));
    }
    let s = family.s();
    let arg = family.argument(n)?;
    let (global, local_weight, completion_exp, zeta_c): (f64, Box<dyn Fn(u64) -> Result<f64>>, u32, RealApprox) =
        match family.kind() {
            FamilyKind::Sigma { k, zeta } => {
                let z = (k + 1) * s;
                (zeta.value, Box::new(move |q| Ok((q as f64).powi(-(z as i32)))), z, *zeta)
            }
            FamilyKind::Jordan { k, zeta } => {
                let z = s + k;
                let coeff = move |q: u64| -> Result<f64> {
                    let f = factorize(q)?;
                    let mu = crate::arith::mobius_of(&f);
                    if mu == 0 {
                        return Ok(0.0);
                    }
                    Ok(mu as f64 / crate::arith::jordan_totient(z, q)? as f64)
                };
                (1.0 / zeta.value, Box::new(coeff), z, *zeta)
            }
            _ => unreachable!(),
        };

    let mut log_acc = crate::scalar::Neumaier::default();
    let mut log_completion = crate::scalar::Neumaier::default();
    let primes = primes_up_to(prime_cutoff as usize);
    for &p in &primes {
        // c_{p^e}^s(arg) vanishes once p^{(e-1)s} does not divide arg
        let mut local = 0.0;
        let mut pe = 1u64;
        for _ in 0..64 {
            let c = crs_fast(&CrsParams::new(pe, s)?, arg)?;
            local += local_weight(pe)? * c as f64;
            let lower = (pe as u128).pow(s);
            if arg % lower != 0 {
                break;
            }
            match pe.checked_mul(p) {
                Some(next) if (next as u128).checked_pow(s).is_some() => pe = next,
                _ => break,
            }
        }
        log_acc.add(local.ln());
        log_completion.add((1.0 - (p as f64).powi(-(completion_exp as i32))).ln());
    }
    // prod_{p > P} (1 - p^-z) = 1 / (zeta(z) prod_{p <= P} (1 - p^-z))
    let log_tail = match family.kind() {
        FamilyKind::Sigma { .. } => -zeta_c.value.ln() - log_completion.total(),
        _ => zeta_c.value.ln() + log_completion.total(),
    };
    let value = global * (log_acc.total() + log_tail).exp();
    let rel = 2.0 * zeta_c.abs_error_bound / zeta_c.value + (4.0 * primes.len() as f64 + 16.0) * f64::EPSILON;
    Ok(RealApprox::new(value, value.abs() * rel))
}

/// Values of the rank-`rank` truncation at `n = 1, ..., upto`, computed
/// from one period table per `r`.
pub fn tabulate_truncated<T: Scalar>(family: &CoefficientFamily<T>, upto: u64, rank: u64) -> Result<Vec<T>> {
    let s = family.s();
    let mut columns: Vec<(T, Vec<i64>)> = Vec::new();
    for r in 1..=rank {
        let coeff = family.coeff(r)?;
        if coeff.is_zero() {
            continue;
        }
        let p = CrsParams::new(r, s)?;
        let period = match family.mode() {
            ArgumentMode::Plain => CrsTable::new(&p)?.values().to_vec(),
            // c_r^s(n^s) has period r in n
            ArgumentMode::SPower => (0..r)
                .map(|j| Ok(crs_fast(&p, (j as u128).pow(s))? as i64))
                .collect::<Result<Vec<_>>>()?,
        };
        columns.push((coeff, period));
    }
    Ok((1..=upto)
        .map(|n| {
            T::sum_in_order(
                columns
                    .iter()
                    .map(|(c, t)| c.clone() * T::from_ratio(t[(n % t.len() as u64) as usize] as i128, 1)),
            )
        })
        .collect())
}

/// Estimate of `f^(r) = M(f c_r^s) / Phi_s(r^s)` from `f(1), ..., f(x)`.
///
/// The window is cut down to a whole number of periods `r^s`.
pub fn extract_coeff<T: Scalar>(values: &[T], s: u32, r: u64, x: u64) -> Result<T> {
    let p = CrsParams::new(r, s)?;
    let period = p.modulus().value();
    if (x as u128) < period {
        return Err(Error::Domain(format!("window x = {x} shorter than one period r^s = {period}")));
    }
    if values.len() < x as usize {
        return Err(Error::Domain(format!("only {} values tabulated, need {x}", values.len())));
    }
    let x = (x as u128 / period * period) as u64;
    let table = CrsTable::new(&p)?;
    let total = blocked_sum(0..x as usize, |i| {
        let c = table.get(i as u64 + 1);
        if c == 0 {
            T::zero()
        } else {
            values[i].clone() * T::from_ratio(c as i128, 1)
        }
    });
    let phi = table.get(0) as i128;
    Ok(total * T::from_ratio(1, x as u128) / T::from_ratio(phi, 1))
}

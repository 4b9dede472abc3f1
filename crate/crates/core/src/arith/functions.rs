//! Multiplicative functions and the generalized gcd, in exact integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::factor::{factorize, Factorization};
use crate::error::{Error, Result};

/// `base^s` held exactly; construction fails instead of wrapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SPower {
    base: u64,
    s: u32,
    value: u128,
}

impl SPower {
    pub fn new(base: u64, s: u32) -> Result<Self> {
        if base == 0 {
            return Err(Error::ZeroArgument("s-power base"));
        }
        if s == 0 {
            return Err(Error::ZeroArgument("exponent s"));
        }
        let value = checked_pow(base as u128, s).ok_or_else(|| Error::overflow(format!("{base}^{s}")))?;
        Ok(Self { base, s, value })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn value(&self) -> u128 {
        self.value
    }
}

pub(crate) fn checked_pow(base: u128, exp: u32) -> Option<u128> {
    base.checked_pow(exp)
}

pub(crate) fn pow_or_overflow(base: u128, exp: u32) -> Result<u128> {
    checked_pow(base, exp).ok_or_else(|| Error::overflow(format!("{base}^{exp}")))
}

fn check_s(s: u32) -> Result<()> {
    if s == 0 {
        Err(Error::ZeroArgument("exponent s"))
    } else {
        Ok(())
    }
}

/// Möbius function.
pub fn mobius(n: u64) -> Result<i8> {
    Ok(mobius_of(&factorize(n)?))
}

pub fn mobius_of(f: &Factorization) -> i8 {
    if f.factors().iter().any(|&(_, e)| e > 1) {
        0
    } else if f.factors().len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Generalized gcd `(m, n)_s`: the largest `l^s` dividing both arguments.
pub fn gen_gcd(s: u32, m: u64, n: u64) -> Result<u64> {
    check_s(s)?;
    if m == 0 && n == 0 {
        return Err(Error::Domain("(0, 0)_s is undefined".into()));
    }
    let g = m.gcd(&n);
    let root = factorize(g)?.s_root(s);
    // root^s divides g, so it fits
    Ok(root.pow(s))
}

/// Jordan totient `J_s(n) = n^s prod_{p|n} (1 - p^-s)`.
pub fn jordan_totient(s: u32, n: u64) -> Result<u128> {
    check_s(s)?;
    jordan_of(s, &factorize(n)?)
}

pub fn jordan_of(s: u32, f: &Factorization) -> Result<u128> {
    pow_or_overflow(f.n() as u128, s)?;
    let mut acc = 1u128;
    for &(p, e) in f.factors() {
        let ps = pow_or_overflow(p as u128, s)?;
        let head = pow_or_overflow(ps, e - 1)?;
        acc *= head * (ps - 1);
    }
    Ok(acc)
}

/// Klee's function `Phi_s(n)`, via `sum_{d^s | n} mu(d) n / d^s`.
pub fn klee_phi(s: u32, n: u64) -> Result<u64> {
    check_s(s)?;
    let f = factorize(n)?;
    let root = Factorization::from_parts(
        f.s_root(s),
        f.factors()
            .iter()
            .filter(|&&(_, e)| e >= s)
            .map(|&(p, e)| (p, e / s))
            .collect(),
    );
    let mut acc: i128 = 0;
    for d in root.divisors() {
        let mu = mobius_of(&factorize(d)?) as i128;
        if mu != 0 {
            acc += mu * (n / d.pow(s)) as i128;
        }
    }
    Ok(acc as u64)
}

/// Number of perfect `s`-th powers dividing `n`.
pub fn tau_s(s: u32, n: u64) -> Result<u64> {
    check_s(s)?;
    Ok(factorize(n)?
        .factors()
        .iter()
        .map(|&(_, e)| (e / s) as u64 + 1)
        .product())
}

/// Ordinary divisor count.
pub fn tau(n: u64) -> Result<u64> {
    tau_s(1, n)
}

/// `sigma_t(n) = sum_{d | n} d^t` as an exact rational; `t` may be negative.
pub fn sigma(t: i32, n: u64) -> Result<BigRational> {
    let f = factorize(n)?;
    let mut acc = BigRational::one();
    for &(p, e) in f.factors() {
        let pt = if t >= 0 {
            BigRational::from_integer(num_traits::pow(BigInt::from(p), t as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(p), t.unsigned_abs() as usize))
        };
        let mut local = BigRational::zero();
        let mut term = BigRational::one();
        for _ in 0..=e {
            local += &term;
            term *= &pt;
        }
        acc *= local;
    }
    Ok(acc)
}

/// `sigma_{1,s}(n) = sum of d^s over d with d^s | n`.
pub fn sigma_spower(s: u32, n: u64) -> Result<u128> {
    check_s(s)?;
    let f = factorize(n)?;
    let mut acc = 1u128;
    for &(p, e) in f.factors() {
        let ps = pow_or_overflow(p as u128, s)?;
        let mut local = 0u128;
        let mut term = 1u128;
        for _ in 0..=(e / s) {
            local += term;
            term = term.saturating_mul(ps);
        }
        acc = acc.checked_mul(local).ok_or_else(|| Error::overflow("sigma_{1,s}"))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_gen_gcd(s: u32, m: u64, n: u64) -> u64 {
        let bound = m.max(n);
        let mut best = 1;
        let mut l = 1u64;
        while l.pow(s) <= bound {
            let ls = l.pow(s);
            if m.is_multiple_of(ls) && n.is_multiple_of(ls) {
                best = ls;
            }
            l += 1;
        }
        best
    }

    fn brute_klee(s: u32, n: u64) -> u64 {
        (1..=n).filter(|&m| brute_gen_gcd(s, m, n) == 1).count() as u64
    }

    // ordered s-tuples mod n whose gcd together with n is 1
    fn brute_jordan(s: u32, n: u64) -> u64 {
        let total = n.pow(s);
        (0..total)
            .filter(|&code| {
                let mut g = n;
                let mut c = code;
                for _ in 0..s {
                    g = g.gcd(&(c % n));
                    c /= n;
                }
                g == 1
            })
            .count() as u64
    }

    #[test]
    fn mobius_values() {
        assert_eq!(mobius(1).unwrap(), 1);
        assert_eq!(mobius(4).unwrap(), 0);
        assert_eq!(mobius(6).unwrap(), 1);
        assert_eq!(mobius(30).unwrap(), -1);
        for n in 1..500u64 {
            let f = factorize(n).unwrap();
            let total: i64 = f.divisors().iter().map(|&d| mobius(d).unwrap() as i64).sum();
            assert_eq!(total, (n == 1) as i64);
        }
    }

    #[test]
    fn gen_gcd_examples() {
        assert_eq!(gen_gcd(2, 4, 8).unwrap(), 4);
        assert_eq!(brute_gen_gcd(2, 4, 8), 4);
        assert_eq!(gen_gcd(1, 12, 18).unwrap(), 6);
        assert_eq!(gen_gcd(2, 5, 7).unwrap(), 1);
        assert_eq!(gen_gcd(3, 0, 16).unwrap(), 8);
        assert!(gen_gcd(2, 0, 0).is_err());
        assert!(gen_gcd(0, 3, 4).is_err());
    }

    #[test]
    fn jordan_examples() {
        assert_eq!(jordan_totient(1, 6).unwrap(), 2);
        assert_eq!(brute_jordan(2, 2), 3);
        assert_eq!(jordan_totient(2, 2).unwrap(), 3);
        assert_eq!(brute_jordan(2, 6), 24);
        assert_eq!(jordan_totient(2, 6).unwrap(), 24);
        assert_eq!(jordan_totient(5, 1).unwrap(), 1);
        for n in 1..30 {
            for s in 1..=3 {
                assert_eq!(jordan_totient(s, n).unwrap(), brute_jordan(s, n) as u128);
            }
        }
    }

    #[test]
    fn jordan_overflow_is_reported() {
        assert!(matches!(jordan_totient(3, u64::MAX), Err(Error::Overflow { .. })));
        assert!(matches!(SPower::new(1 << 40, 4), Err(Error::Overflow { .. })));
    }

    #[test]
    fn klee_examples() {
        assert_eq!(klee_phi(2, 4).unwrap(), 3);
        assert_eq!(klee_phi(2, 8).unwrap(), 6);
        assert_eq!(brute_klee(2, 8), 6);
        assert_eq!(klee_phi(1, 10).unwrap(), 4);
    }

    #[test]
    fn tau_and_sigma_examples() {
        assert_eq!(tau_s(2, 16).unwrap(), 3);
        assert_eq!(tau_s(1, 6).unwrap(), 4);
        assert_eq!(tau_s(2, 7).unwrap(), 1);
        assert_eq!(sigma(1, 6).unwrap(), BigRational::from_integer(12.into()));
        assert_eq!(sigma(-5, 1).unwrap(), BigRational::one());
        assert_eq!(sigma(2, 4).unwrap(), BigRational::from_integer(21.into()));
        assert_eq!(
            sigma(-5, 2).unwrap(),
            BigRational::new(33.into(), 32.into())
        );
        assert_eq!(sigma_spower(2, 16).unwrap(), 21);
        assert_eq!(sigma_spower(1, 6).unwrap(), 12);
        assert_eq!(sigma_spower(3, 5).unwrap(), 1);
    }

    #[test]
    fn klee_matches_definition_small() {
        for s in 1..=3 {
            for n in 1..=400 {
                assert_eq!(klee_phi(s, n).unwrap(), brute_klee(s, n), "s={s} n={n}");
            }
        }
    }

    proptest! {
        #[test]
        fn sigma_negative_is_reciprocal_scaled(t in 0i32..6, n in 1u64..5000) {
            let pos = sigma(t, n).unwrap();
            let neg = sigma(-t, n).unwrap();
            let nt = BigRational::from_integer(num_traits::pow(BigInt::from(n), t as usize));
            prop_assert_eq!(neg, pos / nt);
        }

        #[test]
        fn multiplicative_on_coprime_pairs(a in 1u64..=100, b in 1u64..=100, s in 1u32..=3, t in -3i32..=3) {
            prop_assume!(a.gcd(&b) == 1);
            prop_assert_eq!(mobius(a * b).unwrap(), mobius(a).unwrap() * mobius(b).unwrap());
            prop_assert_eq!(jordan_totient(s, a * b).unwrap(), jordan_totient(s, a).unwrap() * jordan_totient(s, b).unwrap());
            prop_assert_eq!(sigma(t, a * b).unwrap(), sigma(t, a).unwrap() * sigma(t, b).unwrap());
        }

        #[test]
        fn gen_gcd_is_a_divisor_and_s_power(s in 1u32..=3, m in 0u64..3000, n in 1u64..3000) {
            let g = gen_gcd(s, m, n).unwrap();
            prop_assert_eq!(m % g, 0);
            prop_assert_eq!(n % g, 0);
            prop_assert_eq!(g, brute_gen_gcd(s, m, n));
        }
    }
}

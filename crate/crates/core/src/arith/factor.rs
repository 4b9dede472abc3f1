//! Integer factorization for 64-bit inputs.
//!
//! Trial division by small primes handles everything below `TRIAL_LIMIT^2`;
//! larger cofactors are split with Brent's variant of Pollard rho and
//! certified with a deterministic Miller-Rabin test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trial division bound.
pub const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime factorization of a positive integer, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Largest `m` with `m^s | n`.
    pub fn s_root(&self, s: u32) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e / s))
            .product()
    }

    /// True when no `l^s > 1` divides `n`.
    pub fn is_s_power_free(&self, s: u32) -> bool {
        self.factors.iter().all(|&(_, e)| e < s)
    }

    pub(crate) fn from_parts(n: u64, factors: Vec<(u64, u32)>) -> Self {
        Self { n, factors }
    }
}

/// Factorizes `n >= 1`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::ZeroArgument("factorize"));
    }
    let mut factors = Vec::new();
    let mut m = n;

    let push = |p: u64, m: &mut u64, factors: &mut Vec<(u64, u32)>| {
        let mut e = 0;
        while (*m).is_multiple_of(p) {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };

    push(2, &mut m, &mut factors);
    push(3, &mut m, &mut factors);
    // 6k +- 1 wheel
    let mut p = 5u64;
    while p <= TRIAL_LIMIT && p.saturating_mul(p) <= m {
        push(p, &mut m, &mut factors);
        push(p + 2, &mut m, &mut factors);
        p += 6;
    }
    if m > 1 {
        if m < p.saturating_mul(p) || is_prime(m) {
            factors.push((m, 1));
        } else {
            let mut large = Vec::new();
            split(m, &mut large);
            large.sort_unstable();
            for q in large {
                match factors.last_mut() {
                    Some((last, e)) if *last == q => *e += 1,
                    _ => factors.push((q, 1)),
                }
            }
        }
    }
    Ok(Factorization::from_parts(n, factors))
}

fn split(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split(d, out);
    split(n / d, out);
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for
/// every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Returns a nontrivial factor of the odd composite `n`.
fn pollard_brent(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    // Deterministic sequence of (seed, constant) pairs.
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = num_integer::gcd(q, n);
                k += M;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = num_integer::gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

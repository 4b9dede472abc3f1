//! Linear sieve over `[1, limit]` with smallest-prime-factor and Möbius
//! tables, and tabulation of multiplicative functions on top of it.

/// Smallest prime factors, primes and Möbius values up to `limit`.
#[derive(Debug, Clone)]
pub struct LinearSieve {
    limit: usize,
    spf: Vec<u32>,
    primes: Vec<u32>,
    mobius: Vec<i8>,
}

impl LinearSieve {
    pub fn new(limit: usize) -> Self {
        assert!(limit < u32::MAX as usize, "sieve limit too large");
        let mut spf = vec![0u32; limit + 1];
        let mut mobius = vec![0i8; limit + 1];
        let mut primes = Vec::new();
        if limit >= 1 {
            mobius[1] = 1;
        }
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                mobius[i] = -1;
                primes.push(i as u32);
            }
            for &p in &primes {
                let p = p as usize;
                let ip = i * p;
                if p > spf[i] as usize || ip > limit {
                    break;
                }
                spf[ip] = p as u32;
                mobius[ip] = if i % p == 0 { 0 } else { -mobius[i] };
            }
        }
        Self {
            limit,
            spf,
            primes,
            mobius,
        }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn mobius(&self, n: usize) -> i8 {
        self.mobius[n]
    }

    pub fn smallest_prime_factor(&self, n: usize) -> u32 {
        self.spf[n]
    }

    /// Tabulates a multiplicative `f` on `[0, limit]` (entry 0 is `zero`)
    /// from its values on prime powers.
    pub fn tabulate_multiplicative<T, F>(&self, zero: T, one: T, local: F) -> Vec<T>
    where
        T: Clone + std::ops::Mul<Output = T>,
        F: Fn(u64, u32) -> T,
    {
        let mut out = vec![zero.clone(); self.limit + 1];
        if self.limit >= 1 {
            out[1] = one;
        }
        for n in 2..=self.limit {
            let p = self.spf[n] as usize;
            let mut m = n;
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out[n] = out[m].clone() * local(p as u64, e);
        }
        out
    }
}

/// Primes up to `limit` inclusive.
pub fn primes_up_to(limit: usize) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

//! Integer factorization and divisor enumeration.
//!
//! Trial division handles everything this crate meets in practice
//! (frequency data is small); a Pollard rho fallback covers stray large
//! semiprime inputs without pulling in a sieve.

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("factorize requires n >= 2, got {0}")]
    OutOfDomain(u64),
}

/// Factorization of a positive integer as an ordered list of
/// `(prime, exponent)` pairs with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeFactorization {
    pub factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    /// Multiplies the factorization back into the original integer.
    pub fn product(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(p, e)| acc * p.pow(e))
    }

    /// Exponent of `p` in the factorization (0 when `p` does not divide).
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Factorizes `n >= 2` by trial division up to 10^6, with Pollard rho on
/// any remaining cofactor. Deterministic.
pub fn factorize(n: u64) -> Result<PrimeFactorization, FactorError> {
    if n < 2 {
        return Err(FactorError::OutOfDomain(n));
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    let push = |p: u64, e: u32, factors: &mut Vec<(u64, u32)>| {
        if e > 0 {
            factors.push((p, e));
        }
    };
    let mut e = 0;
    while m % 2 == 0 {
        m /= 2;
        e += 1;
    }
    push(2, e, &mut factors);
    let mut p = 3u64;
    while p <= TRIAL_LIMIT && p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        push(p, e, &mut factors);
        p += 2;
    }
    if m > 1 {
        if m <= TRIAL_LIMIT * TRIAL_LIMIT {
            // cofactor is prime: no divisor below the trial limit and below sqrt
            factors.push((m, 1));
        } else {
            let mut rest = vec![m];
            let mut primes = Vec::new();
            while let Some(x) = rest.pop() {
                if is_prime_u64(x) {
                    primes.push(x);
                } else {
                    let d = pollard_rho(x);
                    rest.push(d);
                    rest.push(x / d);
                }
            }
            primes.sort_unstable();
            let mut i = 0;
            while i < primes.len() {
                let p = primes[i];
                let mut e = 0;
                while i < primes.len() && primes[i] == p {
                    e += 1;
                    i += 1;
                }
                factors.push((p, e));
            }
        }
    }
    factors.sort_unstable_by_key(|&(p, _)| p);
    Ok(PrimeFactorization { factors })
}

/// All positive divisors of `n >= 1`, in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors requires n >= 1");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for u64 (fixed witness set).
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent-style Pollard rho; returns a nontrivial divisor of composite `n`.
fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_fixtures() {
        assert_eq!(
            factorize(360).unwrap().factors,
            vec![(2, 3), (3, 2), (5, 1)]
        );
        assert_eq!(factorize(2).unwrap().factors, vec![(2, 1)]);
        assert_eq!(factorize(35).unwrap().factors, vec![(5, 1), (7, 1)]);
    }

    #[test]
    fn factorize_rejects_small() {
        assert_eq!(factorize(0), Err(FactorError::OutOfDomain(0)));
        assert_eq!(factorize(1), Err(FactorError::OutOfDomain(1)));
    }

    #[test]
    fn factorize_product_roundtrip() {
        for n in 2..=20_000u64 {
            let f = factorize(n).unwrap();
            assert_eq!(f.product(), n, "roundtrip failed for {n}");
            for w in f.factors.windows(2) {
                assert!(w[0].0 < w[1].0, "primes not increasing for {n}");
            }
        }
        // spread of larger values up to the stated bound
        for n in (2..=1_000_000u64).step_by(7919) {
            assert_eq!(factorize(n).unwrap().product(), n);
        }
    }

    #[test]
    fn factorize_large_semiprime_uses_rho() {
        // both factors above the trial-division limit
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        let f = factorize(p * q).unwrap();
        assert_eq!(f.factors, vec![(p, 1), (q, 1)]);
    }

    #[test]
    fn divisors_fixtures() {
        assert_eq!(divisors(6), vec![1, 2, 3, 6]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    #[test]
    fn divisors_against_brute_force() {
        for n in 1..=500u64 {
            let brute: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            assert_eq!(divisors(n), brute);
        }
    }
}

//! Prime utilities: deterministic primality, sieving, and the bad-prime census
//! for sparse univariates modulo `t^p - 1`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::SparseUnivariate;

/// Largest sieve accepted by [`primes_in`].
pub const SIEVE_LIMIT: u64 = 1 << 28;

/// Largest prime below 2^62, the default field modulus.
pub const DEFAULT_PRIME: u64 = (1 << 62) - 57;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
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

/// Deterministic Miller-Rabin for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
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

/// Smallest prime `>= n`, if one fits in a `u64`.
pub fn next_prime(n: u64) -> Option<u64> {
    let mut c = n.max(2);
    loop {
        if is_prime(c) {
            return Some(c);
        }
        c = c.checked_add(1)?;
    }
}

/// All primes in `[1, n]` by the sieve of Eratosthenes.
pub fn primes_in(n: u64) -> Result<Vec<u64>> {
    if n > SIEVE_LIMIT {
        return Err(Error::budget("prime sieve", n, SIEVE_LIMIT));
    }
    let n = n as usize;
    if n < 2 {
        return Ok(Vec::new());
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    Ok(out)
}

/// Ascending iterator over all primes, unbounded.
pub fn primes() -> impl Iterator<Item = u64> {
    let mut cur = 1u64;
    std::iter::from_fn(move || {
        let p = next_prime(cur.checked_add(1)?)?;
        cur = p;
        Some(p)
    })
}

/// Reduces `f` modulo `t^p - 1` by folding every exponent into `[0, p)`.
pub fn fold_mod(f: &SparseUnivariate, p: u64) -> SparseUnivariate {
    let modulus = BigUint::from(p);
    let mut out = SparseUnivariate::zero(f.field());
    for (e, c) in f.terms() {
        out.add_term((e % &modulus).clone(), c.clone());
    }
    out
}

/// Counts the primes in `primes` for which `f = 0 mod <t^p - 1>`.
pub fn bad_prime_census(f: &SparseUnivariate, primes: &[u64]) -> usize {
    primes.iter().filter(|&&p| fold_mod(f, p).is_zero()).count()
}

/// Census over every prime that could possibly be bad: a prime above the degree
/// leaves all exponents distinct, so only primes up to `max(deg f, 2)` are scanned.
pub fn bad_primes(f: &SparseUnivariate) -> Result<Vec<u64>> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("census of the zero polynomial".into()));
    }
    let deg = f.degree().cloned().unwrap_or_default();
    let bound = if deg.is_zero() {
        2
    } else {
        deg.to_u64()
            .filter(|&d| d <= SIEVE_LIMIT)
            .ok_or_else(|| Error::budget("prime sieve", &deg, SIEVE_LIMIT))?
    };
    Ok(primes_in(bound.max(2))?
        .into_iter()
        .filter(|&p| fold_mod(f, p).is_zero())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(primes_in(30).unwrap(), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes_in(1).unwrap().is_empty());
        let sieve = primes_in(10_000).unwrap();
        let mr: Vec<u64> = (1..=10_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, mr);
    }

    #[test]
    fn default_prime_is_largest_below_2_62() {
        assert!(is_prime(DEFAULT_PRIME));
        assert!(((DEFAULT_PRIME + 1)..(1 << 62)).all(|n| !is_prime(n)));
    }

    #[test]
    fn carmichael_numbers_rejected() {
        for n in [561u64, 1105, 1729, 2465, 2821, 6601, 3_215_031_751] {
            assert!(!is_prime(n), "{n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn primes_iterator_matches_sieve() {
        let it: Vec<u64> = primes().take_while(|&p| p <= 500).collect();
        assert_eq!(it, primes_in(500).unwrap());
    }

    #[test]
    fn sieve_budget() {
        assert!(matches!(primes_in(SIEVE_LIMIT + 1), Err(Error::Budget { .. })));
    }
}

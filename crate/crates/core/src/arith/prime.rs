//! Primality, small factorizations, totients and primitive roots.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive};
use rand::Rng;

use super::modular::{mul_mod, pow_mod};
use crate::error::{Error, Result};

const WITNESSES_64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller-Rabin rounds used above 64 bits.
pub const DEFAULT_MR_ROUNDS: usize = 40;

/// Deterministic primality for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES_64 {
        if n % w == 0 {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES_64 {
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

/// Primality for arbitrary-size input: exact below `2^64`, `rounds` random Miller-Rabin
/// rounds above.
pub fn is_prime_with<R: Rng>(n: &BigUint, rounds: usize, rng: &mut R) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if !n.bit(0) {
        return false;
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'round: for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &nm1);
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'round;
            }
        }
        return false;
    }
    true
}

pub fn is_prime(n: &BigUint) -> bool {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    is_prime_with(n, DEFAULT_MR_ROUNDS, &mut rng)
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs in ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_totient(k: u64) -> u64 {
    assert!(k >= 1, "totient is defined for k >= 1");
    factorize(k)
        .into_iter()
        .fold(k, |acc, (q, _)| acc / q * (q - 1))
}

pub(crate) fn require_prime_at_least_5(p: u64) -> Result<()> {
    if p < 5 {
        return Err(Error::PrimeTooSmall(p));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// Whether `g` generates `(Z/p^2 Z)^x`.
pub fn is_primitive_root_mod_p2(g: u64, p: u64) -> bool {
    let m = p * p;
    if g % p == 0 {
        return false;
    }
    let order = p * (p - 1);
    let mut primes: Vec<u64> = factorize(p - 1).into_iter().map(|(q, _)| q).collect();
    primes.push(p);
    primes.iter().all(|&r| pow_mod(g, order / r, m) != 1)
}

/// The smallest `g >= 2` generating `(Z/p^2 Z)^x`.
pub fn primitive_root_mod_p2(p: u64) -> Result<u64> {
    if p < 3 || !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    Ok((2..)
        .find(|&g| is_primitive_root_mod_p2(g, p))
        .expect("cyclic group has a generator"))
}

/// Every primitive root modulo `p^2` in `[2, p^2)`.
pub fn primitive_roots_mod_p2(p: u64) -> Vec<u64> {
    (2..p * p)
        .filter(|&g| is_primitive_root_mod_p2(g, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    fn multiplicative_order(g: u64, m: u64) -> u64 {
        let mut x = g % m;
        let mut k = 1;
        while x != 1 {
            x = x * g % m;
            k += 1;
        }
        k
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime_u64(1093));
        assert!(!is_prime_u64(1));
        assert!(is_prime_u64(197));
        assert!(!is_prime_u64(3215031751)); // strong pseudoprime to bases 2,3,5,7
        assert!(is_prime_u64(18446744073709551557));
        assert!(!is_prime_u64(18446744073709551559));
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..20_000 {
            assert_eq!(is_prime_u64(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn big_primality() {
        // 2^89 - 1 is a Mersenne prime, 2^83 - 1 is not
        let m89 = (BigUint::one() << 89u32) - 1u32;
        let m83 = (BigUint::one() << 83u32) - 1u32;
        assert!(is_prime(&m89));
        assert!(!is_prime(&m83));
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(primitive_root_mod_p2(5).unwrap(), 2);
        assert_eq!(primitive_root_mod_p2(7).unwrap(), 3);
        assert_eq!(primitive_root_mod_p2(11).unwrap(), 2);
        assert_eq!(multiplicative_order(2, 25), 20);
        assert_eq!(multiplicative_order(2, 49), 21);
        assert_eq!(multiplicative_order(3, 49), 42);
    }

    #[test]
    fn primitive_root_is_smallest_brute_force_generator() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
            let m = p * p;
            let brute = (2..m)
                .find(|&g| g % p != 0 && multiplicative_order(g, m) == p * (p - 1))
                .unwrap();
            assert_eq!(primitive_root_mod_p2(p).unwrap(), brute, "p = {p}");
        }
    }

    #[test]
    fn totient_examples() {
        assert_eq!(euler_totient(1), 1);
        assert_eq!(euler_totient(12), 4);
        assert_eq!(euler_totient(1093), 1092);
        for k in 1..300u64 {
            let count = (1..=k).filter(|&h| num_integer::gcd(h, k) == 1).count() as u64;
            assert_eq!(euler_totient(k), count);
        }
    }
}

//! Exact `L(p,x)` from Gaussian periods evaluated in prime fields.
//!
//! For each prime `q = 1 (mod p^2)` the field `F_q` contains an element `zeta` of order `p^2`,
//! which stands in for `exp(2 pi i / p^2)`. The periods, their product polynomial and the
//! constant term are computed modulo enough such primes to pin every coefficient, then
//! recovered by Chinese remaindering into the symmetric range.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rayon::prelude::*;

use crate::arith::{
    is_prime_u64, is_primitive_root_mod_p2, mul_mod, pow_mod, primitive_root_mod_p2,
    require_prime_at_least_5, CrtBasis,
};
use crate::error::{Error, Result};
use crate::fp;
use crate::polynomial::IntPolynomial;

/// Default lower bound for CRT primes.
pub const DEFAULT_PRIME_FLOOR: u64 = 1 << 20;
/// CRT primes stay below this so products fit in 128-bit intermediates.
pub const PRIME_CEILING: u64 = 1 << 62;

/// A prime `q = 1 (mod p^2)` with an element `zeta` of exact order `p^2` in `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CrtPrime {
    pub q: u64,
    pub zeta: u64,
}

impl CrtPrime {
    /// Builds the pair for `q`, or `None` if `q` is not a prime `= 1 (mod p^2)`.
    pub fn new(q: u64, p: u64) -> Option<Self> {
        let m = p * p;
        if q % m != 1 || !is_prime_u64(q) {
            return None;
        }
        fp::element_of_order(m, &[p], q).map(|zeta| CrtPrime { q, zeta })
    }

    /// Whether `zeta` has exact order `p^2` modulo `q`.
    pub fn is_valid_for(&self, p: u64) -> bool {
        let m = p * p;
        self.q % m == 1 && pow_mod(self.zeta, m, self.q) == 1 && pow_mod(self.zeta, p, self.q) != 1
    }
}

/// Primes `q = 1 (mod p^2)` with `q > floor`, ascending.
pub fn crt_prime_candidates(p: u64, floor: u64) -> impl Iterator<Item = CrtPrime> {
    let m = p * p;
    let start = floor / m + 1;
    (start..)
        .map(move |t| t * m + 1)
        .take_while(|&q| q < PRIME_CEILING)
        .filter_map(move |q| CrtPrime::new(q, p))
}

/// The smallest primes above `floor` whose product exceeds `2^(bits_needed + 1)`.
pub fn find_crt_primes(p: u64, bits_needed: u64, floor: u64) -> Vec<CrtPrime> {
    let target = BigUint::one() << (bits_needed + 1);
    let mut product = BigUint::one();
    let mut out = Vec::new();
    for cp in crt_prime_candidates(p, floor) {
        if product > target {
            break;
        }
        product *= cp.q;
        out.push(cp);
    }
    out
}

/// `max_k C(p,k) (p-1)^k`, bounding every coefficient of `L(p,x)` in absolute value.
pub fn coefficient_bound(p: u64) -> BigUint {
    let mut best = BigUint::one();
    let mut term = BigUint::one();
    for k in 1..=p {
        term = term * (p - k + 1) / k * (p - 1);
        if term > best {
            best = term.clone();
        }
    }
    best
}

/// Bound on the coefficient of `x^(p-k)`: `C(p,k) (p-1)^k`.
pub fn coefficient_bound_at(p: u64, k: u64) -> BigUint {
    let mut term = BigUint::one();
    for i in 1..=k {
        term = term * (p - i + 1) / i;
    }
    term * num_traits::pow(BigUint::from(p - 1), k as usize)
}

/// Everything needed to compute `L(p,x)` exactly for one `p`.
#[derive(Debug, Clone)]
pub struct PeriodContext {
    p: u64,
    g: u64,
    /// `exponents[n-1]` lists the exponents of `eta_n`, i.e. the coset `(g^p + p n) V`.
    exponents: Vec<Vec<u64>>,
    primes: Vec<CrtPrime>,
    floor: u64,
}

impl PeriodContext {
    /// Context with the canonical primitive root and the default prime floor.
    pub fn new(p: u64) -> Result<Self> {
        require_prime_at_least_5(p)?;
        Self::with_root(p, primitive_root_mod_p2(p)?, DEFAULT_PRIME_FLOOR)
    }

    pub fn with_root(p: u64, g: u64, floor: u64) -> Result<Self> {
        require_prime_at_least_5(p)?;
        if !is_primitive_root_mod_p2(g, p) {
            return Err(Error::NotPrimitiveRoot { g, p });
        }
        let m = p * p;
        let gp = pow_mod(g, p, m);
        // subgroup V of p-th powers, generated by g^p
        let mut orbit = Vec::with_capacity(p as usize - 1);
        let mut x = 1u64;
        for _ in 0..p - 1 {
            orbit.push(x);
            x = mul_mod(x, gp, m);
        }
        let exponents = (1..=p)
            .map(|n| {
                let coset = (gp + p * (n % p)) % m;
                orbit.iter().map(|&v| mul_mod(v, coset, m)).collect()
            })
            .collect();
        let bits = coefficient_bound(p).bits();
        let primes = find_crt_primes(p, bits, floor);
        Ok(PeriodContext {
            p,
            g,
            exponents,
            primes,
            floor,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn primitive_root(&self) -> u64 {
        self.g
    }

    /// The primes used for reconstruction.
    pub fn primes(&self) -> &[CrtPrime] {
        &self.primes
    }

    /// `count` primes beyond those used for reconstruction, skipping the first `skip`.
    pub fn fresh_primes(&self, skip: usize, count: usize) -> Vec<CrtPrime> {
        let last = self.primes.last().map_or(self.floor, |c| c.q);
        crt_prime_candidates(self.p, last)
            .skip(skip)
            .take(count)
            .collect()
    }

    fn zeta_powers(&self, cp: &CrtPrime) -> Vec<u64> {
        let m = (self.p * self.p) as usize;
        let mut table = Vec::with_capacity(m);
        let mut x = 1u64;
        for _ in 0..m {
            table.push(x);
            x = mul_mod(x, cp.zeta, cp.q);
        }
        table
    }

    /// `eta_1, ..., eta_p` modulo `q`.
    pub fn periods_mod(&self, cp: &CrtPrime) -> Vec<u64> {
        let table = self.zeta_powers(cp);
        let q = cp.q as u128;
        self.exponents
            .iter()
            .map(|exps| {
                let s: u128 = exps.iter().map(|&e| table[e as usize] as u128).sum();
                (s % q) as u64
            })
            .collect()
    }

    /// `rho_k = sum_{j=1}^{p-1} zeta^((1 - p k) j^p)` modulo `q`.
    pub fn rho_mod(&self, k: u64, cp: &CrtPrime) -> u64 {
        rho_k_mod_q(self.p, k, cp)
    }

    /// `L(p,x) mod q` via a balanced product tree.
    pub fn poly_mod(&self, cp: &CrtPrime) -> Vec<u64> {
        fp::from_roots_tree(&self.periods_mod(cp), cp.q)
    }

    /// `L(p,x) mod q` by sequential multiplication.
    pub fn poly_mod_sequential(&self, cp: &CrtPrime) -> Vec<u64> {
        fp::from_roots_sequential(&self.periods_mod(cp), cp.q)
    }

    /// `L(p,0) mod q` as the product of the negated periods.
    pub fn constant_mod(&self, cp: &CrtPrime) -> u64 {
        let q = cp.q;
        self.periods_mod(cp)
            .into_iter()
            .fold(1u64, |acc, eta| mul_mod(acc, (q - eta) % q, q))
    }

    fn basis(&self) -> CrtBasis {
        let moduli: Vec<u64> = self.primes.iter().map(|c| c.q).collect();
        CrtBasis::new(&moduli).expect("distinct primes")
    }

    /// The exact period polynomial.
    pub fn l_exact(&self) -> IntPolynomial {
        let residues: Vec<Vec<u64>> = self.primes.par_iter().map(|cp| self.poly_mod(cp)).collect();
        let basis = self.basis();
        let coeffs: Vec<BigInt> = (0..=self.p as usize)
            .into_par_iter()
            .map(|k| {
                let column: Vec<u64> = residues
                    .iter()
                    .map(|r| r.get(k).copied().unwrap_or(0))
                    .collect();
                basis.combine(&column)
            })
            .collect();
        IntPolynomial::new(coeffs)
    }

    /// `L(p,0)` without expanding the polynomial.
    pub fn constant_term(&self) -> BigInt {
        let residues: Vec<u64> = self
            .primes
            .par_iter()
            .map(|cp| self.constant_mod(cp))
            .collect();
        self.basis().combine(&residues)
    }

    /// Whether `poly mod q` equals the period product computed directly modulo `q`.
    pub fn verify_mod(&self, poly: &IntPolynomial, cp: &CrtPrime) -> bool {
        poly.reduce_mod(cp.q) == self.poly_mod(cp)
    }
}

/// `rho_k = sum_{j=1}^{p-1} zeta^((1 - p k) j^p)` modulo `q`.
pub fn rho_k_mod_q(p: u64, k: u64, cp: &CrtPrime) -> u64 {
    let m = p * p;
    let factor = (1 + m - (p * (k % p)) % m) % m;
    (1..p).fold(0u64, |acc, j| {
        let e = mul_mod(factor, pow_mod(j, p, m), m);
        (acc + pow_mod(cp.zeta, e, cp.q)) % cp.q
    })
}

/// `eta_1, ..., eta_p` modulo `q` for the canonical primitive root.
pub fn periods_mod_q(p: u64, g: u64, cp: &CrtPrime) -> Result<Vec<u64>> {
    require_prime_at_least_5(p)?;
    if !is_primitive_root_mod_p2(g, p) {
        return Err(Error::NotPrimitiveRoot { g, p });
    }
    let m = p * p;
    let gp = pow_mod(g, p, m);
    let table: Vec<u64> = (0..m).map(|e| pow_mod(cp.zeta, e, cp.q)).collect();
    Ok((1..=p)
        .map(|n| {
            let coset = (gp + p * (n % p)) % m;
            let mut v = 1u64;
            let mut s = 0u64;
            for _ in 0..p - 1 {
                s = (s + table[mul_mod(v, coset, m) as usize]) % cp.q;
                v = mul_mod(v, gp, m);
            }
            s
        })
        .collect())
}

/// The exact period polynomial `L(p,x)`.
pub fn l_exact(p: u64) -> Result<IntPolynomial> {
    Ok(PeriodContext::new(p)?.l_exact())
}

/// `L(p,0)` by the constant-term fast path.
pub fn l_constant_term(p: u64) -> Result<BigInt> {
    Ok(PeriodContext::new(p)?.constant_term())
}

/// Whether two primitive roots give the same `L(p,x)`.
pub fn primitive_root_independence(p: u64, g1: u64, g2: u64) -> Result<bool> {
    let a = PeriodContext::with_root(p, g1, DEFAULT_PRIME_FLOOR)?.l_exact();
    let b = PeriodContext::with_root(p, g2, DEFAULT_PRIME_FLOOR)?.l_exact();
    Ok(a == b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    const L7: [i64; 8] = [-97, -84, 112, 91, -21, -21, 0, 1];

    fn small_prime(q: u64, p: u64) -> CrtPrime {
        CrtPrime::new(q, p).unwrap()
    }

    #[test]
    fn crt_prime_examples() {
        assert!(CrtPrime::new(101, 5).is_some());
        assert!(CrtPrime::new(197, 7).is_some());
        assert!(CrtPrime::new(151, 5).is_some());
        assert!(CrtPrime::new(103, 5).is_none());
        for cp in crt_prime_candidates(5, 0).take(10) {
            assert!(cp.is_valid_for(5));
        }
        let first = crt_prime_candidates(5, DEFAULT_PRIME_FLOOR).next().unwrap();
        assert!(first.q > DEFAULT_PRIME_FLOOR && first.q % 25 == 1);
        // nothing between the floor and the first candidate
        assert!(((DEFAULT_PRIME_FLOOR + 1)..first.q)
            .filter(|q| q % 25 == 1)
            .all(|q| !is_prime_u64(q)));
    }

    #[test]
    fn bounds() {
        // max over k of C(5,k) 4^k: 1, 20, 160, 640, 1280, 1024
        assert_eq!(coefficient_bound(5), BigUint::from(1280u32));
        assert_eq!(coefficient_bound_at(5, 5), BigUint::from(1024u32));
        assert_eq!(coefficient_bound_at(7, 7), BigUint::from(279_936u32));
        assert!(coefficient_bound(7) >= BigUint::from(97u32));
        for p in [5u64, 7, 11, 13, 31] {
            let b = coefficient_bound(p);
            assert_eq!(
                b,
                (0..=p).map(|k| coefficient_bound_at(p, k)).max().unwrap()
            );
            // the ratio test gives growth up to k = p-1 and a final drop by (p-1)/p
            assert_eq!(b, coefficient_bound_at(p, p - 1));
            for k in 0..p - 1 {
                assert!(coefficient_bound_at(p, k) <= coefficient_bound_at(p, k + 1));
            }
        }
    }

    #[test]
    fn l7_exact() {
        assert_eq!(l_exact(7).unwrap(), IntPolynomial::from_i64(&L7));
        assert_eq!(l_constant_term(7).unwrap(), BigInt::from(-97));
    }

    #[test]
    fn l7_mod_197() {
        let cp = small_prime(197, 7);
        let eta = periods_mod_q(7, 3, &cp).unwrap();
        assert_eq!(eta.iter().sum::<u64>() % 197, 0);
        let prod = eta.iter().fold(1u64, |a, &e| a * e % 197);
        // product of the roots is (-1)^7 L(7,0) = 97
        assert_eq!(prod, 97);
        let ctx = PeriodContext::new(7).unwrap();
        assert_eq!(ctx.periods_mod(&cp), eta);
        assert_eq!(
            ctx.poly_mod(&cp),
            IntPolynomial::from_i64(&L7).reduce_mod(197)
        );
    }

    #[test]
    fn structural_invariants() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
            let ctx = PeriodContext::new(p).unwrap();
            let l = ctx.l_exact();
            assert!(l.is_monic());
            assert_eq!(l.degree(), Some(p as usize));
            assert_eq!(l.coeff(p as usize - 1), BigInt::from(0));
            for k in 0..=p {
                let c = l.coeff((p - k) as usize);
                assert!(BigInt::from(coefficient_bound_at(p, k)) >= c.abs());
            }
            for cp in ctx.fresh_primes(0, 2) {
                assert!(!ctx.primes().contains(&cp));
                assert!(ctx.verify_mod(&l, &cp));
            }
            assert_eq!(ctx.constant_term(), l.coeff(0));
        }
    }

    #[test]
    fn product_tree_matches_sequential() {
        let ctx = PeriodContext::new(29).unwrap();
        for cp in ctx.primes().iter().take(3) {
            assert_eq!(ctx.poly_mod(cp), ctx.poly_mod_sequential(cp));
        }
    }

    #[test]
    fn periods_equal_eigenvalues_as_multisets() {
        for p in [5u64, 7, 11, 13] {
            let ctx = PeriodContext::new(p).unwrap();
            for cp in ctx.primes().iter().take(3) {
                let mut eta = ctx.periods_mod(cp);
                let mut rho: Vec<u64> = (0..p).map(|k| ctx.rho_mod(k, cp)).collect();
                assert_eq!(
                    rho.iter().map(|&x| x as u128).sum::<u128>() % cp.q as u128,
                    0
                );
                eta.sort_unstable();
                rho.sort_unstable();
                assert_eq!(eta, rho, "p = {p}, q = {}", cp.q);
            }
        }
    }

    #[test]
    fn independent_of_primitive_root() {
        for p in [5u64, 7, 11] {
            let roots = crate::arith::primitive_roots_mod_p2(p);
            let g0 = roots[0];
            for &g in roots.iter().skip(1).step_by(5).take(3) {
                assert!(
                    primitive_root_independence(p, g0, g).unwrap(),
                    "p={p} g={g}"
                );
            }
            assert!(primitive_root_independence(p, g0, g0).unwrap());
        }
        assert!(matches!(
            primitive_root_independence(7, 2, 3),
            Err(Error::NotPrimitiveRoot { g: 2, p: 7 })
        ));
    }

    #[test]
    fn deterministic() {
        assert_eq!(l_exact(23).unwrap(), l_exact(23).unwrap());
    }
}

//! Bernoulli numbers (convention `B_1 = -1/2`) and Bernoulli polynomials.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::Rational;

/// Grow-on-demand cache of `B_0 ..= B_N`.
///
/// Growth needs `&mut self`; share a grown table freely between readers.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    values: Vec<Rational>,
}

impl Default for BernoulliTable {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliTable {
    pub fn new() -> Self {
        BernoulliTable {
            values: vec![Rational::one()],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Extends the table so that `B_n` is cached.
    pub fn grow_to(&mut self, n: usize) {
        while self.values.len() <= n {
            let m = self.values.len();
            let b = if m >= 3 && m % 2 == 1 {
                Rational::zero()
            } else {
                // sum_{k=0}^{m} C(m+1,k) B_k = 0
                let mut binom = BigInt::one();
                let mut acc = Rational::zero();
                for (k, bk) in self.values.iter().enumerate() {
                    if !bk.is_zero() {
                        acc += bk * &binom;
                    }
                    binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
                }
                -acc / BigInt::from(m + 1)
            };
            self.values.push(b);
        }
    }

    /// `B_n`, if already cached.
    pub fn get(&self, n: usize) -> Option<&Rational> {
        self.values.get(n)
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.values
    }
}

fn shared_table() -> &'static RwLock<BernoulliTable> {
    static TABLE: OnceLock<RwLock<BernoulliTable>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(BernoulliTable::new()))
}

/// Grows the process-wide table. Growth takes the write lock.
pub fn precompute_bernoulli(n: usize) {
    if shared_table().read().unwrap().len() > n {
        return;
    }
    shared_table().write().unwrap().grow_to(n);
}

/// Exact `B_n`.
pub fn bernoulli_number(n: usize) -> Rational {
    precompute_bernoulli(n);
    shared_table().read().unwrap().get(n).unwrap().clone()
}

/// `B_0 ..= B_n` as an owned vector.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    precompute_bernoulli(n);
    shared_table().read().unwrap().as_slice()[..=n].to_vec()
}

/// Coefficients of `B_m(x)` in ascending degree.
pub fn bernoulli_poly_coeffs(m: usize) -> Vec<Rational> {
    let b = bernoulli_numbers(m);
    let mut coeffs = vec![Rational::zero(); m + 1];
    let mut binom = BigInt::one();
    for (k, bk) in b.iter().enumerate() {
        // x^{m-k} carries C(m,k) B_k
        coeffs[m - k] = bk * &binom;
        binom = binom * BigInt::from(m - k) / BigInt::from(k + 1);
    }
    coeffs
}

/// Exact value of `B_m(x)`.
pub fn bernoulli_poly_eval(m: usize, x: &Rational) -> Rational {
    horner(&bernoulli_poly_coeffs(m), x)
}

pub(crate) fn horner(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn known_values() {
        assert_eq!(bernoulli_number(0), rat(1, 1));
        assert_eq!(bernoulli_number(1), rat(-1, 2));
        assert_eq!(bernoulli_number(2), rat(1, 6));
        assert_eq!(bernoulli_number(4), rat(-1, 30));
        assert_eq!(bernoulli_number(6), rat(1, 42));
        assert_eq!(bernoulli_number(12), rat(-691, 2730));
        assert_eq!(bernoulli_number(7), rat(0, 1));
    }

    #[test]
    fn recurrence_holds_for_every_cached_entry() {
        let mut t = BernoulliTable::new();
        t.grow_to(60);
        let b = t.as_slice();
        for n in 1..=60usize {
            let mut binom = BigInt::one();
            let mut acc = Rational::zero();
            for (k, bk) in b.iter().enumerate().take(n + 1) {
                acc += bk * &binom;
                binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
            }
            assert!(acc.is_zero(), "recurrence fails at n = {n}");
        }
    }

    #[test]
    fn polynomial_examples() {
        assert_eq!(bernoulli_poly_eval(1, &rat(1, 2)), rat(0, 1));
        assert_eq!(bernoulli_poly_eval(3, &rat(1, 5)), rat(6, 125));
        assert_eq!(bernoulli_poly_eval(3, &rat(2, 5)), rat(3, 125));
    }

    #[test]
    fn polynomial_endpoints() {
        for m in 0..40 {
            assert_eq!(bernoulli_poly_eval(m, &rat(0, 1)), bernoulli_number(m));
            if m != 1 {
                assert_eq!(bernoulli_poly_eval(m, &rat(1, 1)), bernoulli_number(m));
            }
        }
    }

    #[test]
    fn polynomial_matches_expanded_cubic() {
        // B_3(x) = x^3 - 3/2 x^2 + 1/2 x
        for n in -20..20 {
            let x = rat(n, 7);
            let direct = &x * &x * &x - rat(3, 2) * &x * &x + rat(1, 2) * &x;
            assert_eq!(bernoulli_poly_eval(3, &x), direct);
        }
    }
}

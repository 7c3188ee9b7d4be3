//! Dense integer polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::reduce_u64;

/// Integer polynomial with coefficients in ascending degree. Trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `-f(-x)`.
    pub fn negate_argument_and_value(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { -c } else { c.clone() })
            .collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Coefficients reduced into `[0, q)`.
    pub fn reduce_mod(&self, q: u64) -> Vec<u64> {
        let mut out: Vec<u64> = self.coeffs.iter().map(|c| reduce_u64(c, q)).collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_eval() {
        let l7 = IntPolynomial::from_i64(&[-97, -84, 112, 91, -21, -21, 0, 1]);
        assert_eq!(
            l7.to_string(),
            "x^7 - 21x^5 - 21x^4 + 91x^3 + 112x^2 - 84x - 97"
        );
        assert_eq!(l7.eval(&1.into()), (-19).into());
        assert_eq!(l7.eval(&0.into()), (-97).into());
        assert!(l7.is_monic());
        assert_eq!(l7.degree(), Some(7));
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = IntPolynomial::from_i64(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(IntPolynomial::from_i64(&[0, 0]).degree(), None);
    }

    #[test]
    fn sign_flip() {
        // x^3 + 2x^2 - x + 5  ->  -( -x^3 + 2x^2 + x + 5 ) = x^3 - 2x^2 - x - 5
        let p = IntPolynomial::from_i64(&[5, -1, 2, 1]);
        assert_eq!(
            p.negate_argument_and_value(),
            IntPolynomial::from_i64(&[-5, -1, -2, 1])
        );
        assert_eq!(p.negate_argument_and_value().negate_argument_and_value(), p);
    }

    #[test]
    fn reduction() {
        let p = IntPolynomial::from_i64(&[-97, -84, 112, 91, -21, -21, 0, 1]);
        assert_eq!(p.reduce_mod(5), vec![3, 1, 2, 1, 4, 4, 0, 1]);
    }
}

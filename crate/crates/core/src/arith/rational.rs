use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::modular::{mod_inverse, Residue};
use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn rat_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// The sawtooth `((x))`: `x - floor(x) - 1/2` off the integers, `0` on them.
pub fn sawtooth(x: &Rational) -> Rational {
    if x.is_integer() {
        return Rational::zero();
    }
    x - x.floor() - Rational::new(BigInt::one(), 2.into())
}

/// `numerator * denominator^-1 mod m`.
pub fn rational_mod(r: &Rational, m: &BigUint) -> Result<Residue> {
    let inv = mod_inverse(r.denom(), m).map_err(|_| Error::DenominatorNotCoprime {
        denominator: r.denom().to_string(),
        modulus: m.to_string(),
    })?;
    Ok(Residue::new(
        &(r.numer() * BigInt::from(inv.value().clone())),
        m,
    ))
}

/// Reduces `x` into `[0, 2)`, i.e. `x mod 2` as an exact rational.
pub fn reduce_mod_two(x: &Rational) -> Rational {
    let two = BigInt::from(2);
    let d = x.denom();
    let n = x.numer().mod_floor(&(d * &two));
    Rational::new(n, d.clone())
}

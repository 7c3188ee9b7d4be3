//! Residues, modular exponentiation and inversion, and Chinese remaindering.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// An element of `Z/mZ`, stored as its least non-negative representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Residue {
    value: BigUint,
    modulus: BigUint,
}

impl Residue {
    /// Reduces `value` into `[0, modulus)`.
    ///
    /// Panics if `modulus` is zero.
    pub fn new(value: &BigInt, modulus: &BigUint) -> Self {
        assert!(!modulus.is_zero(), "modulus must be positive");
        let m = BigInt::from(modulus.clone());
        let v = value.mod_floor(&m);
        Residue {
            value: v.to_biguint().expect("mod_floor is non-negative"),
            modulus: modulus.clone(),
        }
    }

    pub fn from_u64(value: u64, modulus: u64) -> Self {
        Residue::new(&BigInt::from(value), &BigUint::from(modulus))
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// The value as a `u64`, if it fits.
    pub fn to_u64(&self) -> Option<u64> {
        num_traits::ToPrimitive::to_u64(&self.value)
    }

    /// Representative in the symmetric range `(-m/2, m/2]`.
    pub fn symmetric(&self) -> BigInt {
        symmetric_lift(&self.value, &self.modulus)
    }

    /// Whether `x` is congruent to this residue.
    pub fn matches(&self, x: &BigInt) -> bool {
        Residue::new(x, &self.modulus).value == self.value
    }
}

impl std::fmt::Display for Residue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

pub(crate) fn symmetric_lift(value: &BigUint, modulus: &BigUint) -> BigInt {
    let v = BigInt::from(value.clone());
    if value * 2u32 > *modulus {
        v - BigInt::from(modulus.clone())
    } else {
        v
    }
}

/// `base^exp mod m` by square-and-multiply.
pub fn mod_pow(base: &BigInt, exp: &BigUint, m: &BigUint) -> Residue {
    let reduced = Residue::new(base, m);
    Residue {
        value: reduced.value.modpow(exp, m),
        modulus: m.clone(),
    }
}

/// The inverse of `a` modulo `m`.
pub fn mod_inverse(a: &BigInt, m: &BigUint) -> Result<Residue> {
    let mb = BigInt::from(m.clone());
    let a = a.mod_floor(&mb);
    let egcd = a.extended_gcd(&mb);
    if !egcd.gcd.is_one() {
        return Err(Error::NotInvertible {
            value: a.to_string(),
            modulus: m.to_string(),
        });
    }
    Ok(Residue::new(&egcd.x, m))
}

/// Chinese remaindering into the symmetric range `(-M/2, M/2]`, `M` the product of the moduli.
pub fn crt_combine(residues: &[Residue]) -> Result<BigInt> {
    let (first, rest) = residues.split_first().ok_or(Error::EmptyCrt)?;
    let mut x = first.value.clone();
    let mut m = first.modulus.clone();
    for r in rest {
        if !m.gcd(&r.modulus).is_one() {
            return Err(Error::ModuliNotCoprime);
        }
        // x + m*t = r (mod r.modulus)
        let inv = mod_inverse(&BigInt::from(m.clone()), &r.modulus)?;
        let diff = BigInt::from(r.value.clone()) - BigInt::from(x.clone());
        let t = Residue::new(&(diff * BigInt::from(inv.value)), &r.modulus);
        x += &m * t.value;
        m *= &r.modulus;
    }
    Ok(symmetric_lift(&x, &m))
}

/// Precomputed CRT data for a fixed list of word-sized prime moduli.
///
/// Used when many integers share the same moduli, e.g. every coefficient of a polynomial.
#[derive(Debug, Clone)]
pub struct CrtBasis {
    moduli: Vec<u64>,
    cofactors: Vec<BigUint>,
    inverses: Vec<u64>,
    product: BigUint,
}

impl CrtBasis {
    pub fn new(moduli: &[u64]) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::EmptyCrt);
        }
        let product: BigUint = moduli.iter().map(|&q| BigUint::from(q)).product();
        let mut cofactors = Vec::with_capacity(moduli.len());
        let mut inverses = Vec::with_capacity(moduli.len());
        for &q in moduli {
            let qb = BigUint::from(q);
            let cof = &product / &qb;
            let r = num_traits::ToPrimitive::to_u64(&(&cof % &qb)).unwrap();
            let inv = inv_mod_u64(r, q).ok_or(Error::ModuliNotCoprime)?;
            cofactors.push(cof);
            inverses.push(inv);
        }
        Ok(CrtBasis {
            moduli: moduli.to_vec(),
            cofactors,
            inverses,
            product,
        })
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn product(&self) -> &BigUint {
        &self.product
    }

    /// Combines one residue per modulus (same order as `moduli`) into the symmetric range.
    pub fn combine(&self, residues: &[u64]) -> BigInt {
        assert_eq!(residues.len(), self.moduli.len());
        let mut acc = BigUint::zero();
        for (i, &r) in residues.iter().enumerate() {
            let q = self.moduli[i];
            let t = mul_mod(r % q, self.inverses[i], q);
            if t != 0 {
                acc += &self.cofactors[i] * t;
            }
        }
        symmetric_lift(&(acc % &self.product), &self.product)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

pub fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Reduces a signed big integer modulo a word-sized modulus.
pub fn reduce_u64(x: &BigInt, m: u64) -> u64 {
    let r = num_traits::ToPrimitive::to_u64(&(x.magnitude() % m)).unwrap();
    if x.sign() == Sign::Minus && r != 0 {
        m - r
    } else {
        r
    }
}

/// `x mod m` for a signed machine integer.
pub fn reduce_i64(x: i64, m: u64) -> u64 {
    (x as i128).rem_euclid(m as i128) as u64
}

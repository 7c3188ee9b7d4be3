//! Fixed-point complex numbers over big integers.
//!
//! A value is stored as `(re + i im) / 2^bits` with `re`, `im` arbitrary-precision integers.
//! Absolute error per operation is at most one unit in the last place, so magnitudes may
//! grow without bound while conversion back to integers stays exact.

use std::collections::HashMap;
use std::ops::{Add, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{reduce_mod_two, Rational};

const GUARD_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedComplex {
    re: BigInt,
    im: BigInt,
    bits: u32,
}

fn shr_round(x: BigInt, n: u32) -> BigInt {
    if n == 0 {
        return x;
    }
    (x + (BigInt::one() << (n - 1))) >> n
}

fn atan_inv(n: u32, w: u32) -> BigInt {
    // atan(1/n) = sum (-1)^k / ((2k+1) n^{2k+1})
    let n2 = BigInt::from(n * n);
    let mut power = (BigInt::one() << w) / n;
    let mut sum = BigInt::zero();
    let mut k = 0u32;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &n2;
        k += 1;
    }
    sum
}

/// `pi * 2^bits`, rounded.
pub fn pi_fixed(bits: u32) -> BigInt {
    static CACHE: OnceLock<Mutex<HashMap<u32, BigInt>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&bits) {
        return v.clone();
    }
    let w = bits + GUARD_BITS;
    let pi = atan_inv(5, w) * 16 - atan_inv(239, w) * 4;
    let pi = shr_round(pi, GUARD_BITS);
    cache.lock().unwrap().insert(bits, pi.clone());
    pi
}

impl FixedComplex {
    pub fn zero(bits: u32) -> Self {
        FixedComplex {
            re: BigInt::zero(),
            im: BigInt::zero(),
            bits,
        }
    }

    pub fn from_integer(n: &BigInt, bits: u32) -> Self {
        FixedComplex {
            re: n << bits,
            im: BigInt::zero(),
            bits,
        }
    }

    pub fn one(bits: u32) -> Self {
        Self::from_integer(&BigInt::one(), bits)
    }

    pub fn from_f64(re: f64, im: f64, bits: u32) -> Self {
        let scale = |x: f64| {
            let s = (x * 2f64.powi(52)).round() as i64;
            let v = BigInt::from(s);
            if bits >= 52 {
                v << (bits - 52)
            } else {
                v >> (52 - bits)
            }
        };
        FixedComplex {
            re: scale(re),
            im: scale(im),
            bits,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Scaled real part, i.e. `round(re * 2^bits)`.
    pub fn raw_re(&self) -> &BigInt {
        &self.re
    }

    pub fn raw_im(&self) -> &BigInt {
        &self.im
    }

    /// `exp(i pi t)` for an exact rational `t`.
    pub fn exp_i_pi(t: &Rational, bits: u32) -> Self {
        let w = bits + GUARD_BITS;
        // t into [-1, 1)
        let mut t = reduce_mod_two(t);
        if t >= Rational::one() {
            t -= Rational::from_integer(2.into());
        }
        let x = (pi_fixed(w) * t.numer()).div_floor(t.denom());
        let one = BigInt::one() << w;
        let mut re = one.clone();
        let mut im = BigInt::zero();
        let mut term = one;
        let mut n = 1u32;
        loop {
            term = shr_round(term * &x, w) / n;
            if term.is_zero() {
                break;
            }
            match n % 4 {
                0 => re += &term,
                1 => im += &term,
                2 => re -= &term,
                _ => im -= &term,
            }
            n += 1;
        }
        FixedComplex {
            re: shr_round(re, GUARD_BITS),
            im: shr_round(im, GUARD_BITS),
            bits,
        }
    }

    /// `exp(2 pi i e / n)`.
    pub fn root_of_unity(e: u64, n: u64, bits: u32) -> Self {
        Self::exp_i_pi(
            &Rational::new(BigInt::from(2 * (e % n)), BigInt::from(n)),
            bits,
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.bits, other.bits, "precision mismatch");
        let re = &self.re * &other.re - &self.im * &other.im;
        let im = &self.re * &other.im + &self.im * &other.re;
        FixedComplex {
            re: shr_round(re, self.bits),
            im: shr_round(im, self.bits),
            bits: self.bits,
        }
    }

    /// Quotient, or `None` when `other` is zero at this precision.
    pub fn div(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.bits, other.bits, "precision mismatch");
        let den = &other.re * &other.re + &other.im * &other.im;
        if den.is_zero() {
            return None;
        }
        let re = (&self.re * &other.re + &self.im * &other.im) << self.bits;
        let im = (&self.im * &other.re - &self.re * &other.im) << self.bits;
        Some(FixedComplex {
            re: round_div(re, &den),
            im: round_div(im, &den),
            bits: self.bits,
        })
    }

    /// `|z|^2` as a scaled integer (same scale as the components).
    pub fn norm_sqr_raw(&self) -> BigInt {
        shr_round(&self.re * &self.re + &self.im * &self.im, self.bits)
    }

    pub fn re_f64(&self) -> f64 {
        scaled_to_f64(&self.re, self.bits)
    }

    pub fn im_f64(&self) -> f64 {
        scaled_to_f64(&self.im, self.bits)
    }

    pub fn abs_f64(&self) -> f64 {
        self.re_f64().hypot(self.im_f64())
    }

    pub fn abs_im_f64(&self) -> f64 {
        scaled_to_f64(&self.im.abs(), self.bits)
    }

    /// Nearest integer to the real part.
    pub fn round_re(&self) -> BigInt {
        shr_round(self.re.clone(), self.bits)
    }

    /// Distance of the real part to the nearest integer.
    pub fn re_distance_to_integer(&self) -> f64 {
        let nearest = self.round_re() << self.bits;
        scaled_to_f64(&(&self.re - nearest).abs(), self.bits)
    }

    /// `|self - other|` as `f64`.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).abs_f64()
    }

    /// Lowers or raises the precision.
    pub fn with_bits(&self, bits: u32) -> Self {
        let conv = |x: &BigInt| {
            if bits >= self.bits {
                x << (bits - self.bits)
            } else {
                shr_round(x.clone(), self.bits - bits)
            }
        };
        FixedComplex {
            re: conv(&self.re),
            im: conv(&self.im),
            bits,
        }
    }
}

fn round_div(num: BigInt, den: &BigInt) -> BigInt {
    // den > 0
    let twice: BigInt = num * 2 + den;
    twice.div_floor(&(den * 2))
}

fn scaled_to_f64(x: &BigInt, bits: u32) -> f64 {
    let len = x.bits();
    if len > 1000 {
        // keep the top 64 bits so the conversion does not overflow before scaling
        let drop = len - 64;
        let top = (x >> drop).to_f64().unwrap_or(f64::NAN);
        return top * 2f64.powi(drop as i32 - bits as i32);
    }
    x.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(bits as i32))
}

impl Add for &FixedComplex {
    type Output = FixedComplex;
    fn add(self, o: &FixedComplex) -> FixedComplex {
        assert_eq!(self.bits, o.bits, "precision mismatch");
        FixedComplex {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
            bits: self.bits,
        }
    }
}

impl Sub for &FixedComplex {
    type Output = FixedComplex;
    fn sub(self, o: &FixedComplex) -> FixedComplex {
        assert_eq!(self.bits, o.bits, "precision mismatch");
        FixedComplex {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
            bits: self.bits,
        }
    }
}

impl Neg for &FixedComplex {
    type Output = FixedComplex;
    fn neg(self) -> FixedComplex {
        FixedComplex {
            re: -&self.re,
            im: -&self.im,
            bits: self.bits,
        }
    }
}

impl std::iter::Sum<FixedComplex> for Option<FixedComplex> {
    fn sum<I: Iterator<Item = FixedComplex>>(iter: I) -> Self {
        iter.reduce(|a, b| &a + &b)
    }
}

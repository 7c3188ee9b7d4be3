//! High-precision complex oracle for the exponential sums `A(r,k,n)`, the Gaussian periods
//! `eta_n`, and the polynomials `W(r,k,x)` and `L(p,x)` built from them.
//!
//! Everything here is floating: results are rounded to integer polynomials only when every
//! coefficient lies within the configured tolerance of an integer and has negligible
//! imaginary part. Rounding failures retry at doubled precision.

mod fixed;

pub use fixed::{pi_fixed, FixedComplex};

use num_bigint::BigInt;
use num_integer::Integer;

use crate::arith::{
    euler_totient, is_primitive_root_mod_p2, mul_mod, pow_mod, primitive_root_mod_p2,
    require_prime_at_least_5, Rational,
};
use crate::dedekind::{compute_v, integrality_condition, DedekindSums};
use crate::error::{Error, Result};
use crate::polynomial::IntPolynomial;

/// Working precision and rounding policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionConfig {
    bits: u32,
    tolerance: f64,
    max_retries: u32,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            bits: 128,
            tolerance: 1e-6,
            max_retries: 4,
        }
    }
}

impl PrecisionConfig {
    pub fn new(bits: u32, tolerance: f64, max_retries: u32) -> Result<Self> {
        if bits < 64 {
            return Err(Error::InvalidPrecision(format!("{bits} bits < 64")));
        }
        if !(tolerance > 0.0 && tolerance < 0.25) {
            return Err(Error::InvalidPrecision(format!(
                "tolerance {tolerance} outside (0, 1/4)"
            )));
        }
        Ok(PrecisionConfig {
            bits,
            tolerance,
            max_retries,
        })
    }

    pub fn with_bits(bits: u32) -> Result<Self> {
        let d = Self::default();
        Self::new(bits, d.tolerance, d.max_retries)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
    pub fn max_retries(&self) -> u32 {
        self.max_retries
    }

    fn doubled(&self) -> Self {
        PrecisionConfig {
            bits: self.bits * 2,
            ..*self
        }
    }
}

/// All `A(r,k,n)` for `n = 1..=k`.
///
/// The phase `pi s(r,h,k) - 2 pi h n / k` is formed and reduced mod `2 pi` exactly before it is
/// converted to floating point.
pub fn a_values(r: u64, k: u64, cfg: &PrecisionConfig) -> Result<Vec<FixedComplex>> {
    if k < 2 {
        return Err(Error::KTooSmall(k));
    }
    let sums = DedekindSums::new(r, k)?;
    let units: Vec<u64> = (1..k).filter(|h| h.gcd(&k) == 1).collect();
    let s: Vec<Rational> = units
        .iter()
        .map(|&h| sums.sum(h as i64))
        .collect::<Result<_>>()?;
    (1..=k)
        .map(|n| {
            let terms = units.iter().zip(&s).map(|(&h, s)| {
                let t = s - Rational::new(BigInt::from(2 * ((h * n) % k)), BigInt::from(k));
                FixedComplex::exp_i_pi(&t, cfg.bits)
            });
            Ok(terms
                .sum::<Option<FixedComplex>>()
                .expect("k >= 2 has a unit"))
        })
        .collect()
}

/// `A(r,k,n) = sum_{(h,k)=1} exp(pi i s(r,h,k) - 2 pi i h n / k)`.
pub fn a_numeric(r: u64, k: u64, n: i64, cfg: &PrecisionConfig) -> Result<FixedComplex> {
    if k < 2 {
        return Err(Error::KTooSmall(k));
    }
    let idx = (n.rem_euclid(k as i64) + k as i64 - 1) % k as i64;
    Ok(a_values(r, k, cfg)?.swap_remove(idx as usize))
}

/// `(-1)^((p^2-1)/8) * sum_{h=1}^{p-1} omega^((v - p n) h^p)`, `omega = exp(2 pi i / p^2)`.
pub fn a_trace_form(p: u64, n: i64, cfg: &PrecisionConfig) -> Result<FixedComplex> {
    require_prime_at_least_5(p)?;
    let m = p * p;
    let v = compute_v(p)?.to_u64().unwrap();
    let base = (v + m - crate::arith::reduce_i64(n * p as i64, m)) % m;
    let sum = (1..p)
        .map(|h| FixedComplex::root_of_unity(mul_mod(base, pow_mod(h, p, m), m), m, cfg.bits))
        .sum::<Option<FixedComplex>>()
        .unwrap();
    Ok(if ((m - 1) / 8) % 2 == 1 { -&sum } else { sum })
}

/// Exponents `g^(pj) (g^p + p n) mod p^2`, `j = 0..p-1`, of the terms of `eta_n`.
pub(crate) fn eta_exponents(p: u64, g: u64, n: u64) -> Vec<u64> {
    let m = p * p;
    let gp = pow_mod(g, p, m);
    let coset = (gp + (p * (n % p)) % m) % m;
    let mut out = Vec::with_capacity(p as usize - 1);
    let mut x = coset;
    for _ in 0..p - 1 {
        out.push(x);
        x = mul_mod(x, gp, m);
    }
    out
}

/// `eta_n = sum_{j=0}^{p-2} exp(2 pi i g^(pj) (g^p + p n) / p^2)`.
pub fn eta_numeric(p: u64, n: i64, g: u64, cfg: &PrecisionConfig) -> Result<FixedComplex> {
    require_prime_at_least_5(p)?;
    if !is_primitive_root_mod_p2(g, p) {
        return Err(Error::NotPrimitiveRoot { g, p });
    }
    let m = p * p;
    let n = n.rem_euclid(p as i64) as u64;
    Ok(eta_exponents(p, g, n)
        .into_iter()
        .map(|e| FixedComplex::root_of_unity(e, m, cfg.bits))
        .sum::<Option<FixedComplex>>()
        .unwrap())
}

/// `eta_1, ..., eta_p` for the primitive root `g`.
pub fn eta_values(p: u64, g: u64, cfg: &PrecisionConfig) -> Result<Vec<FixedComplex>> {
    require_prime_at_least_5(p)?;
    if !is_primitive_root_mod_p2(g, p) {
        return Err(Error::NotPrimitiveRoot { g, p });
    }
    let m = p * p;
    let table: Vec<FixedComplex> = (0..m)
        .map(|e| FixedComplex::root_of_unity(e, m, cfg.bits))
        .collect();
    Ok((1..=p)
        .map(|n| {
            eta_exponents(p, g, n)
                .into_iter()
                .map(|e| table[e as usize].clone())
                .sum::<Option<FixedComplex>>()
                .unwrap()
        })
        .collect())
}

/// Complex polynomial with the deviation statistics needed to decide whether it may be rounded.
#[derive(Debug, Clone)]
pub struct NumericPolynomial {
    coeffs: Vec<FixedComplex>,
    max_imag: f64,
    max_deviation: f64,
}

impl NumericPolynomial {
    pub fn new(coeffs: Vec<FixedComplex>) -> Self {
        let max_imag = coeffs.iter().map(|c| c.abs_im_f64()).fold(0.0, f64::max);
        let max_deviation = coeffs
            .iter()
            .map(|c| c.re_distance_to_integer())
            .fold(0.0, f64::max);
        NumericPolynomial {
            coeffs,
            max_imag,
            max_deviation,
        }
    }

    /// Coefficients in ascending degree.
    pub fn coeffs(&self) -> &[FixedComplex] {
        &self.coeffs
    }
    pub fn max_imag(&self) -> f64 {
        self.max_imag
    }
    /// Largest distance of a real part to the nearest integer.
    pub fn max_deviation(&self) -> f64 {
        self.max_deviation
    }
}

/// Monic `prod (x - root)`, multiplied out in the order given.
pub fn poly_from_roots(roots: &[FixedComplex]) -> NumericPolynomial {
    let bits = roots.first().map_or(64, |r| r.bits());
    let mut acc = vec![FixedComplex::one(bits)];
    for root in roots {
        let mut next = vec![FixedComplex::zero(bits); acc.len() + 1];
        for (i, c) in acc.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &c.mul(root);
        }
        acc = next;
    }
    NumericPolynomial::new(acc)
}

/// An integer polynomial obtained by rounding, with the evidence that justified it.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundedPolynomial {
    pub poly: IntPolynomial,
    pub max_deviation: f64,
    pub max_imag: f64,
    pub bits: u32,
}

pub fn round_to_int_poly(np: &NumericPolynomial, tolerance: f64) -> Result<IntPolynomial> {
    if np.max_deviation >= tolerance || np.max_imag >= tolerance {
        return Err(Error::RoundingFailure {
            deviation: np.max_deviation,
            imag: np.max_imag,
            tolerance,
        });
    }
    Ok(IntPolynomial::new(
        np.coeffs.iter().map(|c| c.round_re()).collect(),
    ))
}

fn round_with_retries<F>(cfg: &PrecisionConfig, roots: F) -> Result<RoundedPolynomial>
where
    F: Fn(&PrecisionConfig) -> Result<Vec<FixedComplex>>,
{
    let mut cfg = *cfg;
    let mut attempt = 0;
    loop {
        let np = poly_from_roots(&roots(&cfg)?);
        match round_to_int_poly(&np, cfg.tolerance) {
            Ok(poly) => {
                return Ok(RoundedPolynomial {
                    poly,
                    max_deviation: np.max_deviation,
                    max_imag: np.max_imag,
                    bits: cfg.bits,
                })
            }
            Err(e) if attempt >= cfg.max_retries => return Err(e),
            Err(_) => {
                attempt += 1;
                cfg = cfg.doubled();
            }
        }
    }
}

/// `W(r,k,x) = prod_{n=1}^{k} (x - A(r,k,n))`, rounded to integers.
///
/// Refuses unless `gcd(r+1, k) = gcd(r+1, phi(k)) = 1`.
pub fn wilf_numeric(r: u64, k: u64, cfg: &PrecisionConfig) -> Result<RoundedPolynomial> {
    if k < 2 {
        return Err(Error::KTooSmall(k));
    }
    if r % 2 != 0 {
        return Err(Error::InvalidParams(format!("r = {r} is odd")));
    }
    if !integrality_condition(r, k) {
        return Err(Error::IntegralityConditionUnmet { r, k });
    }
    debug_assert!(euler_totient(k) >= 1);
    round_with_retries(cfg, |c| a_values(r, k, c))
}

/// `L(p,x) = prod_{n=1}^{p} (x - eta_n)`, rounded to integers, using the canonical primitive root.
pub fn l_numeric(p: u64, cfg: &PrecisionConfig) -> Result<RoundedPolynomial> {
    require_prime_at_least_5(p)?;
    let g = primitive_root_mod_p2(p)?;
    round_with_retries(cfg, |c| eta_values(p, g, c))
}

/// How `W(p-3,p,x)` relates to `L(p,x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignCase {
    /// `W(x) = L(x)`.
    PlusCase,
    /// `W(x) = -L(-x)`.
    MinusCase,
}

impl SignCase {
    /// The case predicted from `p mod 8`.
    pub fn expected(p: u64) -> SignCase {
        match p % 8 {
            1 | 7 => SignCase::PlusCase,
            _ => SignCase::MinusCase,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SignCase::PlusCase => "PlusCase",
            SignCase::MinusCase => "MinusCase",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SignCaseCheck {
    pub p: u64,
    pub case: SignCase,
    pub wilf: RoundedPolynomial,
    pub period: IntPolynomial,
}

/// Compares the numeric `W(p-3,p,x)` with the exact `L(p,x)`.
pub fn check_sign_case(p: u64, cfg: &PrecisionConfig) -> Result<SignCaseCheck> {
    require_prime_at_least_5(p)?;
    let wilf = wilf_numeric(p - 3, p, cfg)?;
    let period = crate::period::l_exact(p)?;
    let case = if wilf.poly == period {
        SignCase::PlusCase
    } else if wilf.poly == period.negate_argument_and_value() {
        SignCase::MinusCase
    } else {
        return Err(Error::TheoremViolation(format!(
            "W({}, {p}, x) = {} matches neither L(p,x) nor -L(p,-x)",
            p - 3,
            wilf.poly
        )));
    };
    if case != SignCase::expected(p) {
        return Err(Error::TheoremViolation(format!(
            "p = {p}: found {} but p mod 8 = {} predicts {}",
            case.name(),
            p % 8,
            SignCase::expected(p).name()
        )));
    }
    Ok(SignCaseCheck {
        p,
        case,
        wilf,
        period,
    })
}

//! Generalized Dedekind sums `s(r,h,k)` and the congruences satisfied by the scaled sums
//! `p^2 s(p-3,h,p)`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use crate::arith::{
    bernoulli_number, bernoulli_poly_coeffs, horner, inv_mod_u64, pow_mod, rational_mod,
    reduce_i64, reduce_u64, require_prime_at_least_5, sawtooth, Rational, Residue,
};
use crate::error::{Error, Result};

/// Largest `p` for which `u` and `v` are derived from the exact rational `B_{p-1}`.
pub const EXACT_BERNOULLI_MAX_P: u64 = 199;

/// Arguments of `s(r,h,k)`: `r` even, `k >= 1`, `gcd(h,k) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DedekindParams {
    r: u64,
    h: i64,
    k: u64,
}

impl DedekindParams {
    pub fn new(r: u64, h: i64, k: u64) -> Result<Self> {
        if r % 2 != 0 {
            return Err(Error::InvalidParams(format!("r = {r} is odd")));
        }
        if k == 0 {
            return Err(Error::InvalidParams("k must be positive".into()));
        }
        if num_integer::gcd(h.unsigned_abs(), k) != 1 {
            return Err(Error::InvalidParams(format!("gcd({h}, {k}) != 1")));
        }
        Ok(DedekindParams { r, h, k })
    }

    pub fn r(&self) -> u64 {
        self.r
    }
    pub fn h(&self) -> i64 {
        self.h
    }
    pub fn k(&self) -> u64 {
        self.k
    }
}

/// `s(r,h,k)` for fixed `(r,k)` and varying `h`, with the Bernoulli values `B_{r+1}(j/k)`
/// evaluated once.
#[derive(Debug, Clone)]
pub struct DedekindSums {
    r: u64,
    k: u64,
    prefactor: Rational,
    bern: Vec<Rational>,
}

impl DedekindSums {
    pub fn new(r: u64, k: u64) -> Result<Self> {
        DedekindParams::new(r, 1, k)?;
        let coeffs = bernoulli_poly_coeffs(r as usize + 1);
        let bern = (1..k)
            .map(|j| horner(&coeffs, &Rational::new(j.into(), k.into())))
            .collect();
        let prefactor = Rational::new(
            num_traits::pow(BigInt::from(k), r as usize),
            BigInt::from(r + 1),
        );
        Ok(DedekindSums {
            r,
            k,
            prefactor,
            bern,
        })
    }

    pub fn sum(&self, h: i64) -> Result<Rational> {
        DedekindParams::new(self.r, h, self.k)?;
        let k = self.k;
        let h_red = reduce_i64(h, k);
        let mut acc = Rational::zero();
        for (idx, b) in self.bern.iter().enumerate() {
            let j = idx as u64 + 1;
            // ((jh/k)) depends only on jh mod k
            let frac = Rational::new(
                BigInt::from((j as u128 * h_red as u128 % k as u128) as u64),
                k.into(),
            );
            let saw = sawtooth(&frac);
            if !saw.is_zero() {
                acc += b * saw;
            }
        }
        Ok(acc * &self.prefactor)
    }
}

/// Exact `s(r,h,k) = k^r/(r+1) * sum_{j=1}^{k-1} B_{r+1}(j/k) ((jh/k))`.
pub fn dedekind_sum(params: DedekindParams) -> Result<Rational> {
    DedekindSums::new(params.r, params.k)?.sum(params.h)
}

fn scaled(p: u64, h: i64, s: Rational) -> Result<BigInt> {
    let v = s * BigInt::from(p * p);
    if !v.is_integer() {
        return Err(Error::NotIntegral {
            p,
            h,
            value: v.to_string(),
        });
    }
    Ok(v.to_integer())
}

/// The integer `p^2 s(p-3,h,p)`.
pub fn scaled_sum(p: u64, h: i64) -> Result<BigInt> {
    require_prime_at_least_5(p)?;
    let sums = DedekindSums::new(p - 3, p)?;
    scaled(p, h, sums.sum(h)?)
}

/// `p^2 s(p-3,h,p)` for `h = 1, ..., p-1`.
pub fn scaled_sums(p: u64) -> Result<Vec<BigInt>> {
    require_prime_at_least_5(p)?;
    let sums = DedekindSums::new(p - 3, p)?;
    (1..p as i64).map(|h| scaled(p, h, sums.sum(h)?)).collect()
}

fn require_exact_scale(p: u64) -> Result<()> {
    require_prime_at_least_5(p)?;
    if p > EXACT_BERNOULLI_MAX_P {
        return Err(Error::UnsupportedScale(format!(
            "p = {p} (exact B_(p-1) limited to p <= {EXACT_BERNOULLI_MAX_P})"
        )));
    }
    Ok(())
}

/// `u = p B_{p-1} / (p-2) mod p^2`.
pub fn compute_u(p: u64) -> Result<Residue> {
    require_exact_scale(p)?;
    let b = bernoulli_number(p as usize - 1);
    let x = b * BigInt::from(p) / BigInt::from(p - 2);
    let u = rational_mod(&x, &BigUint::from(p * p))?;
    let u_mod_p = u.to_u64().unwrap() % p;
    if u_mod_p != (p + 1) / 2 {
        return Err(Error::TheoremViolation(format!(
            "u = {u_mod_p} (mod {p}) but (p+1)/2 = {}",
            (p + 1) / 2
        )));
    }
    Ok(u)
}

/// `v = ((p^2+1)/2) u mod p^2`.
pub fn compute_v(p: u64) -> Result<Residue> {
    let u = compute_u(p)?.to_u64().unwrap();
    let m = p * p;
    Ok(Residue::from_u64(
        crate::arith::mul_mod((m + 1) / 2, u, m),
        m,
    ))
}

/// Which congruence a [`CongruenceReport`] checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CongruenceKind {
    /// `p^2 s(p-3,h,p) = u h^p (mod p^2)`.
    PowerLaw,
    /// `p^2 s(p-3,h,p) = (p^2-1)/8 (mod 2)`.
    Parity,
    /// `p^2 s(p-3,h,p) = p B_{p-1}/(p-1) (H^-1 + H^{p-2}/(p-2)) (mod p^2)`, `hH = 1 (mod p)`.
    Reciprocity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceRecord {
    pub h: u64,
    /// The lift of `h^-1 mod p` used on the right-hand side (reciprocity only).
    pub h_inverse: Option<u64>,
    pub scaled_sum: BigInt,
    /// Left-hand side reduced modulo the report modulus.
    pub observed: u64,
    pub predicted: u64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceReport {
    pub kind: CongruenceKind,
    pub p: u64,
    pub modulus: u64,
    pub u: Option<Residue>,
    pub records: Vec<CongruenceRecord>,
    pub pass: bool,
}

impl CongruenceReport {
    fn new(
        kind: CongruenceKind,
        p: u64,
        modulus: u64,
        u: Option<Residue>,
        records: Vec<CongruenceRecord>,
    ) -> Self {
        let pass = records.iter().all(|r| r.holds);
        CongruenceReport {
            kind,
            p,
            modulus,
            u,
            records,
            pass,
        }
    }
}

/// Checks `p^2 s(p-3,h,p) = u h^p (mod p^2)` for every `h` in `1..p`.
pub fn check_power_law(p: u64) -> Result<CongruenceReport> {
    let u = compute_u(p)?;
    check_power_law_with(p, &scaled_sums(p)?, u)
}

fn check_power_law_with(p: u64, sums: &[BigInt], u: Residue) -> Result<CongruenceReport> {
    let m = p * p;
    let uu = u.to_u64().unwrap();
    let records = sums
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let h = i as u64 + 1;
            let observed = reduce_u64(s, m);
            let predicted = crate::arith::mul_mod(uu, pow_mod(h, p, m), m);
            CongruenceRecord {
                h,
                h_inverse: None,
                scaled_sum: s.clone(),
                observed,
                predicted,
                holds: observed == predicted,
            }
        })
        .collect();
    Ok(CongruenceReport::new(
        CongruenceKind::PowerLaw,
        p,
        m,
        Some(u),
        records,
    ))
}

/// Checks `p^2 s(p-3,h,p) = (p^2-1)/8 (mod 2)` for every `h` in `1..p`.
pub fn check_parity(p: u64) -> Result<CongruenceReport> {
    check_parity_with(p, &scaled_sums(p)?)
}

fn check_parity_with(p: u64, sums: &[BigInt]) -> Result<CongruenceReport> {
    let predicted = ((p * p - 1) / 8) % 2;
    let records = sums
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let observed = reduce_u64(s, 2);
            CongruenceRecord {
                h: i as u64 + 1,
                h_inverse: None,
                scaled_sum: s.clone(),
                observed,
                predicted,
                holds: observed == predicted,
            }
        })
        .collect();
    Ok(CongruenceReport::new(
        CongruenceKind::Parity,
        p,
        2,
        None,
        records,
    ))
}

/// Right-hand side of the reciprocity congruence for an integer lift `big_h` of `h^-1 mod p`.
pub fn reciprocity_rhs(p: u64, big_h: i64) -> Result<u64> {
    require_exact_scale(p)?;
    let m = p * p;
    if big_h.rem_euclid(p as i64) == 0 {
        return Err(Error::NotCoprime { value: big_h, p });
    }
    let c = bernoulli_number(p as usize - 1) * BigInt::from(p) / BigInt::from(p - 1);
    let c = rational_mod(&c, &BigUint::from(m))?.to_u64().unwrap();
    let hr = reduce_i64(big_h, m);
    let h_inv = inv_mod_u64(hr, m).unwrap();
    let inv_pm2 = inv_mod_u64(p - 2, m).unwrap();
    let t = crate::arith::mul_mod(inv_pm2, pow_mod(hr, p - 2, m), m);
    Ok(crate::arith::mul_mod(c, (h_inv + t) % m, m))
}

/// Checks the reciprocity congruence with `H` the least positive residue of `h^-1 mod p`.
pub fn check_reciprocity_congruence(p: u64) -> Result<CongruenceReport> {
    check_reciprocity_with(p, &scaled_sums(p)?)
}

fn check_reciprocity_with(p: u64, sums: &[BigInt]) -> Result<CongruenceReport> {
    let m = p * p;
    let records = sums
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let h = i as u64 + 1;
            let big_h = inv_mod_u64(h, p).unwrap();
            let predicted = reciprocity_rhs(p, big_h as i64)?;
            let observed = reduce_u64(s, m);
            Ok(CongruenceRecord {
                h,
                h_inverse: Some(big_h),
                scaled_sum: s.clone(),
                observed,
                predicted,
                holds: observed == predicted,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CongruenceReport::new(
        CongruenceKind::Reciprocity,
        p,
        m,
        None,
        records,
    ))
}

/// The three congruence reports for one `p`, sharing a single evaluation of the scaled sums.
pub fn check_all_congruences(p: u64) -> Result<[CongruenceReport; 3]> {
    let sums = scaled_sums(p)?;
    let u = compute_u(p)?;
    Ok([
        check_power_law_with(p, &sums, u)?,
        check_parity_with(p, &sums)?,
        check_reciprocity_with(p, &sums)?,
    ])
}

fn periodicity_f(p: u64, a: i64, big_h: i64) -> u64 {
    let m = p * p;
    let hr = reduce_i64(big_h, m);
    let inv = inv_mod_u64(hr, m).expect("H coprime to p");
    let t = crate::arith::mul_mod(reduce_i64(a, m), pow_mod(hr, p - 2, m), m);
    (inv + t) % m
}

/// Whether `f(H + bp) = f(H) (mod p^2)` for `f(H) = H^-1 + a H^{p-2}`.
///
/// `a = None` selects `(p-1)/2`.
pub fn periodicity_probe(p: u64, a: Option<i64>, big_h: i64, b: i64) -> Result<bool> {
    require_prime_at_least_5(p)?;
    let a = a.unwrap_or(((p - 1) / 2) as i64);
    if reduce_i64(-2 * a, p) != 1 {
        return Err(Error::InvalidA { a, p });
    }
    if big_h.rem_euclid(p as i64) == 0 {
        return Err(Error::NotCoprime { value: big_h, p });
    }
    let shifted = big_h + b * p as i64;
    Ok(periodicity_f(p, a, big_h) == periodicity_f(p, a, shifted))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicityReport {
    pub p: u64,
    pub a: i64,
    pub probes: usize,
    /// `(H, b)` pairs where the shift changed `f`.
    pub failures: Vec<(i64, i64)>,
}

impl PeriodicityReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Probes every `H` in `[1, p^2)` coprime to `p` against every `b` in `[0, p)`.
pub fn check_periodicity(p: u64, a: Option<i64>) -> Result<PeriodicityReport> {
    require_prime_at_least_5(p)?;
    let a_val = a.unwrap_or(((p - 1) / 2) as i64);
    let mut probes = 0;
    let mut failures = Vec::new();
    for big_h in 1..(p * p) as i64 {
        if big_h % p as i64 == 0 {
            continue;
        }
        for b in 0..p as i64 {
            probes += 1;
            if !periodicity_probe(p, Some(a_val), big_h, b)? {
                failures.push((big_h, b));
            }
        }
    }
    Ok(PeriodicityReport {
        p,
        a: a_val,
        probes,
        failures,
    })
}

/// Whether `gcd(r+1, k) = 1` and `gcd(r+1, phi(k)) = 1`, the condition under which
/// `W(r,k,x)` has integer coefficients.
pub fn integrality_condition(r: u64, k: u64) -> bool {
    let phi = crate::arith::euler_totient(k);
    (r + 1).gcd(&k) == 1 && (r + 1).gcd(&phi) == 1
}

//! On-disk cache of period polynomials, one `L_<p>.json` file per prime.
//!
//! Loading re-verifies the stored polynomial modulo a prime `q' = 1 (mod p^2)` that was not
//! used to reconstruct it, against the period product computed directly modulo `q'`. A file
//! that is well-formed but wrong is therefore caught, not just a truncated one.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use wilfpoly::period::PeriodContext;
use wilfpoly::IntPolynomial;

pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialCacheFile {
    pub format_version: u32,
    pub p: u64,
    pub variable: String,
    /// Decimal strings, ascending degree.
    pub coefficients: Vec<String>,
    /// `"crt"` or `"numeric"`.
    pub method: String,
    /// Empty for the numeric method.
    pub crt_primes: Vec<u64>,
    pub primitive_root: u64,
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache entry {} is corrupt: {reason}", path.display())]
    CacheCorrupt {
        path: PathBuf,
        reason: String,
        /// The verification prime that exposed the mismatch, if it got that far.
        prime: Option<u64>,
    },
    #[error("cache I/O on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl PolynomialCacheFile {
    pub fn new(
        p: u64,
        poly: &IntPolynomial,
        method: &str,
        crt_primes: Vec<u64>,
        primitive_root: u64,
    ) -> Self {
        PolynomialCacheFile {
            format_version: CACHE_FORMAT_VERSION,
            p,
            variable: "x".into(),
            coefficients: poly.coeffs().iter().map(|c| c.to_string()).collect(),
            method: method.into(),
            crt_primes,
            primitive_root,
        }
    }

    /// Parses the coefficients, checking the structural invariants on the way.
    pub fn polynomial(&self) -> Result<IntPolynomial, String> {
        if self.format_version != CACHE_FORMAT_VERSION {
            return Err(format!(
                "unsupported format version {}",
                self.format_version
            ));
        }
        if self.method != "crt" && self.method != "numeric" {
            return Err(format!("unknown method {:?}", self.method));
        }
        let n = self.p as usize + 1;
        if self.coefficients.len() != n {
            return Err(format!(
                "{} coefficients, expected {n}",
                self.coefficients.len()
            ));
        }
        if self.coefficients[n - 1] != "1" {
            return Err("leading coefficient is not 1".into());
        }
        if self.coefficients[n - 2] != "0" {
            return Err("coefficient of x^(p-1) is not 0".into());
        }
        let coeffs = self
            .coefficients
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|e| format!("bad coefficient {s:?}: {e}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntPolynomial::new(coeffs))
    }
}

pub fn cache_path(dir: &Path, p: u64) -> PathBuf {
    dir.join(format!("L_{p}.json"))
}

/// Writes the entry atomically: a temporary file in the same directory, renamed into place.
pub fn cache_store(dir: &Path, file: &PolynomialCacheFile) -> Result<PathBuf, CacheError> {
    let path = cache_path(dir, file.p);
    let io = |source| CacheError::Io {
        path: path.clone(),
        source,
    };
    fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    let mut body = serde_json::to_string_pretty(file).expect("cache file serializes");
    body.push('\n');
    tmp.write_all(body.as_bytes()).map_err(io)?;
    tmp.persist(&path).map_err(|e| io(e.error))?;
    Ok(path)
}

/// Loads and verifies `L_<p>.json`. A missing file is `Ok(None)`.
///
/// `seed` selects which of the first four fresh primes does the verification.
pub fn cache_load(
    dir: &Path,
    p: u64,
    seed: u64,
) -> Result<Option<(PolynomialCacheFile, IntPolynomial)>, CacheError> {
    let path = cache_path(dir, p);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(source) => return Err(CacheError::Io { path, source }),
    };
    let corrupt = |reason: String, prime| CacheError::CacheCorrupt {
        path: path.clone(),
        reason,
        prime,
    };
    let file: PolynomialCacheFile =
        serde_json::from_str(&text).map_err(|e| corrupt(format!("unparsable: {e}"), None))?;
    if file.p != p {
        return Err(corrupt(format!("file is for p = {}", file.p), None));
    }
    let poly = file.polynomial().map_err(|r| corrupt(r, None))?;
    let ctx = PeriodContext::new(p).map_err(|e| corrupt(e.to_string(), None))?;
    let prime = ctx
        .fresh_primes((seed % 4) as usize, 4)
        .into_iter()
        .find(|cp| !file.crt_primes.contains(&cp.q))
        .expect("at least one fresh prime differs from the recorded ones");
    if !ctx.verify_mod(&poly, &prime) {
        return Err(corrupt(
            format!(
                "polynomial disagrees with the period product modulo {}",
                prime.q
            ),
            Some(prime.q),
        ));
    }
    Ok(Some((file, poly)))
}

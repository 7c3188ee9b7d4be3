//! The determinant form of `L(p,x)`.
//!
//! `A` is the `p x p` matrix with `a_{m,n} = -x` when `m + n = 0 (mod p)` and
//! `omega^((m+n)^p)` otherwise, `omega = exp(2 pi i / p^2)`. Up to a row permutation `F` it is
//! `x I - B` for the circulant `B = sum_{j=1}^{p-1} omega^(j^p) T^j`, whose eigenvalues are the
//! `rho_k`. Indices run over `{1, ..., p}`, with `p` standing for the class of `0`.

use std::fmt;

use crate::arith::{mul_mod, pow_mod, require_prime_at_least_5};
use crate::error::{Error, Result};
use crate::fp;
use crate::numeric::{FixedComplex, PrecisionConfig};
use crate::period::{rho_k_mod_q, CrtPrime};

/// A symbolic matrix entry: `0`, `+-x`, or `+-omega^e` with `e` in `Z/p^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymEntry {
    Zero,
    Variable { negated: bool },
    Root { negated: bool, exponent: u64 },
}

impl SymEntry {
    /// The entry `-x` of `A`.
    pub const VARIABLE_SLOT: SymEntry = SymEntry::Variable { negated: true };

    pub fn root(exponent: u64) -> Self {
        SymEntry::Root {
            negated: false,
            exponent,
        }
    }

    pub fn neg(self) -> Self {
        match self {
            SymEntry::Zero => SymEntry::Zero,
            SymEntry::Variable { negated } => SymEntry::Variable { negated: !negated },
            SymEntry::Root { negated, exponent } => SymEntry::Root {
                negated: !negated,
                exponent,
            },
        }
    }

    /// Instantiates the entry in `F_q` with `omega -> zeta` and `x -> x0`.
    pub fn eval_mod(self, zeta: u64, x0: u64, q: u64) -> u64 {
        let (neg, v) = match self {
            SymEntry::Zero => return 0,
            SymEntry::Variable { negated } => (negated, x0 % q),
            SymEntry::Root { negated, exponent } => (negated, pow_mod(zeta, exponent, q)),
        };
        if neg {
            (q - v) % q
        } else {
            v
        }
    }
}

impl fmt::Display for SymEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SymEntry::Zero => write!(f, "0"),
            SymEntry::Variable { negated } => write!(f, "{}x", if negated { "-" } else { "" }),
            SymEntry::Root { negated, exponent } => {
                write!(f, "{}w^{exponent}", if negated { "-" } else { "" })
            }
        }
    }
}

/// Reduces an index into the representative set `{1, ..., p}`.
pub fn index_rep(i: i64, p: u64) -> usize {
    let r = i.rem_euclid(p as i64) as usize;
    if r == 0 {
        p as usize
    } else {
        r
    }
}

/// Dense `p x p` symbolic matrix, stored row-major and addressed with 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMatrix {
    p: u64,
    entries: Vec<SymEntry>,
}

impl SymMatrix {
    fn from_fn(p: u64, f: impl Fn(usize, usize) -> SymEntry) -> Self {
        let n = p as usize;
        let mut entries = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                entries.push(f(i, j));
            }
        }
        SymMatrix { p, entries }
    }

    pub fn size(&self) -> usize {
        self.p as usize
    }

    /// Entry in row `i`, column `j`, both in `1..=p`.
    pub fn get(&self, i: usize, j: usize) -> SymEntry {
        let n = self.p as usize;
        assert!(
            (1..=n).contains(&i) && (1..=n).contains(&j),
            "index out of range"
        );
        self.entries[(i - 1) * n + (j - 1)]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.p, |i, j| self.get(j, i))
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.p, |i, j| self.get(i, j).neg())
    }

    /// `P M` for a permutation matrix `P`.
    pub fn permute_rows(&self, perm: &Permutation) -> Self {
        Self::from_fn(self.p, |i, j| self.get(perm.image(i), j))
    }

    /// `M P` for a permutation matrix `P`.
    pub fn permute_cols(&self, perm: &Permutation) -> Self {
        Self::from_fn(self.p, |i, j| self.get(i, perm.preimage(j)))
    }

    /// Positions where two matrices differ, 1-based.
    pub fn mismatches(&self, other: &Self) -> Vec<(usize, usize)> {
        let n = self.p as usize;
        let mut out = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                if self.get(i, j) != other.get(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Instantiation in `F_q`, rows as vectors indexed from 0.
    pub fn eval_mod(&self, zeta: u64, x0: u64, q: u64) -> Vec<Vec<u64>> {
        let n = self.p as usize;
        (1..=n)
            .map(|i| {
                (1..=n)
                    .map(|j| self.get(i, j).eval_mod(zeta, x0, q))
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.p as usize;
        for i in 1..=n {
            let row: Vec<String> = (1..=n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// A permutation matrix with a 1 at `(i, image(i))` for each row `i`, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn image(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    pub fn preimage(&self, j: usize) -> usize {
        self.image.iter().position(|&c| c == j).unwrap() + 1
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            image: self.image.iter().map(|&k| other.image(k)).collect(),
        }
    }

    pub fn power(&self, k: usize) -> Permutation {
        let id = Permutation {
            image: (1..=self.len()).collect(),
        };
        (0..k).fold(id, |acc, _| acc.compose(self))
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &c)| c == i + 1)
    }

    /// Determinant of the permutation matrix, from the inversion count.
    pub fn sign(&self) -> i32 {
        let n = self.image.len();
        let mut inversions = 0usize;
        for a in 0..n {
            for b in a + 1..n {
                if self.image[a] > self.image[b] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn to_matrix(&self) -> SymMatrix {
        SymMatrix::from_fn(self.len() as u64, |i, j| {
            if self.image(i) == j {
                SymEntry::root(0)
            } else {
                SymEntry::Zero
            }
        })
    }
}

/// `(m+n)^p mod p^2`; depends only on `m + n mod p`.
fn power_exponent(d: i64, p: u64) -> u64 {
    let m = p * p;
    pow_mod(d.rem_euclid(m as i64) as u64, p, m)
}

/// The matrix `A` with `-x` where `m + n = 0 (mod p)` and `omega^((m+n)^p)` elsewhere.
pub fn build_granville(p: u64) -> Result<SymMatrix> {
    require_prime_at_least_5(p)?;
    Ok(SymMatrix::from_fn(p, |i, j| {
        if (i + j) as u64 % p == 0 {
            SymEntry::VARIABLE_SLOT
        } else {
            SymEntry::root(power_exponent((i + j) as i64, p))
        }
    }))
}

/// `B = sum_{i != j} omega^((i-j)^p) E_{i,j}`.
pub fn build_b(p: u64) -> Result<SymMatrix> {
    require_prime_at_least_5(p)?;
    Ok(SymMatrix::from_fn(p, |i, j| {
        if i == j {
            SymEntry::Zero
        } else {
            SymEntry::root(power_exponent(i as i64 - j as i64, p))
        }
    }))
}

/// `F = sum_j E_{j, p-j}`.
pub fn build_f(p: u64) -> Result<Permutation> {
    require_prime_at_least_5(p)?;
    Ok(Permutation {
        image: (1..=p as i64).map(|j| index_rep(p as i64 - j, p)).collect(),
    })
}

/// `T = sum_j E_{j+1, j}`, the cyclic shift `e_j -> e_{j+1}`.
pub fn build_t(p: u64) -> Result<Permutation> {
    require_prime_at_least_5(p)?;
    // row i has its 1 in column i-1
    Ok(Permutation {
        image: (1..=p as i64).map(|i| index_rep(i - 1, p)).collect(),
    })
}

/// `C = x I - B`.
pub fn build_c(p: u64) -> Result<SymMatrix> {
    let b = build_b(p)?;
    Ok(SymMatrix::from_fn(p, |i, j| {
        if i == j {
            SymEntry::Variable { negated: false }
        } else {
            b.get(i, j).neg()
        }
    }))
}

/// `sum_{j=1}^{p-1} omega^(j^p) T^j`, assembled from the shift powers.
pub fn b_from_shifts(p: u64) -> Result<SymMatrix> {
    let t = build_t(p)?;
    let n = p as usize;
    let mut entries = vec![SymEntry::Zero; n * n];
    for j in 1..n {
        let tj = t.power(j);
        let e = power_exponent(j as i64, p);
        for i in 1..=n {
            let slot = &mut entries[(i - 1) * n + (tj.image(i) - 1)];
            assert_eq!(*slot, SymEntry::Zero, "shift powers overlap");
            *slot = SymEntry::root(e);
        }
    }
    Ok(SymMatrix { p, entries })
}

/// Outcome of an entrywise symbolic comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
    /// 1-based positions where the two sides differ.
    pub mismatches: Vec<(usize, usize)>,
}

fn compare(name: &'static str, lhs: &SymMatrix, rhs: &SymMatrix) -> IdentityCheck {
    let mismatches = lhs.mismatches(rhs);
    IdentityCheck {
        name,
        holds: mismatches.is_empty(),
        mismatches,
    }
}

/// Literal entrywise check of `x I - B = -F A`.
///
/// This fails off the diagonal: `(-FA)_{i,n} = -omega^((n-i)^p)` while
/// `(xI - B)_{i,n} = -omega^((i-n)^p)`, and `(i-n)^p = -(n-i)^p` is a different exponent.
/// What holds is `x I - B = -A F` and `-F A = (x I - B)^T`; see [`verify_identities`].
pub fn verify_c_eq_minus_fa(p: u64) -> Result<IdentityCheck> {
    let a = build_granville(p)?;
    let f = build_f(p)?;
    Ok(compare("C = -FA", &build_c(p)?, &a.permute_rows(&f).neg()))
}

/// The three permutation identities relating `C = x I - B` and `A`.
pub fn verify_identities(p: u64) -> Result<[IdentityCheck; 3]> {
    let a = build_granville(p)?;
    let f = build_f(p)?;
    let c = build_c(p)?;
    let fa = a.permute_rows(&f).neg();
    let af = a.permute_cols(&f).neg();
    Ok([
        compare("C = -FA", &c, &fa),
        compare("C = -AF", &c, &af),
        compare("-FA = C^T", &fa, &c.transpose()),
    ])
}

/// Checks `T v_k = zeta^(-pk) v_k` and `B v_k = rho_k v_k` in `F_q`, where
/// `v_k = sum_j zeta^(pjk) e_j`.
pub fn eigen_check_mod_q(p: u64, k: u64, cp: &CrtPrime) -> Result<bool> {
    require_prime_at_least_5(p)?;
    let m = p * p;
    let q = cp.q;
    let n = p as usize;
    let v: Vec<u64> = (1..=p)
        .map(|j| pow_mod(cp.zeta, mul_mod(p * j % m, k % p, m), q))
        .collect();
    let t = build_t(p)?;
    let t_eig = pow_mod(cp.zeta, (m - (p * (k % p)) % m) % m, q);
    let tv_ok = (1..=n).all(|i| v[t.image(i) - 1] == mul_mod(t_eig, v[i - 1], q));
    let b = build_b(p)?.eval_mod(cp.zeta, 0, q);
    let rho = rho_k_mod_q(p, k, cp);
    let bv_ok = (0..n).all(|i| {
        let s = (0..n).fold(0u64, |acc, j| (acc + mul_mod(b[i][j], v[j], q)) % q);
        s == mul_mod(rho, v[i], q)
    });
    Ok(tv_ok && bv_ok)
}

/// `det(A) mod q` as `(-1)^((p+1)/2) prod_k (x - rho_k)`, coefficients ascending.
pub fn det_granville_mod_q(p: u64, cp: &CrtPrime) -> Result<Vec<u64>> {
    require_prime_at_least_5(p)?;
    let rho: Vec<u64> = (0..p).map(|k| rho_k_mod_q(p, k, cp)).collect();
    let charpoly = fp::from_roots_tree(&rho, cp.q);
    Ok(if granville_sign(p) < 0 {
        fp::scale(&charpoly, cp.q - 1, cp.q)
    } else {
        charpoly
    })
}

/// `(-1)^((p+1)/2)`.
pub fn granville_sign(p: u64) -> i32 {
    if ((p + 1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Largest `p` accepted by [`det_numeric`].
pub const DET_NUMERIC_MAX_P: u64 = 11;

/// Determinant of the complex matrix `A` at `x = x0` by Gaussian elimination with partial
/// pivoting.
pub fn det_numeric(p: u64, x0: &FixedComplex, cfg: &PrecisionConfig) -> Result<FixedComplex> {
    require_prime_at_least_5(p)?;
    if p > DET_NUMERIC_MAX_P {
        return Err(Error::UnsupportedScale(format!(
            "direct determinant limited to p <= {DET_NUMERIC_MAX_P}"
        )));
    }
    let bits = cfg.bits();
    let x0 = x0.with_bits(bits);
    let m = p * p;
    let n = p as usize;
    let mut rows: Vec<Vec<FixedComplex>> = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let s = (i + j) as u64;
                    if s % p == 0 {
                        -&x0
                    } else {
                        FixedComplex::root_of_unity(pow_mod(s % m, p, m), m, bits)
                    }
                })
                .collect()
        })
        .collect();
    let mut det = FixedComplex::one(bits);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| {
                rows[a][col]
                    .norm_sqr_raw()
                    .cmp(&rows[b][col].norm_sqr_raw())
            })
            .unwrap();
        if pivot != col {
            rows.swap(pivot, col);
            det = -&det;
        }
        let piv = rows[col][col].clone();
        if piv.norm_sqr_raw() == 0.into() {
            return Ok(FixedComplex::zero(bits));
        }
        det = det.mul(&piv);
        for r in col + 1..n {
            let factor = rows[r][col].div(&piv).unwrap();
            for c in col..n {
                let t = factor.mul(&rows[col][c]);
                rows[r][c] = &rows[r][c] - &t;
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::period::PeriodContext;

    fn exps(row: &[SymEntry]) -> Vec<String> {
        row.iter().map(|e| e.to_string()).collect()
    }

    #[test]
    fn seven_first_row() {
        let a = build_granville(7).unwrap();
        let row: Vec<SymEntry> = (1..=7).map(|j| a.get(1, j)).collect();
        assert_eq!(
            exps(&row),
            ["w^30", "w^31", "w^18", "w^19", "w^48", "-x", "w^1"]
        );
        for i in 1..=7 {
            for j in 1..=7 {
                assert_eq!(a.get(i, j), a.get(j, i));
                assert_eq!((i + j) % 7 == 0, a.get(i, j) == SymEntry::VARIABLE_SLOT);
            }
        }
        assert!(matches!(build_granville(3), Err(Error::PrimeTooSmall(3))));
    }

    #[test]
    fn permutations() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            let f = build_f(p).unwrap();
            assert!(f.compose(&f).is_identity());
            let expected = if ((p - 1) / 2) % 2 == 0 { 1 } else { -1 };
            assert_eq!(f.sign(), expected, "p = {p}");
            assert!(build_t(p).unwrap().power(p as usize).is_identity());
        }
        assert_eq!(build_f(7).unwrap().sign(), -1);
    }

    #[test]
    fn b_is_sum_of_shift_powers() {
        for p in [5u64, 7, 11, 13] {
            assert_eq!(b_from_shifts(p).unwrap(), build_b(p).unwrap());
        }
    }

    /// Brute-force `F A` over `F_q` with ordinary matrix multiplication, for an independent
    /// look at the permutation identities.
    fn field_product(a: &[Vec<u64>], b: &[Vec<u64>], q: u64) -> Vec<Vec<u64>> {
        let n = a.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(0, |acc, k| (acc + mul_mod(a[i][k], b[k][j], q)) % q))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn identities_against_field_instantiation() {
        for p in [5u64, 7, 11] {
            let cp = PeriodContext::new(p).unwrap().primes()[0];
            let q = cp.q;
            let x0 = 12345;
            let a = build_granville(p).unwrap().eval_mod(cp.zeta, x0, q);
            let f = build_f(p).unwrap().to_matrix().eval_mod(cp.zeta, x0, q);
            let c = build_c(p).unwrap().eval_mod(cp.zeta, x0, q);
            let neg = |m: Vec<Vec<u64>>| -> Vec<Vec<u64>> {
                m.into_iter()
                    .map(|r| r.into_iter().map(|v| (q - v) % q).collect())
                    .collect()
            };
            let minus_fa = neg(field_product(&f, &a, q));
            let minus_af = neg(field_product(&a, &f, q));
            assert_ne!(minus_fa, c);
            assert_eq!(minus_af, c);
            let ct: Vec<Vec<u64>> = (0..p as usize)
                .map(|i| (0..p as usize).map(|j| c[j][i]).collect())
                .collect();
            assert_eq!(minus_fa, ct);

            let [literal, right, transposed] = verify_identities(p).unwrap();
            assert!(!literal.holds);
            assert_eq!(literal.mismatches.len(), (p * (p - 1)) as usize);
            assert!(right.holds && transposed.holds);
            assert_eq!(verify_c_eq_minus_fa(p).unwrap(), literal);
        }
    }

    #[test]
    fn eigenvectors() {
        assert!(eigen_check_mod_q(5, 0, &CrtPrime::new(101, 5).unwrap()).unwrap());
        assert!(eigen_check_mod_q(7, 3, &CrtPrime::new(197, 7).unwrap()).unwrap());
        for p in [5u64, 7, 11, 13] {
            let ctx = PeriodContext::new(p).unwrap();
            for cp in ctx.primes().iter().take(3) {
                for k in 0..p {
                    assert!(eigen_check_mod_q(p, k, cp).unwrap(), "p={p} k={k}");
                }
            }
        }
    }

    #[test]
    fn eigenvalues_are_distinct_so_the_check_discriminates() {
        let cp = CrtPrime::new(197, 7).unwrap();
        let mut rho: Vec<u64> = (0..7).map(|k| rho_k_mod_q(7, k, &cp)).collect();
        rho.sort_unstable();
        rho.dedup();
        assert_eq!(rho.len(), 7);
        // v_k for k != 0 is not fixed by the shift
        let t = build_t(7).unwrap();
        let v: Vec<u64> = (1..=7u64)
            .map(|j| pow_mod(cp.zeta, 7 * j % 49, 197))
            .collect();
        assert!((1..=7).any(|i| v[t.image(i) - 1] != v[i - 1]));
    }

    #[test]
    fn determinant_mod_q_matches_l() {
        for p in [5u64, 7, 11, 13] {
            let ctx = PeriodContext::new(p).unwrap();
            let l = ctx.l_exact();
            for cp in ctx.fresh_primes(0, 3) {
                let det = det_granville_mod_q(p, &cp).unwrap();
                let expected = l.scale(&granville_sign(p).into()).reduce_mod(cp.q);
                assert_eq!(det, expected, "p = {p}");
            }
        }
        assert_eq!(granville_sign(5), -1);
        assert_eq!(granville_sign(7), 1);
    }

    #[test]
    fn determinant_numeric() {
        let cfg = PrecisionConfig::default();
        let bits = cfg.bits();
        let at = |x: i64| FixedComplex::from_integer(&x.into(), bits);
        assert!((det_numeric(7, &at(0), &cfg).unwrap().re_f64() + 97.0).abs() < 1e-6);
        assert!((det_numeric(7, &at(1), &cfg).unwrap().re_f64() + 19.0).abs() < 1e-6);
        let l5 = crate::period::l_exact(5).unwrap();
        let expected = -l5.coeff(0);
        let d = det_numeric(5, &at(0), &cfg).unwrap();
        assert!((d.re_f64() - expected.to_string().parse::<f64>().unwrap()).abs() < 1e-6);
        assert!(d.abs_im_f64() < 1e-6);
        assert!(matches!(
            det_numeric(13, &at(0), &cfg),
            Err(Error::UnsupportedScale(_))
        ));
    }
}

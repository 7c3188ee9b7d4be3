//! Arithmetic in `F_q` and `F_q[x]` for word-sized primes `q`.
//!
//! Polynomials are `Vec<u64>` in ascending degree with trailing zeros trimmed;
//! the empty vector is zero.

use crate::arith::{inv_mod_u64, mul_mod, pow_mod};

pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn add(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0) as u128 + b.get(i).copied().unwrap_or(0) as u128;
            (x % q as u128) as u64
        })
        .collect();
    trim(out)
}

pub fn sub(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            if x >= y {
                x - y
            } else {
                q - (y - x)
            }
        })
        .collect();
    trim(out)
}

pub fn scale(a: &[u64], s: u64, q: u64) -> Vec<u64> {
    trim(a.iter().map(|&c| mul_mod(c, s, q)).collect())
}

/// Schoolbook product.
pub fn mul(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let t = mul_mod(x, y, q) + out[i + j];
            out[i + j] = if t >= q { t - q } else { t };
        }
    }
    trim(out)
}

/// `prod (x - r)` by sequential multiplication in the order given.
pub fn from_roots_sequential(roots: &[u64], q: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    for &r in roots {
        let neg = (q - r % q) % q;
        let mut next = vec![0u64; acc.len() + 1];
        for (i, &c) in acc.iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % q;
            next[i] = ((next[i] as u128 + mul_mod(c, neg, q) as u128) % q as u128) as u64;
        }
        acc = next;
    }
    trim(acc)
}

/// `prod (x - r)` by a balanced product tree.
pub fn from_roots_tree(roots: &[u64], q: u64) -> Vec<u64> {
    if roots.len() <= 8 {
        return from_roots_sequential(roots, q);
    }
    let (l, r) = roots.split_at(roots.len() / 2);
    mul(&from_roots_tree(l, q), &from_roots_tree(r, q), q)
}

pub fn eval(a: &[u64], x: u64, q: u64) -> u64 {
    a.iter().rev().fold(0u64, |acc, &c| {
        ((mul_mod(acc, x, q) as u128 + c as u128) % q as u128) as u64
    })
}

pub fn derivative(a: &[u64], q: u64) -> Vec<u64> {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| mul_mod(c, k as u64 % q, q))
            .collect(),
    )
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem(a: &[u64], b: &[u64], q: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut rem = a.to_vec();
    if rem.len() < b.len() {
        return (Vec::new(), trim(rem));
    }
    let lead_inv = inv_mod_u64(*b.last().unwrap(), q).expect("q prime");
    let mut quot = vec![0u64; rem.len() - b.len() + 1];
    for i in (0..quot.len()).rev() {
        let c = mul_mod(rem[i + b.len() - 1], lead_inv, q);
        quot[i] = c;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let t = mul_mod(c, bj, q);
            let r = &mut rem[i + j];
            *r = if *r >= t { *r - t } else { q - (t - *r) };
        }
    }
    rem.truncate(b.len() - 1);
    (trim(quot), trim(rem))
}

pub fn rem(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    divrem(a, b, q).1
}

pub fn monic(a: &[u64], q: u64) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(&l) => scale(a, inv_mod_u64(l, q).expect("q prime"), q),
    }
}

/// Monic gcd.
pub fn gcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, q);
        x = y;
        y = r;
    }
    monic(&x, q)
}

/// `base^e mod modulus`.
pub fn powmod(base: &[u64], mut e: u64, modulus: &[u64], q: u64) -> Vec<u64> {
    let mut acc = rem(&[1], modulus, q);
    let mut b = rem(base, modulus, q);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, q), modulus, q);
        }
        b = rem(&mul(&b, &b, q), modulus, q);
        e >>= 1;
    }
    acc
}

/// Finds an element of exact multiplicative order `n` in `F_q`, trying `2, 3, ...` raised to
/// `(q-1)/n`. `prime_factors` are the distinct primes dividing `n`.
pub fn element_of_order(n: u64, prime_factors: &[u64], q: u64) -> Option<u64> {
    if (q - 1) % n != 0 {
        return None;
    }
    let cof = (q - 1) / n;
    (2..q).find_map(|a| {
        let z = pow_mod(a, cof, q);
        prime_factors
            .iter()
            .all(|&r| pow_mod(z, n / r, q) != 1)
            .then_some(z)
    })
}

//! Exact computation of generalized Dedekind sums, generalized Wilf polynomials
//! `W(r,k,x)` and the period polynomials `L(p,x)` of the Gaussian periods of conductor `p^2`,
//! together with machine checks of the identities that tie them together.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: rationals, Bernoulli numbers, modular arithmetic, primality, CRT.
//! * [`dedekind`]: `s(r,h,k)`, the scaled sums `p^2 s(p-3,h,p)` and their congruences.
//! * [`numeric`]: a high-precision complex oracle for `A(r,k,n)`, `W(r,k,x)` and `L(p,x)`.
//! * [`period`]: exact `L(p,x)` via Gaussian periods in `F_q` and Chinese remaindering.
//! * [`circulant`]: the determinant form of `L(p,x)` and its circulant structure.
//! * [`wieferich`]: Wieferich pairs, splitting of `L(p,x) mod q`, valuations of `L(p,0)`.
//!
//! ```
//! use wilfpoly::period::l_exact;
//!
//! let l7 = l_exact(7).unwrap();
//! assert_eq!(l7.to_string(), "x^7 - 21x^5 - 21x^4 + 91x^3 + 112x^2 - 84x - 97");
//! ```

pub mod arith;
pub mod circulant;
pub mod dedekind;
pub mod error;
pub mod fp;
pub mod numeric;
pub mod period;
pub mod polynomial;
pub mod wieferich;

pub use error::{Error, Result};
pub use polynomial::IntPolynomial;

#[cfg(doctest)]
mod guide;

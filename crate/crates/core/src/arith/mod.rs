//! Exact integer and rational arithmetic shared by every other module.

mod bernoulli;
mod modular;
mod prime;
mod rational;

pub(crate) use bernoulli::horner;
pub use bernoulli::{
    bernoulli_number, bernoulli_numbers, bernoulli_poly_coeffs, bernoulli_poly_eval,
    precompute_bernoulli, BernoulliTable,
};
pub use modular::{
    crt_combine, inv_mod_u64, mod_inverse, mod_pow, mul_mod, pow_mod, reduce_i64, reduce_u64,
    CrtBasis, Residue,
};
pub(crate) use prime::require_prime_at_least_5;
pub use prime::{
    euler_totient, factorize, is_prime, is_prime_u64, is_prime_with, is_primitive_root_mod_p2,
    primitive_root_mod_p2, primitive_roots_mod_p2, DEFAULT_MR_ROUNDS,
};
pub use rational::{rat, rat_int, rational_mod, reduce_mod_two, sawtooth, Rational};

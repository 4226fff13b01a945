//! Exact scalars: rationals, p-adic valuations and the integer sequences the
//! rest of the crate is built on.

mod arith;
mod rational;
mod valuation;

pub use arith::{
    bernoulli, binomial, binomial_mod2, digit_sum_base2, factorial, factorial_valuation2,
    zeta_ratio,
};
pub use rational::{cmp_fractions, CommonDenominator, ExactRational};
pub use valuation::{integer_valuation, is_prime, valuation, Valuation};

pub(crate) use valuation::valuation_unchecked;

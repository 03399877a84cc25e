//! Exact scalars: rationals, cyclotomic fields, q-numbers.

mod field;
mod qnum;
mod rational;

pub use field::{cyclotomic_polynomial, field_make, CycloField, CycloScalar};
pub use qnum::{
    is_regular, is_regular_exact, q_binomial, q_binomial_by_factorials, q_factorial, q_int,
    root_order,
};
pub use rational::Rational;

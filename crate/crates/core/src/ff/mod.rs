//! Exact linear algebra over prime fields and over the field with four elements.

mod field;
mod matrix;

pub use field::{is_prime, primes, FiniteField, PrimeField, F4};
pub use matrix::{F4Matrix, Matrix, PrimeFieldMatrix, MAX_SIDE};

pub(crate) use matrix::{fill_adjoint, rank_in_place};

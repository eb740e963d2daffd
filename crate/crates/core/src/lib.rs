//! Counting workbench for the Hall algebra of zero-dimensional sheaves on a surface.
//!
//! Everything is computed exactly over finite fields or with arbitrary-precision
//! rationals:
//!
//! - [`ff`]: dense linear algebra over `F_p` and `F_4`.
//! - [`commvar`]: point counts of commuting and nilpotent commuting varieties and
//!   their count polynomials.
//! - [`series`]: truncated bivariate Laurent series, the product formula for
//!   commuting-variety counts, symmetric-algebra Hilbert series and the
//!   power-structure factorization of counts.
//! - [`hallalg`]: the counting Hall algebra of finite-length modules over `F_p[x, y]`.
//! - [`mcgroupoid`]: Maurer–Cartan groupoids of small dg-Lie algebras.

pub mod commvar;
pub mod error;
pub mod ff;
pub mod hallalg;
pub mod mcgroupoid;
pub mod numbers;
pub mod series;

pub use error::{Error, Result};

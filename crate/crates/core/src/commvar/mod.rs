//! Point counts of the commuting variety `C_n = {(A, B) : AB = BA}` and of the
//! nilpotent commuting variety `NC_n = {(A, B) in C_n : A^n = B^n = 0}` over
//! finite fields, and recovery of their count polynomials.
//!
//! Three counting routes are provided:
//!
//! - brute force over all ordered pairs,
//! - summing `q^{dim ker ad_A}` over all `A` (the kernel of `ad_A` is the
//!   centralizer of `A`),
//! - summing over similarity classes of `A`, using the centralizer order of
//!   each class; this is the only route fast enough to feed the degree-12
//!   interpolation for `n = 3`.

mod classes;
mod polynomial;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{infeasible, precondition, Result};
use crate::ff::{fill_adjoint, rank_in_place, FiniteField, Matrix, PrimeField, MAX_SIDE};
use crate::numbers::big_pow;

pub use classes::{
    centralizer_dimension, count_commuting_classes, count_nilpotent_classes, irreducible_polynomials,
    similarity_classes, SimilarityClass,
};
pub use polynomial::{interpolate_count_polynomial, lagrange_interpolate, CountPolynomial, Interpolation};

/// Enumeration budget for brute force over pairs.
pub const BRUTE_FORCE_LIMIT: u64 = 1_000_000_000;
/// Enumeration budget for single-matrix sweeps and kernel enumerations.
pub const SWEEP_LIMIT: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variety {
    /// All commuting pairs.
    Commuting,
    /// Commuting pairs of nilpotent matrices.
    NilpotentCommuting,
}

impl Variety {
    /// Dimension of the variety of `n x n` pairs.
    pub fn dimension(self, n: usize) -> usize {
        match self {
            Variety::Commuting => n * n + n,
            Variety::NilpotentCommuting => (n * n).saturating_sub(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    Brute,
    Kernel,
    Classes,
}

/// An ordered pair of commuting square matrices, i.e. a module of length `n`
/// over the polynomial ring in two variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CommPair<F: FiniteField> {
    a: Matrix<F>,
    b: Matrix<F>,
}

impl<F: FiniteField> CommPair<F> {
    pub fn new(a: Matrix<F>, b: Matrix<F>) -> Result<Self> {
        if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
            return Err(precondition("a commuting pair needs two square matrices of equal size"));
        }
        if a.field() != b.field() {
            return Err(precondition("matrices live over different fields"));
        }
        if !a.commutes_with(&b) {
            return Err(precondition("matrices do not commute"));
        }
        Ok(CommPair { a, b })
    }

    /// The empty module.
    pub fn empty(field: F) -> Self {
        CommPair {
            a: Matrix::zero(field, 0, 0),
            b: Matrix::zero(field, 0, 0),
        }
    }

    pub(crate) fn new_unchecked(a: Matrix<F>, b: Matrix<F>) -> Self {
        debug_assert!(a.commutes_with(&b));
        CommPair { a, b }
    }

    pub fn a(&self) -> &Matrix<F> {
        &self.a
    }

    pub fn b(&self) -> &Matrix<F> {
        &self.b
    }

    pub fn size(&self) -> usize {
        self.a.rows()
    }

    pub fn field(&self) -> F {
        self.a.field()
    }

    /// `(g A g^-1, g B g^-1)`.
    pub fn conjugate(&self, g: &Matrix<F>, g_inv: &Matrix<F>) -> Self {
        CommPair {
            a: g.mul(&self.a).mul(g_inv),
            b: g.mul(&self.b).mul(g_inv),
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.a.is_nilpotent() && self.b.is_nilpotent()
    }
}

impl Serialize for CommPair<PrimeField> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            modulus: u32,
            n: usize,
            a: Vec<Vec<u32>>,
            b: Vec<Vec<u32>>,
            #[serde(skip)]
            _p: std::marker::PhantomData<&'a ()>,
        }
        Repr {
            modulus: self.field().modulus(),
            n: self.size(),
            a: self.a.to_rows(),
            b: self.b.to_rows(),
            _p: std::marker::PhantomData,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CommPair<PrimeField> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Repr {
            modulus: u32,
            n: usize,
            a: Vec<Vec<u32>>,
            b: Vec<Vec<u32>>,
        }
        let r = Repr::deserialize(d)?;
        let field = PrimeField::new(r.modulus).map_err(D::Error::custom)?;
        if r.n == 0 {
            return Ok(CommPair::empty(field));
        }
        let a = Matrix::from_rows(field, &r.a).map_err(D::Error::custom)?;
        let b = Matrix::from_rows(field, &r.b).map_err(D::Error::custom)?;
        if a.rows() != r.n {
            return Err(D::Error::custom("size field disagrees with the matrices"));
        }
        CommPair::new(a, b).map_err(D::Error::custom)
    }
}

/// Order of `GL_n(F_q)`: the product of `q^n - q^i` for `i < n`.
pub fn gl_order(n: usize, q: u64) -> BigUint {
    let qn = big_pow(q, n as u32);
    (0..n).fold(BigUint::one(), |acc, i| acc * (&qn - big_pow(q, i as u32)))
}

fn checked_power(q: u64, exp: u32, limit: u64) -> Option<u64> {
    q.checked_pow(exp).filter(|&v| v <= limit)
}

fn check_side(n: usize) -> Result<()> {
    if n == 0 || n > MAX_SIDE {
        return Err(precondition(format!("matrix size must be in 1..={MAX_SIDE}, got {n}")));
    }
    Ok(())
}

/// Checks the documented size bounds of a counting route without running it.
pub fn check_feasible(variety: Variety, method: CountMethod, n: usize, q: u64) -> Result<()> {
    check_side(n)?;
    let exceeded = |what: &str, limit: u64| {
        Err(infeasible(format!(
            "{what} exceeds {limit} for q = {q}, n = {n} ({variety:?}, {method:?})"
        )))
    };
    match (variety, method) {
        (_, CountMethod::Brute) => {
            if checked_power(q, (2 * n * n) as u32, BRUTE_FORCE_LIMIT).is_none() {
                return exceeded("q^(2n^2)", BRUTE_FORCE_LIMIT);
            }
        }
        (Variety::NilpotentCommuting, CountMethod::Kernel) if n > 3 => {
            return Err(precondition(format!("nilpotent counting supports n <= 3, got {n}")));
        }
        (_, CountMethod::Kernel) => {
            // for the nilpotent variety A = 0 has the whole matrix space as centralizer,
            // so the same bound covers the inner sweep
            if checked_power(q, (n * n) as u32, SWEEP_LIMIT).is_none() {
                return exceeded("q^(n^2)", SWEEP_LIMIT);
            }
        }
        (Variety::Commuting, CountMethod::Classes) => classes::check_class_budget(q, n)?,
        (Variety::NilpotentCommuting, CountMethod::Classes) => {
            classes::check_nilpotent_class_budget(q, n)?
        }
    }
    Ok(())
}

/// Number of ordered commuting pairs by enumerating all `q^{2n^2}` pairs.
pub fn count_commuting_bruteforce<F: FiniteField>(field: F, n: usize) -> Result<BigUint> {
    let q = field.order() as u64;
    check_feasible(Variety::Commuting, CountMethod::Brute, n, q)?;
    let side = q.pow((n * n) as u32);
    let count: u64 = (0..side)
        .into_par_iter()
        .map(|i| {
            let a = Matrix::from_index(field, n, i);
            (0..side)
                .filter(|&j| a.commutes_with(&Matrix::from_index(field, n, j)))
                .count() as u64
        })
        .sum();
    Ok(BigUint::from(count))
}

/// Histogram of `dim ker ad_A` over all `A`, computed with an odometer sweep.
fn centralizer_dimension_histogram<F: FiniteField>(field: F, n: usize, total: u64) -> Vec<u64> {
    let q = field.order() as u64;
    let nn = n * n;
    // split on the last entry so chunks are independent
    let chunk = total / q;
    (0..q)
        .into_par_iter()
        .map(|top| {
            let mut hist = vec![0u64; nn + 1];
            let mut a = vec![0u32; nn];
            a[nn - 1] = top as u32;
            let mut ad = vec![0u32; nn * nn];
            for _ in 0..chunk {
                fill_adjoint(field, n, &a, &mut ad);
                let rank = rank_in_place(field, nn, nn, &mut ad);
                hist[nn - rank] += 1;
                // advance the odometer on the first nn - 1 entries
                for x in a.iter_mut().take(nn - 1) {
                    *x += 1;
                    if *x == q as u32 {
                        *x = 0;
                    } else {
                        break;
                    }
                }
            }
            hist
        })
        .reduce(
            || vec![0u64; nn + 1],
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
                x
            },
        )
}

/// Number of commuting pairs as `sum_A q^{dim ker ad_A}`.
pub fn count_commuting_kernel<F: FiniteField>(field: F, n: usize) -> Result<BigUint> {
    let q = field.order() as u64;
    check_feasible(Variety::Commuting, CountMethod::Kernel, n, q)?;
    let total = q.pow((n * n) as u32);
    let hist = centralizer_dimension_histogram(field, n, total);
    Ok(hist
        .iter()
        .enumerate()
        .fold(BigUint::zero(), |acc, (d, &c)| acc + big_pow(q, d as u32) * c))
}

/// All elements of the span of `basis`, as flat vectors.
pub(crate) fn span_elements<F: FiniteField>(field: F, basis: &[Vec<u32>], len: usize) -> SpanIter<F> {
    SpanIter {
        field,
        basis: basis.to_vec(),
        coeffs: vec![0; basis.len()],
        len,
        done: false,
    }
}

pub(crate) struct SpanIter<F: FiniteField> {
    field: F,
    basis: Vec<Vec<u32>>,
    coeffs: Vec<u32>,
    len: usize,
    done: bool,
}

impl<F: FiniteField> Iterator for SpanIter<F> {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let f = self.field;
        let mut v = vec![0u32; self.len];
        for (c, b) in self.coeffs.iter().zip(&self.basis) {
            if *c != 0 {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = f.add(*x, f.mul(*c, y));
                }
            }
        }
        self.done = true;
        for c in self.coeffs.iter_mut() {
            *c += 1;
            if *c == f.order() {
                *c = 0;
            } else {
                self.done = false;
                break;
            }
        }
        Some(v)
    }
}

/// Number of commuting pairs of nilpotent matrices: enumerate nilpotent `A`,
/// then enumerate its centralizer and keep the nilpotent members.
pub fn count_nilpotent_commuting<F: FiniteField>(field: F, n: usize) -> Result<BigUint> {
    let q = field.order() as u64;
    check_feasible(Variety::NilpotentCommuting, CountMethod::Kernel, n, q)?;
    let total = q.pow((n * n) as u32);
    let count: u64 = (0..total)
        .into_par_iter()
        .map(|i| {
            let a = Matrix::from_index(field, n, i);
            if !a.is_nilpotent() {
                return 0;
            }
            let basis = a.adjoint_operator().expect("square").kernel_basis();
            span_elements(field, &basis, n * n)
                .filter(|v| {
                    Matrix::from_entries(field, n, n, v.clone())
                        .expect("valid entries")
                        .is_nilpotent()
                })
                .count() as u64
        })
        .sum();
    Ok(BigUint::from(count))
}

/// Counts `variety` over `F_p` with the requested method.
pub fn count(variety: Variety, method: CountMethod, n: usize, p: u32) -> Result<BigUint> {
    let field = PrimeField::new(p)?;
    match (variety, method) {
        (Variety::Commuting, CountMethod::Brute) => count_commuting_bruteforce(field, n),
        (Variety::Commuting, CountMethod::Kernel) => count_commuting_kernel(field, n),
        (Variety::Commuting, CountMethod::Classes) => count_commuting_classes(field, n),
        (Variety::NilpotentCommuting, CountMethod::Brute) => count_nilpotent_bruteforce(field, n),
        (Variety::NilpotentCommuting, CountMethod::Kernel) => count_nilpotent_commuting(field, n),
        (Variety::NilpotentCommuting, CountMethod::Classes) => count_nilpotent_classes(field, n),
    }
}

/// Brute-force filter over all pairs, for the nilpotent variety.
pub fn count_nilpotent_bruteforce<F: FiniteField>(field: F, n: usize) -> Result<BigUint> {
    let q = field.order() as u64;
    check_feasible(Variety::NilpotentCommuting, CountMethod::Brute, n, q)?;
    let side = q.pow((n * n) as u32);
    let count: u64 = (0..side)
        .into_par_iter()
        .map(|i| {
            let a = Matrix::from_index(field, n, i);
            if !a.is_nilpotent() {
                return 0;
            }
            (0..side)
                .map(|j| Matrix::from_index(field, n, j))
                .filter(|b| b.is_nilpotent() && a.commutes_with(b))
                .count() as u64
        })
        .sum();
    Ok(BigUint::from(count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::F4;

    fn fp(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn gl_orders() {
        assert_eq!(gl_order(0, 2), BigUint::from(1u32));
        assert_eq!(gl_order(1, 2), BigUint::from(1u32));
        assert_eq!(gl_order(2, 2), BigUint::from(6u32));
        assert_eq!(gl_order(3, 2), BigUint::from(168u32));
        assert_eq!(gl_order(2, 3), BigUint::from(48u32));
    }

    #[test]
    fn one_by_one_counts() {
        assert_eq!(count_commuting_bruteforce(fp(2), 1).unwrap(), BigUint::from(4u32));
        assert_eq!(count_commuting_bruteforce(fp(3), 1).unwrap(), BigUint::from(9u32));
        assert_eq!(count_commuting_kernel(fp(2), 1).unwrap(), BigUint::from(4u32));
        assert_eq!(count_nilpotent_commuting(fp(2), 1).unwrap(), BigUint::from(1u32));
        assert_eq!(count_nilpotent_commuting(fp(5), 1).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn two_by_two_over_f2_frozen_from_full_enumeration() {
        // 256 ordered pairs enumerated by the brute-force route
        let brute = count_commuting_bruteforce(fp(2), 2).unwrap();
        assert_eq!(brute, BigUint::from(88u32));
        assert_eq!(count_commuting_kernel(fp(2), 2).unwrap(), brute);
        let nil = count_nilpotent_bruteforce(fp(2), 2).unwrap();
        assert_eq!(nil, BigUint::from(10u32));
        assert_eq!(count_nilpotent_commuting(fp(2), 2).unwrap(), nil);
    }

    #[test]
    fn three_by_three_over_f2_kernel_count() {
        // sum over the 512 matrices A of 2^{dim ker ad_A}
        assert_eq!(count_commuting_kernel(fp(2), 3).unwrap(), BigUint::from(7456u32));
    }

    #[test]
    fn f4_counts_agree_across_routes() {
        assert_eq!(count_nilpotent_commuting(F4, 1).unwrap(), BigUint::from(1u32));
        assert_eq!(count_commuting_kernel(F4, 1).unwrap(), BigUint::from(16u32));
        let brute = count_commuting_bruteforce(F4, 2).unwrap();
        assert_eq!(count_commuting_kernel(F4, 2).unwrap(), brute);
        assert_eq!(
            count_nilpotent_commuting(F4, 2).unwrap(),
            count_nilpotent_bruteforce(F4, 2).unwrap()
        );
    }

    #[test]
    fn oversized_requests_are_rejected() {
        assert!(matches!(
            count_commuting_bruteforce(fp(5), 3),
            Err(crate::Error::Infeasible(_))
        ));
        assert!(matches!(
            count_commuting_kernel(fp(11), 3),
            Err(crate::Error::Infeasible(_))
        ));
        assert!(matches!(
            count_commuting_kernel(fp(2), 5),
            Err(crate::Error::Precondition(_))
        ));
    }

    #[test]
    fn comm_pair_rejects_non_commuting() {
        let f = fp(2);
        let a = Matrix::from_rows(f, &[vec![0, 1], vec![0, 0]]).unwrap();
        let b = Matrix::from_rows(f, &[vec![0, 0], vec![1, 0]]).unwrap();
        assert!(CommPair::new(a.clone(), b).is_err());
        assert!(CommPair::new(a.clone(), a).is_ok());
    }
}

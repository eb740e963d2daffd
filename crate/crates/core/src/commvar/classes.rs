//! Counting over similarity classes.
//!
//! A similarity class of `n x n` matrices over `F_p` is a finitely supported
//! assignment of partitions `λ_f` to monic irreducible polynomials `f` with
//! `sum deg(f) |λ_f| = n`. Its centralizer in `GL_n(F_p)` has order
//! `prod_f Q^{sum_j (λ'_j)^2} prod_i prod_{k=1}^{m_i(λ)} (1 - Q^{-k})` with
//! `Q = p^{deg f}`, and its centralizer in the matrix algebra has dimension
//! `sum_f deg(f) sum_j (λ'_j)^2`. Both are checked at run time: the dimension
//! against the kernel of `ad_A` on an explicit representative, the orders
//! through the class equation `sum_classes |GL_n| / |Z(A)| = p^{n^2}`.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{check_side, gl_order, SWEEP_LIMIT};
use crate::error::{infeasible, Error, Result};
use crate::ff::{FiniteField, Matrix, PrimeField, PrimeFieldMatrix};
use crate::numbers::big_pow;

/// Upper bound on the number of classes enumerated for one count.
const CLASS_LIMIT: u64 = 10_000_000;

/// Monic polynomial over `F_p`, coefficients from the constant term upward.
pub type Poly = Vec<u32>;

fn poly_mul(f: PrimeField, a: &[u32], b: &[u32]) -> Poly {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

fn monic_polys(f: PrimeField, degree: usize) -> impl Iterator<Item = Poly> {
    let p = f.modulus() as u64;
    (0..p.pow(degree as u32)).map(move |mut idx| {
        let mut c = Vec::with_capacity(degree + 1);
        for _ in 0..degree {
            c.push((idx % p) as u32);
            idx /= p;
        }
        c.push(1);
        c
    })
}

/// Monic irreducible polynomials of the given degree, by sieving out products
/// of lower-degree monic polynomials.
pub fn irreducible_polynomials(f: PrimeField, degree: usize) -> Vec<Poly> {
    if degree == 0 {
        return Vec::new();
    }
    let mut reducible: HashSet<Poly> = HashSet::new();
    for low in 1..=degree / 2 {
        let lows: Vec<Poly> = monic_polys(f, low).collect();
        let highs: Vec<Poly> = monic_polys(f, degree - low).collect();
        for a in &lows {
            for b in &highs {
                reducible.insert(poly_mul(f, a, b));
            }
        }
    }
    monic_polys(f, degree).filter(|c| !reducible.contains(c)).collect()
}

/// Partitions of `k` in weakly decreasing order.
pub fn partitions(k: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max.min(k)).rev() {
            prefix.push(part);
            go(k - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

fn conjugate_partition(lambda: &[usize]) -> Vec<usize> {
    let max = lambda.first().copied().unwrap_or(0);
    (1..=max).map(|j| lambda.iter().filter(|&&l| l >= j).count()).collect()
}

fn companion(f: PrimeField, poly: &[u32]) -> PrimeFieldMatrix {
    let d = poly.len() - 1;
    let mut m = Matrix::zero(f, d, d);
    for i in 1..d {
        m.set(i, i - 1, 1);
    }
    for i in 0..d {
        m.set(i, d - 1, f.neg(poly[i]));
    }
    m
}

/// One similarity class: primary parts `(f, λ_f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityClass {
    pub parts: Vec<(Poly, Vec<usize>)>,
}

impl SimilarityClass {
    pub fn size(&self) -> usize {
        self.parts
            .iter()
            .map(|(f, l)| (f.len() - 1) * l.iter().sum::<usize>())
            .sum()
    }

    /// Block-diagonal matrix of companion matrices of `f^{λ_i}`.
    pub fn representative(&self, field: PrimeField) -> PrimeFieldMatrix {
        let n = self.size();
        let mut m = Matrix::zero(field, n, n);
        let mut offset = 0;
        for (f, lambda) in &self.parts {
            for &part in lambda {
                let power = (0..part).fold(vec![1u32], |acc, _| poly_mul(field, &acc, f));
                let c = companion(field, &power);
                for i in 0..c.rows() {
                    for j in 0..c.cols() {
                        m.set(offset + i, offset + j, c.get(i, j));
                    }
                }
                offset += c.rows();
            }
        }
        m
    }

    /// `dim` of the centralizer in the matrix algebra.
    pub fn centralizer_dimension(&self) -> usize {
        self.parts
            .iter()
            .map(|(f, l)| (f.len() - 1) * conjugate_partition(l).iter().map(|c| c * c).sum::<usize>())
            .sum()
    }

    /// Order of the centralizer in `GL_n(F_p)`.
    pub fn centralizer_order(&self, p: u64) -> BigUint {
        let mut acc = BigUint::one();
        for (f, lambda) in &self.parts {
            let e = (f.len() - 1) as u32;
            let big_q = big_pow(p, e);
            let sq: usize = conjugate_partition(lambda).iter().map(|c| c * c).sum();
            let mut shift = sq;
            for part in 1..=lambda.first().copied().unwrap_or(0) {
                let m = lambda.iter().filter(|&&l| l == part).count();
                shift -= m * (m + 1) / 2;
                for k in 1..=m {
                    acc *= num_traits::pow(big_q.clone(), k) - BigUint::one();
                }
            }
            acc *= num_traits::pow(big_q, shift);
        }
        acc
    }
}

/// All similarity classes of `n x n` matrices over `F_p`.
pub fn similarity_classes(field: PrimeField, n: usize) -> Vec<SimilarityClass> {
    let mut irreducibles: Vec<Poly> = Vec::new();
    for d in 1..=n {
        irreducibles.extend(irreducible_polynomials(field, d));
    }
    let parts: Vec<Vec<Vec<usize>>> = (0..=n).map(partitions).collect();

    fn go(
        irr: &[Poly],
        parts: &[Vec<Vec<usize>>],
        start: usize,
        remaining: usize,
        current: &mut Vec<(Poly, Vec<usize>)>,
        out: &mut Vec<SimilarityClass>,
    ) {
        if remaining == 0 {
            out.push(SimilarityClass {
                parts: current.clone(),
            });
            return;
        }
        for (i, f) in irr.iter().enumerate().skip(start) {
            let deg = f.len() - 1;
            if deg > remaining {
                // sorted by degree
                break;
            }
            for k in 1..=remaining / deg {
                for lambda in &parts[k] {
                    current.push((f.clone(), lambda.clone()));
                    go(irr, parts, i + 1, remaining - deg * k, current, out);
                    current.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(&irreducibles, &parts, 0, n, &mut Vec::new(), &mut out);
    out
}

/// Dimension of the centralizer of `a` in the matrix algebra, from the kernel of `ad_a`.
pub fn centralizer_dimension(a: &PrimeFieldMatrix) -> usize {
    let n = a.rows();
    n * n - a.adjoint_operator().expect("square").rank()
}

pub(super) fn check_class_budget(p: u64, n: usize) -> Result<()> {
    match p.checked_pow(n as u32) {
        Some(v) if v <= CLASS_LIMIT => Ok(()),
        _ => Err(infeasible(format!(
            "class enumeration needs p^n <= {CLASS_LIMIT}; p = {p}, n = {n}"
        ))),
    }
}

pub(super) fn check_nilpotent_class_budget(p: u64, n: usize) -> Result<()> {
    for lambda in partitions(n) {
        if lambda.iter().all(|&l| l == 1) {
            continue;
        }
        let dim: usize = conjugate_partition(&lambda).iter().map(|c| c * c).sum();
        match p.checked_pow(dim as u32) {
            Some(v) if v <= SWEEP_LIMIT => {}
            _ => {
                return Err(infeasible(format!(
                    "centralizer of a nilpotent of type {lambda:?} has p^{dim} elements, above {SWEEP_LIMIT}"
                )))
            }
        }
    }
    Ok(())
}

fn class_equation(classes: &[SimilarityClass], p: u64, n: usize) -> Result<()> {
    let gl = gl_order(n, p);
    let total = classes
        .iter()
        .fold(BigUint::zero(), |acc, c| acc + &gl / c.centralizer_order(p));
    if total != big_pow(p, (n * n) as u32) {
        return Err(Error::CheckFailed(format!(
            "class equation fails for n = {n}, p = {p}: {total}"
        )));
    }
    Ok(())
}

/// `|C_n(F_p)| = sum over classes |GL_n| / |Z_GL(A)| * p^{dim Z(A)}`.
pub fn count_commuting_classes(field: PrimeField, n: usize) -> Result<BigUint> {
    check_side(n)?;
    let p = field.modulus() as u64;
    check_class_budget(p, n)?;
    let classes = similarity_classes(field, n);
    class_equation(&classes, p, n)?;
    let gl = gl_order(n, p);
    let terms: Result<Vec<BigUint>> = classes
        .par_iter()
        .map(|c| {
            let dim = centralizer_dimension(&c.representative(field));
            if dim != c.centralizer_dimension() {
                return Err(Error::CheckFailed(format!(
                    "centralizer dimension {dim} of {:?} disagrees with its type",
                    c.parts
                )));
            }
            Ok(&gl / c.centralizer_order(p) * big_pow(p, dim as u32))
        })
        .collect();
    Ok(terms?.into_iter().fold(BigUint::zero(), |acc, t| acc + t))
}

fn is_nilpotent_flat(f: PrimeField, n: usize, m: &[u32]) -> bool {
    let trace = (0..n).fold(0, |acc, i| f.add(acc, m[i * n + i]));
    if trace != 0 {
        return false;
    }
    let mut power = m.to_vec();
    let mut next = vec![0u32; n * n];
    for _ in 1..n {
        for i in 0..n {
            for j in 0..n {
                let mut s = 0;
                for k in 0..n {
                    s = f.add(s, f.mul(power[i * n + k], m[k * n + j]));
                }
                next[i * n + j] = s;
            }
        }
        std::mem::swap(&mut power, &mut next);
    }
    power.iter().all(|&x| x == 0)
}

/// Number of nilpotent elements in the span of `basis` (flattened `n x n` matrices).
fn nilpotents_in_span(f: PrimeField, n: usize, basis: &[Vec<u32>]) -> u64 {
    let q = f.modulus();
    let len = n * n;
    if basis.is_empty() {
        return 1;
    }
    // split on the last coordinate, odometer over the rest
    let (last, rest) = basis.split_last().expect("nonempty");
    (0..q)
        .into_par_iter()
        .map(|c| {
            let mut v: Vec<u32> = last.iter().map(|&x| f.mul(x, c)).collect();
            let mut coeffs = vec![0u32; rest.len()];
            let mut count = 0u64;
            loop {
                if is_nilpotent_flat(f, n, &v) {
                    count += 1;
                }
                let mut advanced = false;
                for (i, b) in rest.iter().enumerate() {
                    for k in 0..len {
                        v[k] = f.add(v[k], b[k]);
                    }
                    coeffs[i] += 1;
                    if coeffs[i] == q {
                        coeffs[i] = 0;
                    } else {
                        advanced = true;
                        break;
                    }
                }
                if !advanced {
                    break;
                }
            }
            count
        })
        .sum()
}

/// `|NC_n(F_p)| = sum over nilpotent classes J_λ of |GL_n| / |Z_GL(J_λ)| * #{nilpotent B in Z(J_λ)}`.
///
/// For `λ = (1^n)` the centralizer is the whole matrix algebra and the nilpotent
/// count is the number of nilpotent matrices, itself a sum over nilpotent classes.
pub fn count_nilpotent_classes(field: PrimeField, n: usize) -> Result<BigUint> {
    check_side(n)?;
    let p = field.modulus() as u64;
    check_nilpotent_class_budget(p, n)?;
    let gl = gl_order(n, p);
    let x: Poly = vec![0, 1];
    let classes: Vec<SimilarityClass> = partitions(n)
        .into_iter()
        .map(|l| SimilarityClass {
            parts: vec![(x.clone(), l)],
        })
        .collect();
    let nilpotent_matrices = classes
        .iter()
        .fold(BigUint::zero(), |acc, c| acc + &gl / c.centralizer_order(p));
    let mut total = BigUint::zero();
    for c in &classes {
        let lambda = &c.parts[0].1;
        let orbit = &gl / c.centralizer_order(p);
        let inner = if lambda.iter().all(|&l| l == 1) {
            nilpotent_matrices.clone()
        } else {
            let dim = c.centralizer_dimension();
            let a = c.representative(field);
            let basis = a.adjoint_operator().expect("square").kernel_basis();
            if basis.len() != dim {
                return Err(Error::CheckFailed(format!(
                    "centralizer of type {lambda:?} has dimension {} not {dim}",
                    basis.len()
                )));
            }
            BigUint::from(nilpotents_in_span(field, n, &basis))
        };
        total += orbit * inner;
    }
    Ok(total)
}

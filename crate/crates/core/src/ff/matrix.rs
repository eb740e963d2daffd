use std::fmt;

use serde::{Deserialize, Serialize};

use super::field::{FiniteField, PrimeField, F4};
use crate::error::{precondition, Result};

/// Dense matrix over a finite field, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F: FiniteField> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

pub type PrimeFieldMatrix = Matrix<PrimeField>;
pub type F4Matrix = Matrix<F4>;

/// Largest matrix side accepted at the public boundary.
pub const MAX_SIDE: usize = 4;

impl<F: FiniteField> Matrix<F> {
    pub fn zero(field: F, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major entries; every entry must be a valid field element.
    pub fn from_entries(field: F, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(precondition(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|&&x| x >= field.order()) {
            return Err(precondition(format!(
                "entry {bad} is not an element of a field of order {}",
                field.order()
            )));
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: F, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(precondition("ragged rows"));
        }
        Self::from_entries(field, rows.len(), cols, rows.concat())
    }

    /// The `index`-th square matrix in base-`q` digit order (entry 0 is the least significant digit).
    pub fn from_index(field: F, n: usize, mut index: u64) -> Self {
        let q = field.order() as u64;
        let mut m = Self::zero(field, n, n);
        for x in m.data.iter_mut() {
            *x = (index % q) as u32;
            index /= q;
        }
        m
    }

    /// Inverse of [`Matrix::from_index`].
    pub fn index(&self) -> u64 {
        let q = self.field.order() as u64;
        self.data.iter().rev().fold(0u64, |acc, &x| acc * q + x as u64)
    }

    pub fn field(&self) -> F {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u32) {
        debug_assert!(x < self.field.order());
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let f = self.field;
        let mut out = Self::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &x)| f.add(acc, f.mul(a, x)))
            })
            .collect()
    }

    pub fn pow(&self, mut e: u32) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// `A^n = 0` for an `n x n` matrix.
    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.rows as u32).is_zero()
    }

    pub fn rank(&self) -> usize {
        let mut work = self.data.clone();
        rank_in_place(self.field, self.rows, self.cols, &mut work)
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(pr, r);
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for j in 0..self.cols {
                let x = f.mul(m.get(r, j), inv);
                m.set(r, j, x);
            }
            for i in 0..self.rows {
                let factor = m.get(i, c);
                if i != r && factor != 0 {
                    for j in 0..self.cols {
                        let x = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                        m.set(i, j, x);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// A basis of `{v : M v = 0}` with `cols - rank` vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u32; self.cols];
                v[fc] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(row, fc));
                }
                v
            })
            .collect()
    }

    /// Nonzero rows of the reduced row echelon form, a basis of the row space.
    pub fn row_basis(&self) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref();
        (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
    }

    pub fn determinant(&self) -> u32 {
        assert!(self.is_square());
        let f = self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1u32;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| m.get(i, c) != 0) else {
                return 0;
            };
            if pr != c {
                m.swap_rows(pr, c);
                det = f.neg(det);
            }
            let piv = m.get(c, c);
            det = f.mul(det, piv);
            let inv = f.inv(piv).expect("nonzero pivot");
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), inv);
                if factor != 0 {
                    for j in c..n {
                        let x = f.sub(m.get(i, j), f.mul(factor, m.get(c, j)));
                        m.set(i, j, x);
                    }
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zero(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Self::zero(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }

    /// Characteristic polynomial `det(x I - A)`, coefficients from the constant term upward.
    pub fn charpoly(&self) -> Vec<u32> {
        assert!(self.is_square());
        let f = self.field;
        let n = self.rows;
        // entries of x I - A as polynomials of degree <= 1
        let entries: Vec<Vec<u32>> = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let c = f.neg(self.data[k]);
                if i == j {
                    vec![c, 1]
                } else {
                    vec![c]
                }
            })
            .collect();
        let cols: Vec<usize> = (0..n).collect();
        poly_det(f, &entries, n, 0, &cols)
    }

    /// The matrix of `X -> AX - XA` acting on row-major flattenings of `n x n` matrices.
    pub fn adjoint_operator(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(precondition("adjoint operator needs a square matrix"));
        }
        let mut out = Self::zero(self.field, self.rows * self.rows, self.rows * self.rows);
        fill_adjoint(self.field, self.rows, &self.data, &mut out.data);
        Ok(out)
    }
}

fn poly_det<F: FiniteField>(
    f: F,
    entries: &[Vec<u32>],
    n: usize,
    row: usize,
    cols: &[usize],
) -> Vec<u32> {
    if cols.is_empty() {
        return vec![1];
    }
    let mut acc: Vec<u32> = vec![0];
    for (pos, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = poly_det(f, entries, n, row + 1, &rest);
        let mut term = poly_mul(f, &entries[row * n + c], &minor);
        if pos % 2 == 1 {
            term.iter_mut().for_each(|x| *x = f.neg(*x));
        }
        acc = poly_add(f, &acc, &term);
    }
    while acc.len() > 1 && *acc.last().unwrap() == 0 {
        acc.pop();
    }
    acc
}

fn poly_mul<F: FiniteField>(f: F, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

fn poly_add<F: FiniteField>(f: F, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, x) in out.iter_mut().enumerate() {
        *x = f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0));
    }
    out
}

/// Writes the `n^2 x n^2` commutator operator of the `n x n` matrix `a` into `out`.
pub(crate) fn fill_adjoint<F: FiniteField>(f: F, n: usize, a: &[u32], out: &mut [u32]) {
    let nn = n * n;
    out.iter_mut().for_each(|x| *x = 0);
    for i in 0..n {
        for j in 0..n {
            let row = (i * n + j) * nn;
            // (AX)_{ij} = sum_k A_{ik} X_{kj}
            for k in 0..n {
                let idx = row + k * n + j;
                out[idx] = f.add(out[idx], a[i * n + k]);
            }
            // (XA)_{ij} = sum_k X_{ik} A_{kj}
            for k in 0..n {
                let idx = row + i * n + k;
                out[idx] = f.sub(out[idx], a[k * n + j]);
            }
        }
    }
}

/// Rank by Gaussian elimination, destroying `work`.
pub(crate) fn rank_in_place<F: FiniteField>(f: F, rows: usize, cols: usize, work: &mut [u32]) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| work[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in c..cols {
                work.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(work[r * cols + c]).expect("nonzero pivot");
        for i in r + 1..rows {
            let x = work[i * cols + c];
            if x == 0 {
                continue;
            }
            let factor = f.mul(x, inv);
            for j in c..cols {
                let v = f.mul(factor, work[r * cols + j]);
                work[i * cols + j] = f.sub(work[i * cols + j], v);
            }
        }
        r += 1;
    }
    r
}

impl<F: FiniteField> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

/// Serialized form: modulus plus rows. Only prime-field matrices are serialized.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    modulus: u32,
    rows: Vec<Vec<u32>>,
}

impl Serialize for Matrix<PrimeField> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            modulus: self.field.modulus(),
            rows: self.to_rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix<PrimeField> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MatrixRepr::deserialize(d)?;
        let field = PrimeField::new(repr.modulus).map_err(D::Error::custom)?;
        Matrix::from_rows(field, &repr.rows).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn mat(p: u32, rows: &[&[u32]]) -> PrimeFieldMatrix {
        let rows: Vec<Vec<u32>> = rows.iter().map(|r| r.to_vec()).collect();
        Matrix::from_rows(fp(p), &rows).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::zero(fp(2), 3, 3).rank(), 0);
        assert_eq!(Matrix::identity(fp(5), 3).rank(), 3);
        assert_eq!(mat(2, &[&[1, 1], &[1, 1]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(fp(3), 2).kernel_basis().is_empty());
        assert_eq!(Matrix::zero(fp(2), 1, 2).kernel_basis().len(), 2);
        let k = mat(2, &[&[1, 1], &[1, 1]]).kernel_basis();
        assert_eq!(k, vec![vec![1, 1]]);
    }

    #[test]
    fn rejects_out_of_range_entries() {
        assert!(Matrix::from_entries(fp(3), 1, 2, vec![0, 3]).is_err());
        assert!(Matrix::from_entries(fp(3), 1, 2, vec![0]).is_err());
    }

    #[test]
    fn adjoint_of_central_matrices_vanishes() {
        for n in 1..=3 {
            let id = Matrix::identity(fp(3), n).adjoint_operator().unwrap();
            assert!(id.is_zero());
            let z = Matrix::zero(fp(3), n, n).adjoint_operator().unwrap();
            assert!(z.is_zero());
        }
    }

    #[test]
    fn adjoint_of_diag01_over_f3_has_two_dim_kernel() {
        let a = mat(3, &[&[0, 0], &[0, 1]]);
        // oracle: enumerate all 81 matrices X and count those commuting with A
        let f = fp(3);
        let commuting = (0..81u64)
            .filter(|&i| Matrix::from_index(f, 2, i).commutes_with(&a))
            .count();
        assert_eq!(commuting, 9);
        let ad = a.adjoint_operator().unwrap();
        assert_eq!(ad.kernel_basis().len(), 2);
        assert_eq!(3usize.pow(ad.kernel_basis().len() as u32), commuting);
    }

    #[test]
    fn adjoint_matches_commutator() {
        let f = fp(5);
        let a = Matrix::from_index(f, 3, 123_456);
        let x = Matrix::from_index(f, 3, 987_654);
        let ad = a.adjoint_operator().unwrap();
        let lhs = ad.apply(x.entries());
        let rhs = a.mul(&x).sub(&x.mul(&a));
        assert_eq!(lhs, rhs.entries());
    }

    #[test]
    fn charpoly_of_companion() {
        // companion of x^2 + 2x + 3 over F_5
        let c = mat(5, &[&[0, 2], &[1, 3]]);
        assert_eq!(c.charpoly(), vec![3, 2, 1]);
        assert_eq!(Matrix::identity(fp(2), 3).charpoly(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn inverse_and_determinant() {
        let f = fp(7);
        let m = mat(7, &[&[1, 2, 0], &[3, 1, 4], &[0, 5, 6]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(f, 3));
        assert_ne!(m.determinant(), 0);
        let singular = mat(7, &[&[1, 2], &[2, 4]]);
        assert_eq!(singular.determinant(), 0);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn index_round_trip() {
        let f = fp(3);
        for i in [0u64, 1, 17, 19_682] {
            assert_eq!(Matrix::from_index(f, 3, i).index(), i);
        }
    }

    #[test]
    fn f4_matrices() {
        let f = F4;
        let m = Matrix::from_rows(f, &[vec![2, 1], vec![1, 0]]).unwrap();
        assert_eq!(m.rank(), 2);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(f, 2));
    }
}

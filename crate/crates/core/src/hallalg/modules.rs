//! Submodules, isomorphism tests and invariants of modules given by commuting pairs.

use serde::{Deserialize, Serialize};

use crate::commvar::{span_elements, CommPair};
use crate::error::{precondition, Result};
use crate::ff::{FiniteField, Matrix, PrimeField, PrimeFieldMatrix};

pub type Module = CommPair<PrimeField>;

/// Cheap simultaneous-conjugacy invariants used to prune isomorphism searches.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub n: usize,
    pub charpoly_a: Vec<u32>,
    pub charpoly_b: Vec<u32>,
    pub charpoly_sum: Vec<u32>,
    pub charpoly_product: Vec<u32>,
    /// `dim {v : m v = 0 for every monomial m of degree j}` for `j = 1..=n`.
    pub joint_kernel_dims: Vec<usize>,
}

fn charpoly(m: &PrimeFieldMatrix) -> Vec<u32> {
    if m.rows() == 0 {
        vec![1]
    } else {
        m.charpoly()
    }
}

pub fn fingerprint(m: &Module) -> Fingerprint {
    let n = m.size();
    let f = m.field();
    let (a, b) = (m.a(), m.b());
    let mut joint_kernel_dims = Vec::with_capacity(n);
    // monomials of degree j, starting from the identity in degree 0
    let mut monomials = vec![Matrix::identity(f, n)];
    for _ in 1..=n {
        let mut next: Vec<PrimeFieldMatrix> = Vec::new();
        for x in &monomials {
            for y in [a.mul(x), b.mul(x)] {
                if !next.contains(&y) {
                    next.push(y);
                }
            }
        }
        monomials = next;
        let stacked: Vec<u32> = monomials.iter().flat_map(|x| x.entries().to_vec()).collect();
        let rank = Matrix::from_entries(f, n * monomials.len(), n, stacked)
            .expect("stacked monomials")
            .rank();
        joint_kernel_dims.push(n - rank);
    }
    Fingerprint {
        n,
        charpoly_a: charpoly(a),
        charpoly_b: charpoly(b),
        charpoly_sum: charpoly(&a.add(b)),
        charpoly_product: charpoly(&a.mul(b)),
        joint_kernel_dims,
    }
}

/// A basis of the space of `g` with `g A1 = A2 g` and `g B1 = B2 g`, as row-major flattenings.
pub(crate) fn intertwiners(m: &Module, other: &Module) -> Vec<Vec<u32>> {
    let n = m.size();
    let f = m.field();
    let nn = n * n;
    let mut system = Matrix::zero(f, 2 * nn, nn);
    for k in 0..nn {
        let mut e = Matrix::zero(f, n, n);
        e.set(k / n, k % n, 1);
        let da = e.mul(m.a()).sub(&other.a().mul(&e));
        let db = e.mul(m.b()).sub(&other.b().mul(&e));
        for (r, &x) in da.entries().iter().chain(db.entries()).enumerate() {
            system.set(r, k, x);
        }
    }
    system.kernel_basis()
}

/// Whether the two pairs are simultaneously conjugate.
pub fn is_isomorphic(m: &Module, other: &Module) -> Result<bool> {
    if m.size() != other.size() {
        return Err(precondition(format!(
            "cannot compare modules of lengths {} and {}",
            m.size(),
            other.size()
        )));
    }
    if m.field() != other.field() {
        return Err(precondition("modules over different fields"));
    }
    if m.size() == 0 {
        return Ok(true);
    }
    if fingerprint(m) != fingerprint(other) {
        return Ok(false);
    }
    let n = m.size();
    let f = m.field();
    let basis = intertwiners(m, other);
    Ok(span_elements(f, &basis, n * n)
        .any(|g| Matrix::from_entries(f, n, n, g).expect("square").is_invertible()))
}

/// Number of automorphisms: invertible intertwiners of the module with itself.
pub fn automorphism_count(m: &Module) -> u64 {
    let n = m.size();
    if n == 0 {
        return 1;
    }
    let f = m.field();
    span_elements(f, &intertwiners(m, m), n * n)
        .filter(|g| Matrix::from_entries(f, n, n, g.clone()).expect("square").is_invertible())
        .count() as u64
}

/// An invariant subspace with the induced sub and quotient structures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Submodule {
    /// Reduced row echelon basis.
    pub basis: Vec<Vec<u32>>,
    pub sub: Module,
    pub quotient: Module,
}

/// All subspaces of `F^n`, as reduced row echelon bases with their pivot columns.
fn subspaces(f: PrimeField, n: usize) -> Vec<(Vec<Vec<u32>>, Vec<usize>)> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let pivots: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        // free slots: entries to the right of each pivot in non-pivot columns
        let slots: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| {
                let pivots = &pivots;
                ((pc + 1)..n)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let q = f.order() as u64;
        for code in 0..q.pow(slots.len() as u32) {
            let mut rows = vec![vec![0u32; n]; pivots.len()];
            for (r, &pc) in pivots.iter().enumerate() {
                rows[r][pc] = 1;
            }
            let mut c = code;
            for &(r, col) in &slots {
                rows[r][col] = (c % q) as u32;
                c /= q;
            }
            out.push((rows, pivots.clone()));
        }
    }
    out
}

fn reduce(f: PrimeField, v: &mut [u32], basis: &[Vec<u32>], pivots: &[usize]) {
    for (row, &pc) in basis.iter().zip(pivots) {
        let c = v[pc];
        if c != 0 {
            for (x, &y) in v.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
    }
}

fn induced(
    f: PrimeField,
    m: &PrimeFieldMatrix,
    basis: &[Vec<u32>],
    pivots: &[usize],
) -> Option<(PrimeFieldMatrix, PrimeFieldMatrix)> {
    let n = m.rows();
    let k = basis.len();
    let mut sub = Matrix::zero(f, k, k);
    for (j, u) in basis.iter().enumerate() {
        let mut image = m.apply(u);
        for (i, &pc) in pivots.iter().enumerate() {
            sub.set(i, j, image[pc]);
        }
        reduce(f, &mut image, basis, pivots);
        if image.iter().any(|&x| x != 0) {
            return None;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut quotient = Matrix::zero(f, free.len(), free.len());
    for (s, &cs) in free.iter().enumerate() {
        let mut e = vec![0u32; n];
        e[cs] = 1;
        let mut image = m.apply(&e);
        reduce(f, &mut image, basis, pivots);
        for (r, &cr) in free.iter().enumerate() {
            quotient.set(r, s, image[cr]);
        }
    }
    Some((sub, quotient))
}

/// Every subspace invariant under both matrices, with induced sub and quotient pairs.
pub fn submodules(m: &Module) -> Vec<Submodule> {
    let f = m.field();
    let n = m.size();
    let mut out = Vec::new();
    for (basis, pivots) in subspaces(f, n) {
        let Some((sa, qa)) = induced(f, m.a(), &basis, &pivots) else {
            continue;
        };
        let Some((sb, qb)) = induced(f, m.b(), &basis, &pivots) else {
            continue;
        };
        out.push(Submodule {
            basis,
            sub: pair(f, sa, sb),
            quotient: pair(f, qa, qb),
        });
    }
    out
}

fn pair(f: PrimeField, a: PrimeFieldMatrix, b: PrimeFieldMatrix) -> Module {
    if a.rows() == 0 {
        CommPair::empty(f)
    } else {
        CommPair::new_unchecked(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn module(p: u32, a: &[Vec<u32>], b: &[Vec<u32>]) -> Module {
        let f = PrimeField::new(p).unwrap();
        CommPair::new(Matrix::from_rows(f, a).unwrap(), Matrix::from_rows(f, b).unwrap()).unwrap()
    }

    fn zero2() -> Vec<Vec<u32>> {
        vec![vec![0, 0], vec![0, 0]]
    }

    fn jordan2() -> Vec<Vec<u32>> {
        vec![vec![0, 1], vec![0, 0]]
    }

    #[test]
    fn subspace_counts() {
        let f = PrimeField::new(2).unwrap();
        assert_eq!(subspaces(f, 2).len(), 5);
        assert_eq!(subspaces(f, 3).len(), 16);
        assert_eq!(subspaces(PrimeField::new(3).unwrap(), 3).len(), 28);
    }

    #[test]
    fn submodule_examples() {
        assert_eq!(submodules(&module(2, &zero2(), &zero2())).len(), 5);
        let j = submodules(&module(2, &jordan2(), &zero2()));
        assert_eq!(j.len(), 3);
        assert!(j.iter().any(|s| s.basis == vec![vec![1, 0]]));
        let d = module(2, &[vec![0, 0], vec![0, 1]], &zero2());
        assert_eq!(submodules(&d).len(), 4);
    }

    #[test]
    fn quotient_of_jordan_block() {
        let m = module(3, &jordan2(), &zero2());
        let line = submodules(&m)
            .into_iter()
            .find(|s| s.basis.len() == 1)
            .unwrap();
        assert!(line.sub.a().is_zero());
        assert!(line.quotient.a().is_zero());
    }

    #[test]
    fn swapped_jordan_pairs_are_not_isomorphic() {
        let x = module(2, &jordan2(), &zero2());
        let y = module(2, &zero2(), &jordan2());
        assert_eq!(fingerprint(&x), fingerprint(&y));
        assert!(!is_isomorphic(&x, &y).unwrap());
        assert!(is_isomorphic(&x, &x).unwrap());
        let z = module(2, &zero2(), &zero2());
        assert!(!is_isomorphic(&x, &z).unwrap());
        let small = module(2, &[vec![1]], &[vec![0]]);
        assert!(is_isomorphic(&x, &small).is_err());
    }

    #[test]
    fn automorphisms_of_small_modules() {
        assert_eq!(automorphism_count(&module(2, &zero2(), &zero2())), 6);
        assert_eq!(automorphism_count(&module(2, &jordan2(), &zero2())), 2);
        assert_eq!(automorphism_count(&module(3, &[vec![2]], &[vec![1]])), 2);
    }
}

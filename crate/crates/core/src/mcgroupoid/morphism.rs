//! Morphisms of dg-Lie algebras and the quasi-isomorphism comparison of groupoids.

use serde::{Deserialize, Serialize};

use super::{encode, rank, DgLie3, GroupoidCard, Vector};
use crate::error::{precondition, Result};
use crate::ff::FiniteField;

/// A degreewise linear map; `maps[k]` has `dims_target[k]` rows and `dims_source[k]` columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DgLieMorphism {
    pub maps: [Vec<Vec<u32>>; 3],
}

impl DgLieMorphism {
    pub fn identity(g: &DgLie3) -> Self {
        let id = |n: usize| (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect();
        let [a, b, c] = g.dims();
        DgLieMorphism {
            maps: [id(a), id(b), id(c)],
        }
    }

    pub fn zero(source: &DgLie3, target: &DgLie3) -> Self {
        let z = |k: usize| vec![vec![0; source.dims()[k]]; target.dims()[k]];
        DgLieMorphism {
            maps: [z(0), z(1), z(2)],
        }
    }

    pub fn apply(&self, source: &DgLie3, degree: usize, v: &[u32]) -> Vector {
        let f = source.field();
        self.maps[degree]
            .iter()
            .map(|row| row.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect()
    }

    fn check_shape(&self, source: &DgLie3, target: &DgLie3) -> Result<()> {
        if source.modulus() != target.modulus() {
            return Err(precondition("source and target live over different fields"));
        }
        for k in 0..3 {
            let m = &self.maps[k];
            let (rows, cols) = (target.dims()[k], source.dims()[k]);
            if m.len() != rows || m.iter().any(|r| r.len() != cols) {
                return Err(precondition(format!("the degree {k} map must be {rows} x {cols}")));
            }
            if m.iter().flatten().any(|&x| x >= source.modulus()) {
                return Err(precondition(format!("the degree {k} map has entries outside the field")));
            }
        }
        Ok(())
    }

    /// Whether the map commutes with differentials and brackets on basis elements.
    pub fn check_morphism(&self, source: &DgLie3, target: &DgLie3) -> Result<()> {
        self.check_shape(source, target)?;
        let dims = source.dims();
        for k in 0..2 {
            for i in 0..dims[k] {
                let e = source.basis(k, i);
                let lhs = self.apply(source, k + 1, &source.differential(k, &e).expect("k < 2"));
                let rhs = target.differential(k, &self.apply(source, k, &e)).expect("k < 2");
                if lhs != rhs {
                    return Err(precondition(format!(
                        "the map does not commute with d on basis vector {i} of degree {k}"
                    )));
                }
            }
        }
        for a in 0..3 {
            for b in 0..(3 - a) {
                for i in 0..dims[a] {
                    for j in 0..dims[b] {
                        let (x, y) = (source.basis(a, i), source.basis(b, j));
                        let lhs = self.apply(source, a + b, &source.bracket(a, &x, b, &y).expect("a + b <= 2"));
                        let rhs = target
                            .bracket(a, &self.apply(source, a, &x), b, &self.apply(source, b, &y))
                            .expect("a + b <= 2");
                        if lhs != rhs {
                            return Err(precondition(format!(
                                "the map does not preserve the bracket of basis vectors ({i}, {j}) in degrees ({a}, {b})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether the induced map on each cohomology group is an isomorphism.
    pub fn check_quasi_iso(&self, source: &DgLie3, target: &DgLie3) -> Result<()> {
        let f = source.field();
        let (hs, ht) = (source.cohomology_dims(), target.cohomology_dims());
        for k in 0..3 {
            if hs[k] != ht[k] {
                return Err(precondition(format!(
                    "H^{k} has dimension {} on the source and {} on the target",
                    hs[k], ht[k]
                )));
            }
            let cycles = cycles(source, k);
            let boundaries = boundaries(target, k);
            let mut image: Vec<Vector> = cycles.iter().map(|z| self.apply(source, k, z)).collect();
            image.extend(boundaries.iter().cloned());
            let induced = rank(f, &image) - rank(f, &boundaries);
            if induced != ht[k] {
                return Err(precondition(format!(
                    "the induced map on H^{k} has rank {induced}, not {}",
                    ht[k]
                )));
            }
        }
        Ok(())
    }
}

/// A basis of the cycles in degree `k`.
fn cycles(g: &DgLie3, k: usize) -> Vec<Vector> {
    let dims = g.dims();
    if k == 2 || dims[k] == 0 {
        return (0..dims[k]).map(|i| g.basis(k, i)).collect();
    }
    let f = g.field();
    let rows = dims[k + 1];
    if rows == 0 {
        return (0..dims[k]).map(|i| g.basis(k, i)).collect();
    }
    let images: Vec<Vector> = (0..dims[k])
        .map(|i| g.differential(k, &g.basis(k, i)).expect("k < 2"))
        .collect();
    let entries: Vec<u32> = (0..rows).flat_map(|r| images.iter().map(move |v| v[r])).collect();
    crate::ff::Matrix::from_entries(f, rows, dims[k], entries)
        .expect("rectangular")
        .kernel_basis()
}

/// A spanning set of the boundaries in degree `k`.
fn boundaries(g: &DgLie3, k: usize) -> Vec<Vector> {
    if k == 0 {
        return Vec::new();
    }
    (0..g.dims()[k - 1])
        .map(|i| g.differential(k - 1, &g.basis(k - 1, i)).expect("k - 1 < 2"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiIsoReport {
    pub lhs: GroupoidCard,
    pub rhs: GroupoidCard,
    pub orbit_counts_match: bool,
    pub stabilizers_match: bool,
    pub maps_mc_into_mc: bool,
    pub orbit_bijection: bool,
}

impl QuasiIsoReport {
    pub fn holds(&self) -> bool {
        self.orbit_counts_match && self.stabilizers_match && self.maps_mc_into_mc && self.orbit_bijection
    }
}

/// Compares the Maurer–Cartan groupoids across a quasi-isomorphism `phi`.
///
/// A map that is not a morphism or not a quasi-isomorphism is a precondition
/// error; a mismatch of the groupoids is reported in the result.
pub fn quasi_iso_compare(source: &DgLie3, target: &DgLie3, phi: &DgLieMorphism) -> Result<QuasiIsoReport> {
    source.validate()?;
    target.validate()?;
    phi.check_morphism(source, target)?;
    phi.check_quasi_iso(source, target)?;
    let (gs, gt) = (source.groupoid()?, target.groupoid()?);
    let p = source.modulus();
    let mut maps_mc_into_mc = true;
    let mut orbit_image: Vec<Option<usize>> = vec![None; gs.representatives.len()];
    let mut well_defined = true;
    let target_index: std::collections::HashMap<u64, usize> =
        gt.mc.iter().enumerate().map(|(i, x)| (encode(p, x), gt.orbit_of[i])).collect();
    for (x, &orbit) in gs.mc.iter().zip(&gs.orbit_of) {
        match target_index.get(&encode(p, &phi.apply(source, 1, x))) {
            None => maps_mc_into_mc = false,
            Some(&o) => match orbit_image[orbit] {
                None => orbit_image[orbit] = Some(o),
                Some(prev) => well_defined &= prev == o,
            },
        }
    }
    let mut hit = vec![false; gt.representatives.len()];
    let mut injective = true;
    for o in orbit_image.iter().flatten() {
        injective &= !hit[*o];
        hit[*o] = true;
    }
    let orbit_bijection = maps_mc_into_mc && well_defined && injective && hit.iter().all(|&h| h);
    Ok(QuasiIsoReport {
        orbit_counts_match: gs.card.orbit_count == gt.card.orbit_count,
        stabilizers_match: gs.card.stabilizer_orders == gt.card.stabilizer_orders,
        maps_mc_into_mc,
        orbit_bijection,
        lhs: gs.card,
        rhs: gt.card,
    })
}

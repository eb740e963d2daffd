//! Maurer–Cartan groupoids of finite-dimensional nilpotent dg-Lie algebras in
//! degrees `[0, 2]` over `F_p`, counted exactly.
//!
//! The gauge action is `e^y * x = e^{ad y}(x) + ((1 - e^{ad y}) / ad y)(d y)`,
//! so in the abelian case `y` translates `x` by `-d y`.

mod catalog;
mod fibration;
mod morphism;

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{infeasible, precondition, Result};
use crate::ff::{FiniteField, Matrix, PrimeField};
use crate::numbers::rational;
use crate::Error;

pub use catalog::{catalog, Catalog, CatalogEntry, FibrationEntry, QuasiIsoEntry, QuasiIsoExpectation};
pub use fibration::{fibration_count, FibrationReport, SemidirectProduct, SignOutcome, TwistSign, TWIST_SIGN};
pub use morphism::{quasi_iso_compare, DgLieMorphism, QuasiIsoReport};

/// Largest `p^dim` enumerated for `g^0` or `g^1`.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

/// A homogeneous element: its degree and coordinates in the basis of `g^degree`.
pub type Vector = Vec<u32>;

/// One nonzero bracket of basis elements, `[e_left, e_right] = value`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub degrees: [usize; 2],
    pub left: usize,
    pub right: usize,
    pub value: Vector,
}

/// Bracket orders stored explicitly; the others follow from graded antisymmetry.
const STORED: [[usize; 2]; 4] = [[0, 0], [0, 1], [0, 2], [1, 1]];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DgLieRepr", into = "DgLieRepr")]
pub struct DgLie3 {
    field: PrimeField,
    dims: [usize; 3],
    /// `d0[i]` is the image of the `i`-th basis vector of `g^0`, likewise `d1`.
    d0: Vec<Vector>,
    d1: Vec<Vector>,
    /// `tensors[k][i][j]` for the `k`-th stored degree pair.
    tensors: [Vec<Vec<Vector>>; 4],
}

#[derive(Serialize, Deserialize)]
struct DgLieRepr {
    modulus: u32,
    dims: [usize; 3],
    /// Matrix of `d^0 : g^0 -> g^1`, `dims[1]` rows.
    d0: Vec<Vec<u32>>,
    d1: Vec<Vec<u32>>,
    brackets: Vec<BracketEntry>,
}

impl TryFrom<DgLieRepr> for DgLie3 {
    type Error = Error;

    fn try_from(r: DgLieRepr) -> Result<Self> {
        DgLie3::new(r.modulus, r.dims, &r.d0, &r.d1, &r.brackets)
    }
}

impl From<DgLie3> for DgLieRepr {
    fn from(g: DgLie3) -> Self {
        let to_matrix = |images: &[Vector], rows: usize| -> Vec<Vec<u32>> {
            (0..rows).map(|r| images.iter().map(|v| v[r]).collect()).collect()
        };
        let brackets = g.bracket_entries();
        DgLieRepr {
            modulus: g.field.modulus(),
            dims: g.dims,
            d0: to_matrix(&g.d0, g.dims[1]),
            d1: to_matrix(&g.d1, g.dims[2]),
            brackets,
        }
    }
}

/// Which axiom a candidate dg-Lie algebra violates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "kebab-case")]
pub enum AxiomViolation {
    DSquared { basis: usize },
    Antisymmetry { degrees: [usize; 2], left: usize, right: usize },
    Jacobi { degrees: [usize; 3], basis: [usize; 3] },
    Leibniz { degrees: [usize; 2], basis: [usize; 2] },
    NotNilpotent,
    ClassTooLarge { class: usize },
    CharacteristicTooSmall { class: usize, modulus: u32 },
}

impl std::fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AxiomViolation::DSquared { basis } => write!(f, "d² ≠ 0 on basis vector {basis} of g^0"),
            AxiomViolation::Antisymmetry { degrees, left, right } => write!(
                f,
                "graded antisymmetry fails for degrees {degrees:?}, basis ({left}, {right})"
            ),
            AxiomViolation::Jacobi { degrees, basis } => {
                write!(f, "Jacobi identity fails for degrees {degrees:?}, basis {basis:?}")
            }
            AxiomViolation::Leibniz { degrees, basis } => {
                write!(f, "Leibniz rule fails for degrees {degrees:?}, basis {basis:?}")
            }
            AxiomViolation::NotNilpotent => write!(f, "ad(g^0) is not nilpotent"),
            AxiomViolation::ClassTooLarge { class } => write!(
                f,
                "g^0 has nilpotency class {class}; the Campbell–Hausdorff truncation covers class 4"
            ),
            AxiomViolation::CharacteristicTooSmall { class, modulus } => {
                write!(f, "p = {modulus} must exceed class + 1 = {}", class + 1)
            }
        }
    }
}

fn sign(f: PrimeField, negative: bool, v: Vector) -> Vector {
    if negative {
        v.into_iter().map(|x| f.neg(x)).collect()
    } else {
        v
    }
}

impl DgLie3 {
    /// Builds the algebra from differential matrices and sparse brackets, without
    /// checking the axioms (see [`DgLie3::validate`]).
    pub fn new(
        modulus: u32,
        dims: [usize; 3],
        d0: &[Vec<u32>],
        d1: &[Vec<u32>],
        brackets: &[BracketEntry],
    ) -> Result<Self> {
        let field = PrimeField::new(modulus)?;
        if modulus == 2 {
            return Err(precondition("the Maurer–Cartan equation needs 1/2; p must be odd"));
        }
        let images = |m: &[Vec<u32>], rows: usize, cols: usize, name: &str| -> Result<Vec<Vector>> {
            // a map out of the zero space may be given without rows
            if !(cols == 0 && m.is_empty()) && (m.len() != rows || m.iter().any(|r| r.len() != cols)) {
                return Err(precondition(format!("{name} must be a {rows} x {cols} matrix")));
            }
            if m.iter().flatten().any(|&x| x >= modulus) {
                return Err(precondition(format!("{name} has entries outside 0..{modulus}")));
            }
            Ok((0..cols).map(|c| m.iter().map(|r| r[c]).collect()).collect())
        };
        let d0 = images(d0, dims[1], dims[0], "d0")?;
        let d1 = images(d1, dims[2], dims[1], "d1")?;
        let mut tensors: [Vec<Vec<Vector>>; 4] = Default::default();
        for (k, [a, b]) in STORED.iter().enumerate() {
            tensors[k] = vec![vec![vec![0; dims[a + b]]; dims[*b]]; dims[*a]];
        }
        for e in brackets {
            let k = STORED.iter().position(|d| *d == e.degrees).ok_or_else(|| {
                precondition(format!(
                    "brackets are given for degree pairs {STORED:?}, not {:?}",
                    e.degrees
                ))
            })?;
            let [a, b] = e.degrees;
            if e.left >= dims[a] || e.right >= dims[b] || e.value.len() != dims[a + b] {
                return Err(precondition(format!("bracket entry {e:?} does not fit dims {dims:?}")));
            }
            if e.value.iter().any(|&x| x >= modulus) {
                return Err(precondition(format!("bracket entry {e:?} has entries outside 0..{modulus}")));
            }
            tensors[k][e.left][e.right] = e.value.clone();
        }
        Ok(DgLie3 {
            field,
            dims,
            d0,
            d1,
            tensors,
        })
    }

    /// The abelian algebra (a three-term complex) with the given differentials.
    pub fn abelian(modulus: u32, dims: [usize; 3], d0: &[Vec<u32>], d1: &[Vec<u32>]) -> Result<Self> {
        DgLie3::new(modulus, dims, d0, d1, &[])
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn modulus(&self) -> u32 {
        self.field.modulus()
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn zero(&self, degree: usize) -> Vector {
        vec![0; self.dims[degree]]
    }

    pub fn basis(&self, degree: usize, i: usize) -> Vector {
        let mut v = self.zero(degree);
        v[i] = 1;
        v
    }

    /// Nonzero brackets of basis elements in the stored degree orders.
    pub fn bracket_entries(&self) -> Vec<BracketEntry> {
        let mut out = Vec::new();
        for (k, degrees) in STORED.iter().enumerate() {
            for (i, row) in self.tensors[k].iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    if v.iter().any(|&x| x != 0) {
                        out.push(BracketEntry {
                            degrees: *degrees,
                            left: i,
                            right: j,
                            value: v.clone(),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.tensors.iter().flatten().flatten().flatten().all(|&x| x == 0)
    }

    /// `d` on a homogeneous element; `None` above degree 1.
    pub fn differential(&self, degree: usize, v: &[u32]) -> Option<Vector> {
        let images = match degree {
            0 => &self.d0,
            1 => &self.d1,
            _ => return None,
        };
        Some(combine(self.field, self.dims[degree + 1], v, images))
    }

    /// `[x, y]` for homogeneous `x`, `y`; `None` when the degree exceeds 2.
    pub fn bracket(&self, a: usize, x: &[u32], b: usize, y: &[u32]) -> Option<Vector> {
        if a + b > 2 {
            return None;
        }
        let f = self.field;
        if let Some(k) = STORED.iter().position(|d| *d == [a, b]) {
            return Some(bilinear(f, self.dims[a + b], x, y, &self.tensors[k]));
        }
        // [x, y] = -(-1)^{ab} [y, x]
        let swapped = self.bracket(b, y, a, x)?;
        Some(sign(f, (a * b) % 2 == 0, swapped))
    }

    fn add(&self, x: &[u32], y: &[u32]) -> Vector {
        x.iter().zip(y).map(|(&a, &b)| self.field.add(a, b)).collect()
    }

    fn scale(&self, c: u32, x: &[u32]) -> Vector {
        x.iter().map(|&a| self.field.mul(c, a)).collect()
    }

    fn inv(&self, k: u64) -> u32 {
        let f = self.field;
        f.inv(f.from_int(k as i64)).expect("invertible scalar")
    }

    /// Lower central series of `ad(g^0)` acting on all of `g`: the least `c` with
    /// `ad(y_1) ... ad(y_c) = 0`, and the class of `g^0` itself.
    fn classes(&self) -> std::result::Result<(usize, usize), AxiomViolation> {
        let f = self.field;
        let basis0: Vec<Vector> = (0..self.dims[0]).map(|i| self.basis(0, i)).collect();
        let step = |layer: &[Vec<Vector>; 3], only0: bool| -> [Vec<Vector>; 3] {
            let mut next: [Vec<Vector>; 3] = Default::default();
            for (deg, vs) in layer.iter().enumerate() {
                if only0 && deg > 0 {
                    continue;
                }
                for v in vs {
                    for e in &basis0 {
                        if let Some(w) = self.bracket(0, e, deg, v) {
                            next[deg].push(w);
                        }
                    }
                }
            }
            next.map(|vs| span_basis(f, vs))
        };
        let size = |layer: &[Vec<Vector>; 3]| layer.iter().map(Vec::len).sum::<usize>();
        let run = |only0: bool| -> std::result::Result<usize, AxiomViolation> {
            let mut layer: [Vec<Vector>; 3] =
                std::array::from_fn(|d| (0..self.dims[d]).map(|i| self.basis(d, i)).collect());
            if only0 {
                layer[1].clear();
                layer[2].clear();
            }
            let mut c = 0;
            while size(&layer) > 0 {
                let next = step(&layer, only0);
                if size(&next) == size(&layer) {
                    return Err(AxiomViolation::NotNilpotent);
                }
                layer = next;
                c += 1;
            }
            Ok(c)
        };
        Ok((run(false)?, run(true)?))
    }

    /// Nilpotency class: least `c` with every `c`-fold `ad(g^0)` vanishing on `g`.
    pub fn nilpotency_class(&self) -> Result<usize> {
        self.classes()
            .map(|(c, _)| c)
            .map_err(|v| Error::Precondition(v.to_string()))
    }

    /// The first violated axiom, if any.
    pub fn check_axioms(&self) -> Option<AxiomViolation> {
        let f = self.field;
        for i in 0..self.dims[0] {
            let dd = self.differential(1, &self.differential(0, &self.basis(0, i))?)?;
            if dd.iter().any(|&x| x != 0) {
                return Some(AxiomViolation::DSquared { basis: i });
            }
        }
        for [a, b] in STORED {
            for i in 0..self.dims[a] {
                for j in 0..self.dims[b] {
                    if a != b {
                        continue;
                    }
                    let (x, y) = (self.basis(a, i), self.basis(b, j));
                    let xy = self.bracket(a, &x, b, &y)?;
                    let yx = self.bracket(b, &y, a, &x)?;
                    if xy != sign(f, (a * b) % 2 == 0, yx) {
                        return Some(AxiomViolation::Antisymmetry { degrees: [a, b], left: i, right: j });
                    }
                }
            }
        }
        for a in 0..=2 {
            for b in 0..=(2 - a) {
                for c in 0..=(2 - a - b) {
                    for i in 0..self.dims[a] {
                        for j in 0..self.dims[b] {
                            for k in 0..self.dims[c] {
                                let (x, y, z) = (self.basis(a, i), self.basis(b, j), self.basis(c, k));
                                let lhs = self.bracket(a, &x, b + c, &self.bracket(b, &y, c, &z)?)?;
                                let r1 = self.bracket(a + b, &self.bracket(a, &x, b, &y)?, c, &z)?;
                                let r2 = self.bracket(b, &y, a + c, &self.bracket(a, &x, c, &z)?)?;
                                let rhs = self.add(&r1, &sign(f, (a * b) % 2 == 1, r2));
                                if lhs != rhs {
                                    return Some(AxiomViolation::Jacobi {
                                        degrees: [a, b, c],
                                        basis: [i, j, k],
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        for (a, b) in [(0, 0), (0, 1), (1, 0)] {
            for i in 0..self.dims[a] {
                for j in 0..self.dims[b] {
                    let (x, y) = (self.basis(a, i), self.basis(b, j));
                    let lhs = self.differential(a + b, &self.bracket(a, &x, b, &y)?)?;
                    let r1 = self.bracket(a + 1, &self.differential(a, &x)?, b, &y)?;
                    let r2 = self.bracket(a, &x, b + 1, &self.differential(b, &y)?)?;
                    let rhs = self.add(&r1, &sign(f, a % 2 == 1, r2));
                    if lhs != rhs {
                        return Some(AxiomViolation::Leibniz { degrees: [a, b], basis: [i, j] });
                    }
                }
            }
        }
        let (c, c0) = match self.classes() {
            Ok(x) => x,
            Err(v) => return Some(v),
        };
        if c0 > 4 {
            return Some(AxiomViolation::ClassTooLarge { class: c0 });
        }
        if self.modulus() as usize <= c + 1 {
            return Some(AxiomViolation::CharacteristicTooSmall {
                class: c,
                modulus: self.modulus(),
            });
        }
        None
    }

    /// Checks every axiom, reporting the first violation as a precondition error.
    pub fn validate(&self) -> Result<()> {
        match self.check_axioms() {
            None => Ok(()),
            Some(v) => Err(Error::Precondition(v.to_string())),
        }
    }

    /// `d x + 1/2 [x, x]` for `x` in `g^1`.
    pub fn curvature(&self, x: &[u32]) -> Vector {
        let dx = self.differential(1, x).expect("degree 1");
        let xx = self.bracket(1, x, 1, x).expect("degree 2");
        self.add(&dx, &self.scale(self.inv(2), &xx))
    }

    pub fn is_mc(&self, x: &[u32]) -> bool {
        self.curvature(x).iter().all(|&v| v == 0)
    }

    fn check_enumerable(&self, degree: usize) -> Result<u64> {
        let p = self.modulus() as u64;
        let dim = self.dims[degree] as u32;
        match p.checked_pow(dim) {
            Some(n) if n <= ENUMERATION_LIMIT => Ok(n),
            _ => Err(infeasible(format!(
                "p^dim g^{degree} = {p}^{dim} exceeds the enumeration limit {ENUMERATION_LIMIT}"
            ))),
        }
    }

    /// All Maurer–Cartan elements, by enumeration of `g^1` in base-`p` order.
    pub fn mc_set(&self) -> Result<Vec<Vector>> {
        let total = self.check_enumerable(1)?;
        Ok((0..total)
            .map(|i| decode(self.modulus(), self.dims[1], i))
            .filter(|x| self.is_mc(x))
            .collect())
    }

    /// Campbell–Hausdorff product on `g^0`, `log(e^a e^b)`, through degree 4.
    pub fn exp_group_mul(&self, a: &[u32], b: &[u32]) -> Result<Vector> {
        let (_, c0) = self.classes().map_err(|v| Error::Precondition(v.to_string()))?;
        if c0 > 4 {
            return Err(Error::Precondition(AxiomViolation::ClassTooLarge { class: c0 }.to_string()));
        }
        let br = |x: &[u32], y: &[u32]| self.bracket(0, x, 0, y).expect("degree 0");
        let mut out = self.add(a, b);
        if c0 >= 2 {
            let ab = br(a, b);
            out = self.add(&out, &self.scale(self.inv(2), &ab));
            if c0 >= 3 {
                let aab = br(a, &ab);
                let bab = br(b, &ab);
                let diff = self.add(&aab, &sign(self.field, true, bab));
                out = self.add(&out, &self.scale(self.inv(12), &diff));
                if c0 >= 4 {
                    let baab = br(b, &aab);
                    out = self.add(&out, &sign(self.field, true, self.scale(self.inv(24), &baab)));
                }
            }
        }
        Ok(out)
    }

    /// `sum_k T^k v / scale(k)` with `T = ad y` on `g^degree`, until `T^k v = 0`.
    fn ad_series(&self, y: &[u32], degree: usize, v: &[u32], scale: impl Fn(u64) -> u64) -> Vector {
        let f = self.field;
        let mut out = self.zero(degree);
        let mut term = v.to_vec();
        let mut k = 0u64;
        while term.iter().any(|&x| x != 0) {
            let c = f.inv(f.from_int(scale(k) as i64)).expect("p exceeds the nilpotency class");
            out = self.add(&out, &self.scale(c, &term));
            term = self.bracket(0, y, degree, &term).expect("degree preserved");
            k += 1;
        }
        out
    }

    /// `e^y * x = e^{ad y}(x) + ((1 - e^{ad y}) / ad y)(d y)`.
    pub fn gauge_act(&self, y: &[u32], x: &[u32]) -> Vector {
        let factorial = |k: u64| (1..=k).product::<u64>();
        let first = self.ad_series(y, 1, x, factorial);
        let dy = self.differential(0, y).expect("degree 0");
        // (1 - e^T)/T = -sum_k T^k / (k+1)!
        let second = self.ad_series(y, 1, &dy, |k| factorial(k + 1));
        self.add(&first, &sign(self.field, true, second))
    }

    /// Orbits and stabilizers of the gauge action on `mc(g)`.
    pub fn groupoid_card(&self) -> Result<GroupoidCard> {
        Ok(self.groupoid()?.card)
    }

    pub(crate) fn groupoid(&self) -> Result<Groupoid> {
        self.validate()?;
        let group_order = self.check_enumerable(0)?;
        let mc = self.mc_set()?;
        let p = self.modulus();
        let index: HashMap<u64, usize> = mc.iter().enumerate().map(|(i, x)| (encode(p, x), i)).collect();
        let generators: Vec<Vector> = (0..self.dims[0]).map(|i| self.basis(0, i)).collect();
        let mut orbit_of = vec![usize::MAX; mc.len()];
        let mut representatives = Vec::new();
        let mut stabilizer_orders = Vec::new();
        for start in 0..mc.len() {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let id = representatives.len();
            orbit_of[start] = id;
            let mut size = 1u64;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for e in &generators {
                    let image = self.gauge_act(e, &mc[i]);
                    let j = *index.get(&encode(p, &image)).ok_or_else(|| {
                        Error::CheckFailed(format!(
                            "gauge action moved {:?} out of the Maurer–Cartan set",
                            mc[i]
                        ))
                    })?;
                    if orbit_of[j] == usize::MAX {
                        orbit_of[j] = id;
                        size += 1;
                        queue.push_back(j);
                    }
                }
            }
            let rep = &mc[start];
            let stabilizer = (0..group_order)
                .filter(|&k| self.gauge_act(&decode(p, self.dims[0], k), rep) == *rep)
                .count() as u64;
            if size * stabilizer != group_order {
                return Err(Error::CheckFailed(format!(
                    "orbit of {rep:?} has size {size} and stabilizer {stabilizer}; |G^0| = {group_order}"
                )));
            }
            representatives.push(rep.clone());
            stabilizer_orders.push(stabilizer);
        }
        let groupoid_cardinality = stabilizer_orders
            .iter()
            .map(|&s| BigRational::new(1.into(), BigInt::from(s)))
            .sum::<BigRational>();
        if groupoid_cardinality.clone() * BigInt::from(group_order) != BigRational::from_integer(mc.len().into()) {
            return Err(Error::CheckFailed(
                "groupoid cardinality times |G^0| differs from |mc(g)|".into(),
            ));
        }
        let mut sorted = stabilizer_orders.clone();
        sorted.sort_unstable();
        Ok(Groupoid {
            card: GroupoidCard {
                object_count: mc.len() as u64,
                orbit_count: representatives.len() as u64,
                stabilizer_orders: sorted,
                groupoid_cardinality,
            },
            mc,
            orbit_of,
            representatives,
            stabilizers: stabilizer_orders,
        })
    }

    /// Exhaustive check of the group-action axioms and of `mc`-preservation.
    pub fn check_action_axioms(&self) -> Result<ActionReport> {
        self.validate()?;
        let g0 = self.check_enumerable(0)?;
        let p = self.modulus();
        let mc = self.mc_set()?;
        let elements: Vec<Vector> = (0..g0).map(|k| decode(p, self.dims[0], k)).collect();
        let zero = self.zero(0);
        let mut report = ActionReport::default();
        for x in &mc {
            report.identity &= self.gauge_act(&zero, x) == *x;
        }
        for y in &elements {
            report.inverse &= self.exp_group_mul(y, &sign(self.field, true, y.clone()))? == zero;
            for x in &mc {
                report.preserves_mc &= self.is_mc(&self.gauge_act(y, x));
            }
        }
        for y1 in &elements {
            for y2 in &elements {
                let y12 = self.exp_group_mul(y1, y2)?;
                for y3 in &elements {
                    let left = self.exp_group_mul(&y12, y3)?;
                    let right = self.exp_group_mul(y1, &self.exp_group_mul(y2, y3)?)?;
                    report.associative &= left == right;
                }
                for x in &mc {
                    report.compatible &= self.gauge_act(y1, &self.gauge_act(y2, x)) == self.gauge_act(&y12, x);
                }
            }
        }
        report.checked_group_elements = g0;
        report.checked_mc_elements = mc.len() as u64;
        Ok(report)
    }

    /// Dimensions of `H^0`, `H^1`, `H^2` of the underlying complex.
    pub fn cohomology_dims(&self) -> [usize; 3] {
        let r0 = rank(self.field, &self.d0);
        let r1 = rank(self.field, &self.d1);
        [self.dims[0] - r0, self.dims[1] - r1 - r0, self.dims[2] - r1]
    }
}

/// Exhaustive verdicts on the group and action axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionReport {
    pub identity: bool,
    pub inverse: bool,
    pub associative: bool,
    pub compatible: bool,
    pub preserves_mc: bool,
    pub checked_group_elements: u64,
    pub checked_mc_elements: u64,
}

impl Default for ActionReport {
    fn default() -> Self {
        ActionReport {
            identity: true,
            inverse: true,
            associative: true,
            compatible: true,
            preserves_mc: true,
            checked_group_elements: 0,
            checked_mc_elements: 0,
        }
    }
}

impl ActionReport {
    pub fn holds(&self) -> bool {
        self.identity && self.inverse && self.associative && self.compatible && self.preserves_mc
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidCard {
    pub object_count: u64,
    pub orbit_count: u64,
    /// Sorted.
    pub stabilizer_orders: Vec<u64>,
    #[serde(with = "rational")]
    pub groupoid_cardinality: BigRational,
}

/// The action groupoid with its orbit decomposition.
#[derive(Debug, Clone)]
pub(crate) struct Groupoid {
    pub card: GroupoidCard,
    pub mc: Vec<Vector>,
    /// Orbit id of each element of `mc`.
    pub orbit_of: Vec<usize>,
    pub representatives: Vec<Vector>,
    /// Stabilizer order per orbit, in orbit order.
    pub stabilizers: Vec<u64>,
}

pub(crate) fn encode(p: u32, v: &[u32]) -> u64 {
    v.iter().rev().fold(0u64, |acc, &x| acc * p as u64 + x as u64)
}

pub(crate) fn decode(p: u32, len: usize, mut code: u64) -> Vector {
    let mut v = vec![0; len];
    for x in v.iter_mut() {
        *x = (code % p as u64) as u32;
        code /= p as u64;
    }
    v
}

fn combine(f: PrimeField, len: usize, coeffs: &[u32], images: &[Vector]) -> Vector {
    let mut out = vec![0; len];
    for (&c, img) in coeffs.iter().zip(images) {
        if c != 0 {
            for (o, &y) in out.iter_mut().zip(img) {
                *o = f.add(*o, f.mul(c, y));
            }
        }
    }
    out
}

fn bilinear(f: PrimeField, len: usize, x: &[u32], y: &[u32], t: &[Vec<Vector>]) -> Vector {
    let mut out = vec![0; len];
    for (i, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate() {
            if b == 0 {
                continue;
            }
            let c = f.mul(a, b);
            for (o, &v) in out.iter_mut().zip(&t[i][j]) {
                *o = f.add(*o, f.mul(c, v));
            }
        }
    }
    out
}

/// Rank of the span of `vectors`.
pub(crate) fn rank(f: PrimeField, vectors: &[Vector]) -> usize {
    span_basis(f, vectors.to_vec()).len()
}

/// A basis of the span, as reduced rows.
pub(crate) fn span_basis(f: PrimeField, vectors: Vec<Vector>) -> Vec<Vector> {
    let len = vectors.first().map_or(0, Vec::len);
    if vectors.is_empty() || len == 0 {
        return Vec::new();
    }
    let m = Matrix::from_entries(f, vectors.len(), len, vectors.concat()).expect("rectangular");
    m.row_basis()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(degrees: [usize; 2], left: usize, right: usize, value: &[u32]) -> BracketEntry {
        BracketEntry {
            degrees,
            left,
            right,
            value: value.to_vec(),
        }
    }

    fn heisenberg() -> DgLie3 {
        DgLie3::new(
            5,
            [3, 0, 0],
            &[],
            &[],
            &[entry([0, 0], 0, 1, &[0, 0, 1]), entry([0, 0], 1, 0, &[0, 0, 4])],
        )
        .unwrap()
    }

    #[test]
    fn abelian_algebras_validate() {
        let g = DgLie3::abelian(5, [1, 1, 1], &[vec![1]], &[vec![0]]).unwrap();
        assert!(g.validate().is_ok());
        assert_eq!(g.nilpotency_class().unwrap(), 1);
    }

    #[test]
    fn d_squared_is_detected() {
        let g = DgLie3::abelian(5, [1, 1, 1], &[vec![1]], &[vec![1]]).unwrap();
        assert_eq!(g.check_axioms(), Some(AxiomViolation::DSquared { basis: 0 }));
        assert!(g.validate().unwrap_err().to_string().contains("d² ≠ 0"));
    }

    #[test]
    fn heisenberg_validates_with_class_two() {
        let g = heisenberg();
        assert_eq!(g.check_axioms(), None);
        assert_eq!(g.nilpotency_class().unwrap(), 2);
        let e1 = g.basis(0, 0);
        let e2 = g.basis(0, 1);
        // e1 + e2 + 1/2 f, and 1/2 = 3 mod 5
        assert_eq!(g.exp_group_mul(&e1, &e2).unwrap(), vec![1, 1, 3]);
        let r = g.check_action_axioms().unwrap();
        assert!(r.associative && r.inverse);
    }

    #[test]
    fn broken_antisymmetry_is_detected() {
        let g = DgLie3::new(5, [2, 0, 0], &[], &[], &[entry([0, 0], 0, 1, &[0, 1])]).unwrap();
        assert!(matches!(g.check_axioms(), Some(AxiomViolation::Antisymmetry { .. })));
    }

    #[test]
    fn non_nilpotent_is_detected() {
        // [e, a] = a on g^0 x g^1
        let g = DgLie3::new(5, [1, 1, 0], &[vec![0]], &[], &[entry([0, 1], 0, 0, &[1])]).unwrap();
        assert_eq!(g.check_axioms(), Some(AxiomViolation::NotNilpotent));
    }

    #[test]
    fn small_characteristic_is_rejected() {
        let g = DgLie3::new(3, [3, 0, 0], &[], &[], &[entry([0, 0], 0, 1, &[0, 0, 1]), entry([0, 0], 1, 0, &[0, 0, 2])])
            .unwrap();
        assert!(matches!(g.check_axioms(), Some(AxiomViolation::CharacteristicTooSmall { .. })));
        assert!(DgLie3::abelian(2, [0, 0, 0], &[], &[]).is_err());
    }

    #[test]
    fn abelian_gauge_translates_by_minus_coboundary() {
        let g = DgLie3::abelian(5, [1, 1, 0], &[vec![1]], &[]).unwrap();
        assert_eq!(g.gauge_act(&[2], &[1]), vec![4]);
        assert_eq!(g.gauge_act(&[0], &[3]), vec![3]);
    }

    #[test]
    fn mc_set_examples() {
        let g = DgLie3::abelian(5, [0, 2, 1], &[], &[vec![0, 0]]).unwrap();
        assert_eq!(g.mc_set().unwrap().len(), 25);
        let g = DgLie3::abelian(5, [0, 1, 1], &[], &[vec![1]]).unwrap();
        assert_eq!(g.mc_set().unwrap(), vec![vec![0]]);
        let g = DgLie3::new(5, [0, 1, 1], &[], &[vec![0]], &[entry([1, 1], 0, 0, &[2])]).unwrap();
        assert_eq!(g.mc_set().unwrap(), vec![vec![0]]);
    }

    #[test]
    fn groupoid_examples() {
        let g = DgLie3::abelian(5, [1, 1, 0], &[vec![0]], &[]).unwrap();
        let c = g.groupoid_card().unwrap();
        assert_eq!((c.orbit_count, c.stabilizer_orders.clone()), (5, vec![5; 5]));
        let g = DgLie3::abelian(5, [1, 1, 0], &[vec![1]], &[]).unwrap();
        let c = g.groupoid_card().unwrap();
        assert_eq!((c.orbit_count, c.stabilizer_orders), (1, vec![1]));
        assert_eq!(g.cohomology_dims(), [0, 0, 0]);
    }

    #[test]
    fn json_round_trip() {
        let g = heisenberg();
        let text = serde_json::to_string(&g).unwrap();
        let back: DgLie3 = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }
}

//! The counting Hall algebra of finite-length modules over `F_p[x, y]`.
//!
//! A module of length `n` is a commuting pair of `n x n` matrices up to
//! simultaneous conjugation. Structure constants are
//! `g^M_{N,L} = #{U ⊆ M : U ≅ N, M/U ≅ L}` with the submodule first.

mod modules;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::commvar::{count_commuting_kernel, gl_order, span_elements, CommPair};
use crate::error::{precondition, Result};
use crate::ff::{FiniteField, Matrix, PrimeField, PrimeFieldMatrix};
use crate::numbers::rational;
use crate::Error;

pub use modules::{
    automorphism_count, fingerprint, is_isomorphic, submodules, Fingerprint, Module, Submodule,
};

/// Largest length and prime accepted for class tables.
pub const MAX_LENGTH: usize = 3;
pub const MAX_PRIME: u32 = 3;

/// Class name `n{length}-{index}`, indices assigned in enumeration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassId {
    pub length: usize,
    pub index: usize,
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}-{}", self.length, self.index)
    }
}

impl FromStr for ClassId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || precondition(format!("{s:?} is not a class name of the form n<length>-<index>"));
        let rest = s.strip_prefix('n').ok_or_else(bad)?;
        let (l, i) = rest.split_once('-').ok_or_else(bad)?;
        Ok(ClassId {
            length: l.parse().map_err(|_| bad())?,
            index: i.parse().map_err(|_| bad())?,
        })
    }
}

impl Serialize for ClassId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ClassId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleClass {
    pub name: ClassId,
    pub representative: Module,
    pub automorphism_order: u64,
    pub fingerprint: Fingerprint,
}

impl ModuleClass {
    pub fn length(&self) -> usize {
        self.name.length
    }
}

/// One nonzero structure constant `g^M_{N,L}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureConstant {
    pub m: ClassId,
    pub n: ClassId,
    pub l: ClassId,
    pub count: u64,
}

/// Isomorphism classes of modules of length `<= n_max` over `F_p`, with all
/// structure constants among them.
#[derive(Debug, Clone)]
pub struct ModuleClassTable {
    p: PrimeField,
    n_max: usize,
    classes: Vec<Vec<ModuleClass>>,
    /// pair code -> class, for every commuting pair of every length
    lookup: Vec<HashMap<u64, usize>>,
    /// (N, L) -> [(M, g^M_{N,L})]
    products: BTreeMap<(ClassId, ClassId), Vec<(ClassId, u64)>>,
}

fn pair_code(m: &Module) -> u64 {
    let q = m.field().order() as u64;
    let n = m.size() as u32;
    m.a().index() * q.pow(n * n) + m.b().index()
}

struct Group {
    elements: Vec<(PrimeFieldMatrix, PrimeFieldMatrix)>,
}

impl Group {
    fn general_linear(f: PrimeField, n: usize) -> Self {
        let q = f.order() as u64;
        let elements = (0..q.pow((n * n) as u32))
            .map(|i| Matrix::from_index(f, n, i))
            .filter_map(|g| g.inverse().map(|gi| (g, gi)))
            .collect();
        Group { elements }
    }
}

/// Elements of the centralizer of `a`, sorted by matrix index.
fn centralizer(a: &PrimeFieldMatrix) -> Vec<PrimeFieldMatrix> {
    let f = a.field();
    let n = a.rows();
    let basis = a.adjoint_operator().expect("square").kernel_basis();
    let mut out: Vec<PrimeFieldMatrix> = span_elements(f, &basis, n * n)
        .map(|v| Matrix::from_entries(f, n, n, v).expect("square"))
        .collect();
    out.sort_by_key(Matrix::index);
    out
}

fn check_parameters(n_max: usize, p: u32) -> Result<PrimeField> {
    if n_max > MAX_LENGTH {
        return Err(Error::Infeasible(format!(
            "class tables are limited to length {MAX_LENGTH} (asked for {n_max})"
        )));
    }
    let f = PrimeField::new(p)?;
    if p > MAX_PRIME {
        return Err(Error::Infeasible(format!(
            "class tables are limited to p <= {MAX_PRIME} (asked for p = {p})"
        )));
    }
    Ok(f)
}

/// Classes of a single length, with the code lookup covering every pair.
fn classes_of_length(f: PrimeField, n: usize) -> Result<(Vec<ModuleClass>, HashMap<u64, usize>)> {
    let mut lookup = HashMap::new();
    if n == 0 {
        let rep = CommPair::empty(f);
        lookup.insert(pair_code(&rep), 0);
        let class = ModuleClass {
            name: ClassId { length: 0, index: 0 },
            fingerprint: fingerprint(&rep),
            representative: rep,
            automorphism_order: 1,
        };
        return Ok((vec![class], lookup));
    }
    let q = f.order() as u64;
    let group = Group::general_linear(f, n);
    let group_order = group.elements.len() as u64;
    let mut classes = Vec::new();
    for ai in 0..q.pow((n * n) as u32) {
        let a = Matrix::from_index(f, n, ai);
        for b in centralizer(&a) {
            let rep = CommPair::new_unchecked(a.clone(), b);
            if lookup.contains_key(&pair_code(&rep)) {
                continue;
            }
            let id = classes.len();
            let mut orbit = 0u64;
            let mut stabilizer = 0u64;
            for (g, gi) in &group.elements {
                let image = rep.conjugate(g, gi);
                if image == rep {
                    stabilizer += 1;
                }
                if lookup.insert(pair_code(&image), id).is_none() {
                    orbit += 1;
                }
            }
            if orbit * stabilizer != group_order {
                return Err(Error::CheckFailed(format!(
                    "orbit {orbit} times stabilizer {stabilizer} is not |GL_{n}| = {group_order}"
                )));
            }
            classes.push(ModuleClass {
                name: ClassId { length: n, index: id },
                fingerprint: fingerprint(&rep),
                representative: rep,
                automorphism_order: stabilizer,
            });
        }
    }
    let total = count_commuting_kernel(f, n)?;
    if total != (lookup.len() as u64).into() {
        return Err(Error::CheckFailed(format!(
            "classes cover {} pairs of length {n}, expected {total}",
            lookup.len()
        )));
    }
    Ok((classes, lookup))
}

impl ModuleClassTable {
    /// Enumerates all classes of length `<= n_max` and their structure constants.
    pub fn enumerate(n_max: usize, p: u32) -> Result<Self> {
        let f = check_parameters(n_max, p)?;
        let mut classes = Vec::new();
        let mut lookup = Vec::new();
        for n in 0..=n_max {
            let (c, l) = classes_of_length(f, n)?;
            classes.push(c);
            lookup.push(l);
        }
        let mut table = ModuleClassTable {
            p: f,
            n_max,
            classes,
            lookup,
            products: BTreeMap::new(),
        };
        table.products = table.compute_products()?;
        Ok(table)
    }

    fn compute_products(&self) -> Result<BTreeMap<(ClassId, ClassId), Vec<(ClassId, u64)>>> {
        let mut products: BTreeMap<(ClassId, ClassId), BTreeMap<ClassId, u64>> = BTreeMap::new();
        for class in self.classes.iter().flatten() {
            for s in submodules(&class.representative) {
                let key = (self.classify(&s.sub)?, self.classify(&s.quotient)?);
                *products.entry(key).or_default().entry(class.name).or_default() += 1;
            }
        }
        Ok(products
            .into_iter()
            .map(|(k, v)| (k, v.into_iter().collect()))
            .collect())
    }

    pub fn modulus(&self) -> u32 {
        self.p.modulus()
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn classes(&self) -> impl Iterator<Item = &ModuleClass> {
        self.classes.iter().flatten()
    }

    pub fn classes_of_length(&self, n: usize) -> &[ModuleClass] {
        self.classes.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn class(&self, id: ClassId) -> Result<&ModuleClass> {
        self.classes
            .get(id.length)
            .and_then(|c| c.get(id.index))
            .ok_or_else(|| Error::Missing(format!("class {id} is not in the table")))
    }

    /// The class of an arbitrary commuting pair.
    pub fn classify(&self, m: &Module) -> Result<ClassId> {
        if m.field() != self.p {
            return Err(precondition("module over a different field than the table"));
        }
        let n = m.size();
        let lookup = self.lookup.get(n).ok_or_else(|| {
            Error::Missing(format!(
                "length {n} exceeds the table's maximum {}; re-enumerate with a larger n_max",
                self.n_max
            ))
        })?;
        let index = *lookup
            .get(&pair_code(m))
            .ok_or_else(|| precondition("matrices do not commute"))?;
        Ok(ClassId { length: n, index })
    }

    /// `g^M_{N,L}`; zero when the lengths do not add up.
    pub fn hall_number(&self, m: ClassId, n: ClassId, l: ClassId) -> Result<u64> {
        for id in [m, n, l] {
            self.class(id)?;
        }
        Ok(self
            .products
            .get(&(n, l))
            .and_then(|v| v.iter().find(|(x, _)| *x == m))
            .map_or(0, |(_, c)| *c))
    }

    /// Every nonzero structure constant, ordered by `(N, L, M)`.
    pub fn structure_constants(&self) -> Vec<StructureConstant> {
        self.products
            .iter()
            .flat_map(|(&(n, l), v)| v.iter().map(move |&(m, count)| StructureConstant { m, n, l, count }))
            .collect()
    }

    pub fn basis_element(&self, id: ClassId) -> Result<HallElement> {
        self.class(id)?;
        Ok(HallElement::basis(id))
    }

    /// `a * b = sum g^M_{N,L} a_N b_L [M]`.
    pub fn hall_product(&self, a: &HallElement, b: &HallElement) -> Result<HallElement> {
        let mut out = HallElement::zero();
        for (&n, x) in &a.coefficients {
            for (&l, y) in &b.coefficients {
                if n.length + l.length > self.n_max {
                    return Err(Error::Missing(format!(
                        "product of {n} and {l} has length {} beyond the table's maximum {}; \
                         re-enumerate with a larger n_max",
                        n.length + l.length,
                        self.n_max
                    )));
                }
                self.class(n)?;
                self.class(l)?;
                let xy = x * y;
                for &(m, c) in self.products.get(&(n, l)).map_or(&[][..], Vec::as_slice) {
                    out.add_term(m, &xy * BigInt::from(c));
                }
            }
        }
        Ok(out)
    }

    fn triples(&self, l_max: usize) -> Result<Vec<(ClassId, ClassId, ClassId)>> {
        if l_max > self.n_max {
            return Err(Error::Missing(format!(
                "the table covers lengths up to {}, not {l_max}",
                self.n_max
            )));
        }
        let ids: Vec<ClassId> = self.classes().map(|c| c.name).collect();
        let mut out = Vec::new();
        for &x in &ids {
            for &y in &ids {
                for &z in &ids {
                    if x.length + y.length + z.length <= l_max {
                        out.push((x, y, z));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `([N][L])[P] = [N]([L][P])` for all triples of total length `<= l_max`.
    pub fn check_associativity(&self, l_max: usize) -> Result<AssociativityReport> {
        let triples = self.triples(l_max)?;
        let mut violations = Vec::new();
        for &(x, y, z) in &triples {
            let (ex, ey, ez) = (HallElement::basis(x), HallElement::basis(y), HallElement::basis(z));
            let left = self.hall_product(&self.hall_product(&ex, &ey)?, &ez)?;
            let right = self.hall_product(&ex, &self.hall_product(&ey, &ez)?)?;
            if left != right {
                violations.push(AssociativityViolation {
                    triple: [x, y, z],
                    left,
                    right,
                });
            }
        }
        Ok(AssociativityReport {
            p: self.modulus(),
            l_max,
            triples_checked: triples.len(),
            violations,
        })
    }

    /// `[N][L] - [L][N]` for all pairs with total length `<= l_max`.
    pub fn commutator_table(&self, l_max: usize) -> Result<Vec<CommutatorEntry>> {
        if l_max > self.n_max {
            return Err(Error::Missing(format!(
                "the table covers lengths up to {}, not {l_max}",
                self.n_max
            )));
        }
        let ids: Vec<ClassId> = self.classes().map(|c| c.name).collect();
        let mut out = Vec::new();
        for &x in &ids {
            for &y in &ids {
                if x.length + y.length > l_max {
                    continue;
                }
                let (ex, ey) = (HallElement::basis(x), HallElement::basis(y));
                let mut diff = self.hall_product(&ex, &ey)?;
                diff.add_scaled(&self.hall_product(&ey, &ex)?, &-BigRational::from_integer(1.into()));
                let defect = diff.coefficients.values().fold(BigRational::zero(), |acc, c| acc + c.abs());
                out.push(CommutatorEntry {
                    lhs: x,
                    rhs: y,
                    defect,
                    commutator: diff,
                });
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssociativityViolation {
    pub triple: [ClassId; 3],
    pub left: HallElement,
    pub right: HallElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssociativityReport {
    pub p: u32,
    pub l_max: usize,
    pub triples_checked: usize,
    pub violations: Vec<AssociativityViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorEntry {
    pub lhs: ClassId,
    pub rhs: ClassId,
    /// Sum of absolute values of the commutator's coefficients.
    #[serde(with = "rational")]
    pub defect: BigRational,
    pub commutator: HallElement,
}

/// A finitely supported rational combination of classes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HallElement {
    coefficients: BTreeMap<ClassId, BigRational>,
}

impl HallElement {
    pub fn zero() -> Self {
        HallElement::default()
    }

    pub fn basis(id: ClassId) -> Self {
        let mut e = HallElement::zero();
        e.add_term(id, BigRational::from_integer(1.into()));
        e
    }

    pub fn coefficients(&self) -> &BTreeMap<ClassId, BigRational> {
        &self.coefficients
    }

    pub fn coefficient(&self, id: ClassId) -> BigRational {
        self.coefficients.get(&id).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn add_term(&mut self, id: ClassId, c: BigRational) {
        let e = self.coefficients.entry(id).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.coefficients.remove(&id);
        }
    }

    pub fn add_scaled(&mut self, other: &HallElement, s: &BigRational) {
        for (&id, c) in &other.coefficients {
            self.add_term(id, c * s);
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    class: ClassId,
    #[serde(with = "rational")]
    coefficient: BigRational,
}

impl Serialize for HallElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .coefficients
            .iter()
            .map(|(&class, c)| TermRepr {
                class,
                coefficient: c.clone(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HallElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let mut e = HallElement::zero();
        for t in Vec::<TermRepr>::deserialize(d)? {
            e.add_term(t.class, t.coefficient);
        }
        Ok(e)
    }
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    p: u32,
    n_max: usize,
    classes: Vec<ModuleClass>,
    structure_constants: Vec<StructureConstant>,
}

impl Serialize for ModuleClassTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableRepr {
            p: self.modulus(),
            n_max: self.n_max,
            classes: self.classes().cloned().collect(),
            structure_constants: self.structure_constants(),
        }
        .serialize(s)
    }
}

impl ModuleClassTable {
    /// Rebuilds a table from its serialized form, checking it against a fresh enumeration.
    fn from_repr(r: TableRepr) -> Result<Self> {
        let fresh = ModuleClassTable::enumerate(r.n_max, r.p)?;
        let classes: Vec<ModuleClass> = fresh.classes().cloned().collect();
        if classes != r.classes {
            return Err(Error::CheckFailed("class list differs from a fresh enumeration".into()));
        }
        if fresh.structure_constants() != r.structure_constants {
            return Err(Error::CheckFailed(
                "structure constants differ from a fresh enumeration".into(),
            ));
        }
        Ok(fresh)
    }
}

impl<'de> Deserialize<'de> for ModuleClassTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ModuleClassTable::from_repr(TableRepr::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// `|GL_n(F_p)| / |Aut|` summed over the classes of length `n`.
pub fn orbit_sum(table: &ModuleClassTable, n: usize) -> BigInt {
    let g = BigInt::from(gl_order(n, table.modulus() as u64));
    table
        .classes_of_length(n)
        .iter()
        .map(|c| &g / BigInt::from(c.automorphism_order))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> BigRational {
        BigRational::from_integer(1.into())
    }

    #[test]
    fn length_one_classes() {
        let t2 = ModuleClassTable::enumerate(1, 2).unwrap();
        assert_eq!(t2.classes_of_length(1).len(), 4);
        assert!(t2.classes_of_length(1).iter().all(|c| c.automorphism_order == 1));
        let t3 = ModuleClassTable::enumerate(1, 3).unwrap();
        assert_eq!(t3.classes_of_length(1).len(), 9);
        assert!(t3.classes_of_length(1).iter().all(|c| c.automorphism_order == 2));
    }

    #[test]
    fn rejects_large_parameters() {
        assert!(matches!(ModuleClassTable::enumerate(4, 2), Err(Error::Infeasible(_))));
        assert!(matches!(ModuleClassTable::enumerate(2, 5), Err(Error::Infeasible(_))));
        assert!(matches!(ModuleClassTable::enumerate(2, 4), Err(Error::Precondition(_))));
    }

    #[test]
    fn class_names_round_trip() {
        let id: ClassId = "n2-13".parse().unwrap();
        assert_eq!(id, ClassId { length: 2, index: 13 });
        assert_eq!(id.to_string(), "n2-13");
        assert!("m2-1".parse::<ClassId>().is_err());
    }

    #[test]
    fn automorphism_orders_agree_with_intertwiner_count() {
        let t = ModuleClassTable::enumerate(2, 2).unwrap();
        for c in t.classes() {
            assert_eq!(c.automorphism_order, automorphism_count(&c.representative), "{}", c.name);
        }
    }

    #[test]
    fn empty_element_annihilates() {
        let t = ModuleClassTable::enumerate(2, 2).unwrap();
        let b = t.basis_element(ClassId { length: 1, index: 0 }).unwrap();
        assert!(t.hall_product(&HallElement::zero(), &b).unwrap().is_zero());
        let unit = t.basis_element(ClassId { length: 0, index: 0 }).unwrap();
        assert_eq!(t.hall_product(&unit, &b).unwrap(), b);
        let mut two = b.clone();
        two.add_scaled(&b, &one());
        assert_eq!(two.coefficient(b.coefficients().keys().next().copied().unwrap()), one() + one());
    }
}

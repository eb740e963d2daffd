use clap::{Args, Subcommand, ValueEnum};
use coha_core::commvar::{self, CountMethod, Variety};
use coha_core::hallalg::{ClassId, HallElement, ModuleClassTable};
use coha_core::mcgroupoid::{self, fibration_count, quasi_iso_compare, DgLieMorphism, QuasiIsoExpectation};
use coha_core::numbers::{rational_from_ints, JsonRational};
use coha_core::series::{self, BettiTable};
use coha_core::{Error, Result};
use serde::Serialize;
use serde_json::json;

use crate::record::Outcome;

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VarietyArg {
    Commuting,
    Nilcommuting,
}

impl From<VarietyArg> for Variety {
    fn from(v: VarietyArg) -> Self {
        match v {
            VarietyArg::Commuting => Variety::Commuting,
            VarietyArg::Nilcommuting => Variety::NilpotentCommuting,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Brute,
    Kernel,
    Classes,
}

impl From<MethodArg> for CountMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Brute => CountMethod::Brute,
            MethodArg::Kernel => CountMethod::Kernel,
            MethodArg::Classes => CountMethod::Classes,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum CommvarCmd {
    /// Count points of a commuting variety over F_p.
    Count(CountArgs),
    /// Interpolate the count polynomial through several primes.
    Interpolate(InterpolateArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CountArgs {
    #[arg(long, value_enum)]
    pub variety: VarietyArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: u32,
    #[arg(long, value_enum, default_value_t = MethodArg::Kernel)]
    pub method: MethodArg,
}

#[derive(Debug, Args, Serialize)]
pub struct InterpolateArgs {
    #[arg(long, value_enum)]
    pub variety: VarietyArg,
    #[arg(long)]
    pub n: usize,
    /// Degree bound of the interpolant.
    #[arg(long)]
    pub degree: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Classes)]
    pub method: MethodArg,
}

#[derive(Debug, Subcommand)]
pub enum SeriesCmd {
    /// The product series of commuting-variety counts.
    Feitfine(FeitFineArgs),
    /// The PBW series of a surface with the given Betti numbers.
    Pbw(PbwArgs),
    /// Factorization of counts over closed points.
    PowerStructure(PowerArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct FeitFineArgs {
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub t_order: usize,
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub k: u32,
    /// Evaluate the exact coefficients at u = q.
    #[arg(long)]
    pub eval_at: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct PbwArgs {
    /// b0,b1,b2,b3,b4
    #[arg(long, value_delimiter = ',')]
    pub betti: Vec<u64>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub t_order: usize,
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub k: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct PowerArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: usize,
}

#[derive(Debug, Subcommand)]
pub enum HallCmd {
    /// Classes of modules and all structure constants.
    Table(TableArgs),
    /// Product of two basis elements.
    Product(ProductArgs),
    /// Exhaustive associativity check.
    Assoc(LmaxArgs),
    /// Commutators of basis elements and their size.
    Commutators(LmaxArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct TableArgs {
    #[arg(long)]
    pub nmax: usize,
    #[arg(long, default_value_t = 2)]
    pub p: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct ProductArgs {
    /// A class name such as n1-0.
    #[arg(long)]
    pub lhs: String,
    #[arg(long)]
    pub rhs: String,
    #[arg(long, default_value_t = 2)]
    pub p: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct LmaxArgs {
    #[arg(long)]
    pub lmax: usize,
    #[arg(long, default_value_t = 2)]
    pub p: u32,
}

#[derive(Debug, Subcommand)]
pub enum McCmd {
    /// Groupoid cardinality of a catalog entry.
    Card(EntryArgs),
    /// Compare groupoids across a catalogued quasi-isomorphism.
    Compare(CompareArgs),
    /// Fibre counts of a catalogued semidirect product.
    Fibration(EntryArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct EntryArgs {
    #[arg(long)]
    pub catalog_entry: String,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    #[arg(long)]
    pub lhs: String,
    #[arg(long)]
    pub rhs: String,
    /// A catalogued map; defaults to the listed quasi-isomorphism, or the identity.
    #[arg(long)]
    pub map: Option<String>,
}

fn rows<T>(items: &[T], f: impl Fn(&T) -> Vec<String>) -> Vec<Vec<String>> {
    items.iter().map(f).collect()
}

pub fn commvar(cmd: &CommvarCmd) -> Result<Outcome> {
    match cmd {
        CommvarCmd::Count(a) => {
            let variety = Variety::from(a.variety);
            let count = commvar::count(variety, a.method.into(), a.n, a.p)?;
            let mut out = Outcome::new(json!({
                "variety": a.variety,
                "n": a.n,
                "p": a.p,
                "count": serde_json::from_str::<serde_json::Number>(&count.to_string()).expect("decimal"),
            }));
            out.table = Some((
                vec!["variety", "n", "p", "count"],
                vec![vec![
                    format!("{:?}", a.variety).to_lowercase(),
                    a.n.to_string(),
                    a.p.to_string(),
                    count.to_string(),
                ]],
            ));
            Ok(out)
        }
        CommvarCmd::Interpolate(a) => {
            let variety = Variety::from(a.variety);
            let run = commvar::interpolate_count_polynomial(variety, a.method.into(), a.n, a.degree)?;
            let poly = &run.polynomial;
            let expected = variety.dimension(a.n);
            let degree = poly.degree();
            let law = degree == Some(expected) && poly.leading_coefficient() == rational_from_ints(1, 1);
            let coefficients: Vec<JsonRational> = poly.coefficients().iter().cloned().map(JsonRational).collect();
            Ok(Outcome::new(json!({
                "variety": a.variety,
                "n": a.n,
                "degree": degree,
                "coefficients": coefficients,
                "expected_degree": expected,
                "degree_law_holds": law,
                "interpolation": run,
            }))
            .check(law, format!("expected degree {expected} with leading coefficient 1, got degree {degree:?}")))
        }
    }
}

pub fn series(cmd: &SeriesCmd) -> Result<Outcome> {
    match cmd {
        SeriesCmd::Feitfine(a) => {
            let ff = series::feit_fine_series(a.t_order, a.k)?;
            let evaluations = match a.eval_at {
                None => None,
                Some(q) => {
                    let u = rational_from_ints(q, 1);
                    let values = (0..=a.t_order)
                        .map(|n| {
                            ff.value_at(n, &u)
                                .map(|v| json!({ "n": n, "value": JsonRational(v) }))
                                .ok_or_else(|| Error::Precondition(format!("the t^{n} coefficient has a pole at u = {q}")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Some(values)
                }
            };
            Ok(Outcome::new(json!({ "series": ff.series, "evaluations": evaluations })))
        }
        SeriesCmd::Pbw(a) => {
            let entries: [u64; 5] = a
                .betti
                .clone()
                .try_into()
                .map_err(|_| Error::Precondition("--betti takes exactly five numbers".into()))?;
            let betti = BettiTable::new(entries)?;
            let s = series::pbw_series(&betti, a.t_order, a.k)?;
            Ok(Outcome::new(json!({ "betti": betti, "series": s })))
        }
        SeriesCmd::PowerStructure(a) => {
            let report = series::power_structure_check(a.q, a.n)?;
            let equal = report.equal;
            Ok(Outcome::new(report).check(equal, "the two sides of the factorization differ"))
        }
    }
}

fn class(name: &str) -> Result<ClassId> {
    name.parse()
}

pub fn hall(cmd: &HallCmd) -> Result<Outcome> {
    match cmd {
        HallCmd::Table(a) => {
            let table = ModuleClassTable::enumerate(a.nmax, a.p)?;
            let constants = table.structure_constants();
            let mut out = Outcome::new(&table);
            out.table = Some((
                vec!["m", "n", "l", "count"],
                rows(&constants, |c| {
                    vec![c.m.to_string(), c.n.to_string(), c.l.to_string(), c.count.to_string()]
                }),
            ));
            Ok(out)
        }
        HallCmd::Product(a) => {
            let (l, r) = (class(&a.lhs)?, class(&a.rhs)?);
            let table = ModuleClassTable::enumerate(l.length + r.length, a.p)?;
            table.class(l)?;
            table.class(r)?;
            let product = table.hall_product(&HallElement::basis(l), &HallElement::basis(r))?;
            Ok(Outcome::new(json!({ "p": a.p, "lhs": l, "rhs": r, "product": product })))
        }
        HallCmd::Assoc(a) => {
            let table = ModuleClassTable::enumerate(a.lmax, a.p)?;
            let report = table.check_associativity(a.lmax)?;
            let ok = report.violations.is_empty();
            Ok(Outcome::new(report).check(ok, "associativity violations found"))
        }
        HallCmd::Commutators(a) => {
            let table = ModuleClassTable::enumerate(a.lmax, a.p)?;
            let entries = table.commutator_table(a.lmax)?;
            Ok(Outcome::new(json!({ "p": a.p, "l_max": a.lmax, "entries": entries })))
        }
    }
}

pub fn mc(cmd: &McCmd) -> Result<Outcome> {
    let catalog = mcgroupoid::catalog();
    match cmd {
        McCmd::Card(a) => {
            let entry = catalog.entry(&a.catalog_entry)?;
            let card = entry.algebra.groupoid_card()?;
            let axioms = entry.algebra.check_action_axioms()?;
            let matches = card == entry.expected;
            let ok = matches && axioms.holds();
            Ok(Outcome::new(json!({
                "entry": entry.id,
                "modulus": entry.algebra.modulus(),
                "dims": entry.algebra.dims(),
                "cohomology_dims": entry.algebra.cohomology_dims(),
                "card": card,
                "expected": entry.expected,
                "matches_expected": matches,
                "action_axioms": axioms,
            }))
            .check(ok, "the groupoid differs from the catalogued values or an action axiom failed"))
        }
        McCmd::Compare(a) => {
            let lhs = &catalog.entry(&a.lhs)?.algebra;
            let rhs = &catalog.entry(&a.rhs)?.algebra;
            let listed = match &a.map {
                Some(id) => {
                    let q = catalog.quasi_isomorphism(id)?;
                    if q.lhs != a.lhs || q.rhs != a.rhs {
                        return Err(Error::Precondition(format!(
                            "{id} maps {:?} to {:?}, not {:?} to {:?}",
                            q.lhs, q.rhs, a.lhs, a.rhs
                        )));
                    }
                    Some(q)
                }
                None => catalog.quasi_isomorphisms.iter().find(|q| {
                    q.lhs == a.lhs && q.rhs == a.rhs && q.expect == QuasiIsoExpectation::Pass
                }),
            };
            let (map, source) = match listed {
                Some(q) => (q.map.clone(), q.id.clone()),
                None if a.lhs == a.rhs => (DgLieMorphism::identity(lhs), "identity".to_string()),
                None => {
                    return Err(Error::Precondition(format!(
                        "the catalog lists no map from {:?} to {:?}",
                        a.lhs, a.rhs
                    )))
                }
            };
            let report = quasi_iso_compare(lhs, rhs, &map)?;
            if listed.is_some_and(|q| q.expect == QuasiIsoExpectation::NotQuasiIso) {
                return Err(Error::CheckFailed(format!("{source} is catalogued as not a quasi-isomorphism")));
            }
            let ok = report.holds();
            Ok(Outcome::new(json!({ "map": source, "report": report }))
                .check(ok, "the groupoids differ across the quasi-isomorphism"))
        }
        McCmd::Fibration(a) => {
            let entry = catalog.fibration(&a.catalog_entry)?;
            let report = fibration_count(&entry.product)?;
            let ok = report.holds()
                && report.mc_total == entry.expected_mc_total
                && report.signs_passing == entry.expected_signs;
            Ok(Outcome::new(json!({
                "entry": entry.id,
                "report": report,
                "expected_mc_total": entry.expected_mc_total,
                "expected_signs": entry.expected_signs,
            }))
            .check(ok, "the fibre counts disagree with the pinned sign or the catalogued values"))
        }
    }
}

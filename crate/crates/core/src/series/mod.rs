//! Bigraded generating series.
//!
//! The variable `t` records the length of a module and `u` records half the
//! homological degree. The generating space of the flat algebra of the plane has
//! one basis element `t^n u^{1-i}` for every length `n >= 1` and every Chern
//! index `i >= 0`; its symmetric algebra has Hilbert series
//! `prod_{n >= 1} prod_{i >= 0} (1 - t^n u^{1-i})^{-1}`, and at `u = q` the
//! `t^n`-coefficient of this product equals `|C_n(F_q)| / |GL_n(F_q)|`.

mod laurent;
mod power;
mod ratfunc;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};

pub use laurent::{Coefficient, LaurentBiSeries};
pub use power::{closed_point_counts, power_structure_check, PowerStructureReport};
pub use ratfunc::{RationalFunction, UPoly};

/// `u`-exponent of the Chern-index-zero generator in each length: the element
/// of length `n` and Chern index `i` has `u`-exponent `THETA_TOP_U_EXPONENT - i`.
/// Pinned by matching point counts of commuting varieties for `n = 1, 2`.
pub const THETA_TOP_U_EXPONENT: i64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// A homogeneous generator family of a free graded-commutative algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub t_degree: usize,
    /// Twice the `u`-exponent.
    pub u_times_2: i64,
    pub parity: Parity,
    pub multiplicity: u64,
}

impl Generator {
    pub fn even(t_degree: usize, u_exponent: i64) -> Self {
        Generator {
            t_degree,
            u_times_2: 2 * u_exponent,
            parity: Parity::Even,
            multiplicity: 1,
        }
    }

    pub fn odd(t_degree: usize, u_exponent: i64) -> Self {
        Generator {
            parity: Parity::Odd,
            ..Generator::even(t_degree, u_exponent)
        }
    }
}

/// One basis element `θ_{n,i}` of the generating space, of bidegree `(n, 2 - 2i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThetaBasisElement {
    pub n: usize,
    pub i: usize,
}

impl ThetaBasisElement {
    pub fn new(n: usize, i: usize) -> Result<Self> {
        if n == 0 {
            return Err(precondition("basis elements have length at least 1"));
        }
        Ok(ThetaBasisElement { n, i })
    }

    pub fn homological_degree(&self) -> i64 {
        2 - 2 * self.i as i64
    }

    pub fn u_exponent(&self) -> i64 {
        THETA_TOP_U_EXPONENT - self.i as i64
    }

    pub fn generator(&self) -> Generator {
        Generator::even(self.n, self.u_exponent())
    }
}

/// The basis elements `θ_{n,i}` with `n <= n_max`, `i <= i_max`.
pub fn theta_basis(n_max: usize, i_max: usize) -> Vec<ThetaBasisElement> {
    (1..=n_max)
        .flat_map(|n| (0..=i_max).map(move |i| ThetaBasisElement { n, i }))
        .collect()
}

/// Hilbert series of the free graded-commutative algebra on `generators`,
/// truncated at `t^N` and below `u^-K`.
///
/// Even generators of bidegree `(a, b)` and multiplicity `m` contribute
/// `(1 - t^a u^b)^-m`, odd ones `(1 + t^a u^b)^m`.
pub fn sym_hilbert(generators: &[Generator], t_order: usize, k: u32) -> Result<LaurentBiSeries> {
    if let Some(g) = generators.iter().find(|g| g.t_degree == 0) {
        return Err(precondition(format!(
            "generator {g:?} has t-degree 0; its symmetric powers do not truncate"
        )));
    }
    let mut acc = LaurentBiSeries::one(t_order, -(k as i64));
    for g in generators {
        if g.multiplicity == 0 || g.t_degree > t_order {
            continue;
        }
        let mut coeffs = vec![Coefficient::default(); t_order + 1];
        coeffs[0] = Coefficient::one();
        let m = BigInt::from(g.multiplicity);
        for j in 1..=t_order / g.t_degree {
            let jb = BigInt::from(j);
            let c = match g.parity {
                Parity::Even => binomial(&m + &jb - 1, jb),
                Parity::Odd if j as u64 <= g.multiplicity => binomial(m.clone(), jb),
                Parity::Odd => break,
            };
            coeffs[j * g.t_degree] = Coefficient::exact(BTreeMap::from([(
                g.u_times_2 * j as i64,
                BigRational::from_integer(c),
            )]));
        }
        let factor = LaurentBiSeries::from_coefficients(-(k as i64), coeffs)?;
        acc = acc.mul(&factor);
    }
    acc.truncate_below(-2 * k as i64);
    Ok(acc)
}

/// The product series together with the exact rational function of `u` in
/// each `t`-degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeitFine {
    pub series: LaurentBiSeries,
    pub exact: Vec<RationalFunction>,
}

impl FeitFine {
    /// Exact value of the `t^n`-coefficient at `u = q`.
    pub fn value_at(&self, n: usize, q: &BigRational) -> Option<BigRational> {
        self.exact.get(n)?.eval(q)
    }
}

/// Partitions of `n` as multiplicity vectors: `m[j]` parts of size `j`.
fn partition_multiplicities(n: usize) -> Vec<Vec<usize>> {
    fn go(rem: usize, max: usize, m: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(m.clone());
            return;
        }
        for part in (1..=max.min(rem)).rev() {
            m[part] += 1;
            go(rem - part, part, m, out);
            m[part] -= 1;
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut vec![0; n + 1], &mut out);
    out
}

/// Exact `t^n`-coefficient of `prod_{m >= 1} prod_{i >= 0} (1 - t^m u^{c - i})^{-1}`
/// with `c = THETA_TOP_U_EXPONENT`.
///
/// For each `m` the inner product is `sum_k (t^m u^c)^k / prod_{j=1}^k (1 - u^{-j})`
/// by the q-binomial theorem, so the coefficient is a sum over partitions of `n`.
pub fn feit_fine_coefficient(n: usize) -> RationalFunction {
    let c = THETA_TOP_U_EXPONENT;
    let mut total = RationalFunction::zero();
    for mult in partition_multiplicities(n) {
        let mut term = RationalFunction::new(UPoly::one(), UPoly::one());
        for &k in mult.iter().skip(1) {
            if k == 0 {
                continue;
            }
            // u^{ck} / prod_j (1 - u^-j) = u^{ck + k(k+1)/2} / prod_j (u^j - 1)
            let shift = c * k as i64 + (k * (k + 1) / 2) as i64;
            let den = (1..=k).fold(UPoly::one(), |acc, j| acc.mul(&UPoly::power_minus_one(j)));
            let num = if shift >= 0 {
                UPoly::monomial(shift as usize)
            } else {
                UPoly::one()
            };
            let den = if shift < 0 {
                den.mul(&UPoly::monomial((-shift) as usize))
            } else {
                den
            };
            term = term.mul(&RationalFunction::new(num, den));
        }
        total = total.add(&term);
    }
    total
}

/// The product series truncated at `t^N` and below `u^-K`, expanded factor by
/// factor through the q-binomial theorem, plus the exact coefficients.
pub fn feit_fine_series(t_order: usize, k: u32) -> Result<FeitFine> {
    if t_order == 0 {
        return Err(precondition("the truncation order must be at least 1"));
    }
    let c2 = 2 * THETA_TOP_U_EXPONENT;
    // terms of a factor below this floor cannot reach u^-K once multiplied by
    // the rest, whose t^n coefficients have exponent at most c * n
    let factor_floor = -2 * k as i64 - c2.max(0) * t_order as i64;
    let mut acc = LaurentBiSeries::one(t_order, -(k as i64));
    for m in 1..=t_order {
        let mut coeffs = vec![Coefficient::default(); t_order + 1];
        coeffs[0] = Coefficient::one();
        // running product prod_{j <= kk} 1/(1 - w^j) in w = u^-1, as doubled exponents
        let mut inv_prod: BTreeMap<i64, BigRational> = BTreeMap::from([(0, BigRational::one())]);
        for kk in 1..=t_order / m {
            let mut next: BTreeMap<i64, BigRational> = BTreeMap::new();
            for (e, v) in &inv_prod {
                let mut r = 0i64;
                loop {
                    let exp = e - 2 * kk as i64 * r;
                    if exp + c2 * (kk as i64) < factor_floor {
                        break;
                    }
                    *next.entry(exp).or_default() += v;
                    r += 1;
                }
            }
            inv_prod = next;
            let mut c = Coefficient::exact(
                inv_prod
                    .iter()
                    .map(|(e, v)| (e + c2 * kk as i64, v.clone()))
                    .collect(),
            );
            c.truncate_below(factor_floor);
            coeffs[kk * m] = c;
        }
        acc = acc.mul(&LaurentBiSeries::from_coefficients(-(k as i64), coeffs)?);
    }
    acc.truncate_below(-2 * k as i64);
    let exact = (0..=t_order).map(feit_fine_coefficient).collect();
    Ok(FeitFine { series: acc, exact })
}

/// Borel–Moore Betti numbers `b_0..b_4` of a smooth surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[u64; 5]", into = "[u64; 5]")]
pub struct BettiTable([u64; 5]);

impl BettiTable {
    pub fn new(b: [u64; 5]) -> Result<Self> {
        if b.iter().all(|&x| x == 0) {
            return Err(precondition("a Betti table needs at least one nonzero entry"));
        }
        Ok(BettiTable(b))
    }

    pub fn entries(&self) -> [u64; 5] {
        self.0
    }

    /// Betti table of a disjoint union.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let mut b = self.0;
        b.iter_mut().zip(other.0).for_each(|(x, y)| *x += y);
        BettiTable(b)
    }

    pub fn affine_plane() -> Self {
        BettiTable([0, 0, 0, 0, 1])
    }
}

impl TryFrom<[u64; 5]> for BettiTable {
    type Error = crate::Error;

    fn try_from(b: [u64; 5]) -> Result<Self> {
        BettiTable::new(b)
    }
}

impl From<BettiTable> for [u64; 5] {
    fn from(b: BettiTable) -> Self {
        b.0
    }
}

/// Generators of `H^BM(S) ⊗ Θ'` of length at most `t_order` whose `u`-exponent can
/// still reach the window above `u^-K`.
///
/// The class of homological degree `k` paired with the basis element of length
/// `n` and index `i` has homological degree `k - 2 - 2i`, hence doubled
/// `u`-exponent `k - 2 - 2i` and the parity of `k`.
pub fn pbw_generators(betti: &BettiTable, t_order: usize, k: u32) -> Vec<Generator> {
    // every generator has doubled u-exponent at most 2, so omitted ones (below the
    // cutoff) stay below -2K after multiplying by anything of t-degree < t_order
    let cutoff = -2 * k as i64 - 2 * t_order as i64;
    let mut out = Vec::new();
    for (deg, &b) in betti.0.iter().enumerate() {
        if b == 0 {
            continue;
        }
        let parity = if deg % 2 == 0 { Parity::Even } else { Parity::Odd };
        for n in 1..=t_order {
            let mut i = 0i64;
            loop {
                let u_times_2 = deg as i64 - 2 - 2 * i;
                if u_times_2 < cutoff {
                    break;
                }
                out.push(Generator {
                    t_degree: n,
                    u_times_2,
                    parity,
                    multiplicity: b,
                });
                i += 1;
            }
        }
    }
    out
}

/// Hilbert series of `Sym(H^BM(S) ⊗ Θ')` truncated at `t^N` and below `u^-K`.
pub fn pbw_series(betti: &BettiTable, t_order: usize, k: u32) -> Result<LaurentBiSeries> {
    sym_hilbert(&pbw_generators(betti, t_order, k), t_order, k)
}

/// Generators of the plane's generating space reaching the window above `u^-K`.
pub fn theta_generators(t_order: usize, k: u32) -> Vec<Generator> {
    theta_basis(t_order, k as usize + t_order)
        .iter()
        .map(ThetaBasisElement::generator)
        .collect()
}

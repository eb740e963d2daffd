//! Counting the fibres of `MC(h ⋉ n) -> MC(h)`.
//!
//! Expanding the Maurer–Cartan equation of `x + z` with `x` in `h^1` and `z` in
//! `n^1` gives `(dx + 1/2 [x, x]) + (dz + [x, z] + 1/2 [z, z])`, so the fibre
//! over `x` is `mc` of `n` with differential `d + ad(x)`. Both signs are
//! counted and the one that matches is recorded.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{decode, BracketEntry, DgLie3, Vector};
use crate::error::{precondition, Result};
use crate::ff::FiniteField;
use crate::numbers::rational;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TwistSign {
    /// `d_x = d + ad(x)`
    #[serde(rename = "d+ad(x)")]
    Plus,
    /// `d_x = d - ad(x)`
    #[serde(rename = "d-ad(x)")]
    Minus,
}

/// Sign of the twisted differential on `n_x`, pinned by [`fibration_count`].
pub const TWIST_SIGN: TwistSign = TwistSign::Plus;

/// `g = h ⋉ n`, with `action` listing `[e_left, f_right] = value` for `e_left` in
/// `h^{degrees[0]}`, `f_right` in `n^{degrees[1]}` and `value` in `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemidirectProduct {
    pub h: DgLie3,
    pub n: DgLie3,
    pub action: Vec<BracketEntry>,
}

impl SemidirectProduct {
    fn check_shape(&self) -> Result<()> {
        if self.h.modulus() != self.n.modulus() {
            return Err(precondition("h and n live over different fields"));
        }
        let (hd, nd) = (self.h.dims(), self.n.dims());
        for e in &self.action {
            let [a, b] = e.degrees;
            if a + b > 2 || e.left >= hd[a] || e.right >= nd[b] || e.value.len() != nd[a + b] {
                return Err(precondition(format!("action entry {e:?} does not fit the dimensions")));
            }
        }
        Ok(())
    }

    /// `[x, z]` for `x` in `h^a` and `z` in `n^b`.
    fn act(&self, a: usize, x: &[u32], b: usize, z: &[u32]) -> Vector {
        let f = self.n.field();
        let mut out = self.n.zero(a + b);
        for e in self.action.iter().filter(|e| e.degrees == [a, b]) {
            let c = f.mul(x[e.left], z[e.right]);
            if c != 0 {
                for (o, &v) in out.iter_mut().zip(&e.value) {
                    *o = f.add(*o, f.mul(c, v));
                }
            }
        }
        out
    }

    /// The algebra `g` on `h ⊕ n`, with the basis of `h` first.
    pub fn total(&self) -> Result<DgLie3> {
        self.check_shape()?;
        let (h, n) = (&self.h, &self.n);
        let f = h.field();
        let (hd, nd) = (h.dims(), n.dims());
        let dims = [hd[0] + nd[0], hd[1] + nd[1], hd[2] + nd[2]];
        let join = |x: Vector, y: Vector| -> Vector { x.into_iter().chain(y).collect() };
        let split = |k: usize, i: usize| -> (bool, usize) {
            if i < hd[k] {
                (true, i)
            } else {
                (false, i - hd[k])
            }
        };
        let diff_matrix = |k: usize| -> Vec<Vec<u32>> {
            let images: Vec<Vector> = (0..dims[k])
                .map(|i| match split(k, i) {
                    (true, i) => join(h.differential(k, &h.basis(k, i)).expect("k < 2"), n.zero(k + 1)),
                    (false, i) => join(h.zero(k + 1), n.differential(k, &n.basis(k, i)).expect("k < 2")),
                })
                .collect();
            (0..dims[k + 1]).map(|r| images.iter().map(|v| v[r]).collect()).collect()
        };
        let mut brackets = Vec::new();
        for [a, b] in [[0, 0], [0, 1], [0, 2], [1, 1]] {
            for i in 0..dims[a] {
                for j in 0..dims[b] {
                    let value = match (split(a, i), split(b, j)) {
                        ((true, i), (true, j)) => join(
                            h.bracket(a, &h.basis(a, i), b, &h.basis(b, j)).expect("a + b <= 2"),
                            n.zero(a + b),
                        ),
                        ((false, i), (false, j)) => join(
                            h.zero(a + b),
                            n.bracket(a, &n.basis(a, i), b, &n.basis(b, j)).expect("a + b <= 2"),
                        ),
                        ((true, i), (false, j)) => {
                            join(h.zero(a + b), self.act(a, &h.basis(a, i), b, &n.basis(b, j)))
                        }
                        ((false, i), (true, j)) => {
                            // [z, x] = -(-1)^{ab} [x, z]
                            let v = self.act(b, &h.basis(b, j), a, &n.basis(a, i));
                            let v = if (a * b) % 2 == 0 {
                                v.into_iter().map(|t| f.neg(t)).collect()
                            } else {
                                v
                            };
                            join(h.zero(a + b), v)
                        }
                    };
                    if value.iter().any(|&t| t != 0) {
                        brackets.push(BracketEntry {
                            degrees: [a, b],
                            left: i,
                            right: j,
                            value,
                        });
                    }
                }
            }
        }
        DgLie3::new(h.modulus(), dims, &diff_matrix(0), &diff_matrix(1), &brackets)
    }

    /// `n` with differential `d ± ad(x)` for `x` in `h^1`.
    pub fn twisted(&self, x: &[u32], sign: TwistSign) -> Result<DgLie3> {
        self.check_shape()?;
        let n = &self.n;
        let f = n.field();
        let nd = n.dims();
        let twist = |k: usize| -> Vec<Vec<u32>> {
            let images: Vec<Vector> = (0..nd[k])
                .map(|i| {
                    let e = n.basis(k, i);
                    let d = n.differential(k, &e).expect("k < 2");
                    let ad = self.act(1, x, k, &e);
                    d.iter()
                        .zip(&ad)
                        .map(|(&u, &v)| match sign {
                            TwistSign::Plus => f.add(u, v),
                            TwistSign::Minus => f.sub(u, v),
                        })
                        .collect()
                })
                .collect();
            (0..nd[k + 1]).map(|r| images.iter().map(|v| v[r]).collect()).collect()
        };
        DgLie3::new(n.modulus(), nd, &twist(0), &twist(1), &n.bracket_entries())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignOutcome {
    pub sign: TwistSign,
    /// `sum over x in mc(h) of |mc(n_x)|`.
    pub fiber_sum: u64,
    pub set_identity: bool,
    /// `|{z : x + z in mc(g)}| = |mc(n_x)|` for every `x` in `mc(h)`.
    pub per_fiber_identity: bool,
}

impl SignOutcome {
    pub fn holds(&self) -> bool {
        self.set_identity && self.per_fiber_identity
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationReport {
    pub pinned_sign: TwistSign,
    pub mc_total: u64,
    pub mc_base: u64,
    pub outcomes: Vec<SignOutcome>,
    pub signs_passing: Vec<TwistSign>,
    /// `card MC(g)`.
    #[serde(with = "rational")]
    pub groupoid_total: BigRational,
    /// `sum over orbits [x] of MC(h) of card MC(n_x) / |Aut(x)|`, with the pinned sign.
    #[serde(with = "rational")]
    pub groupoid_fibers: BigRational,
    pub groupoid_identity: bool,
}

impl FibrationReport {
    /// The identities hold under the pinned sign.
    pub fn holds(&self) -> bool {
        self.signs_passing.contains(&self.pinned_sign) && self.groupoid_identity
    }
}

/// Checks `|mc(g)| = sum_{x in mc(h)} |mc(n_x)|` fibre by fibre under both signs,
/// and the groupoid-cardinality version under the pinned sign.
pub fn fibration_count(s: &SemidirectProduct) -> Result<FibrationReport> {
    let g = s.total()?;
    g.validate()?;
    let (h, n) = (&s.h, &s.n);
    let p = g.modulus();
    let mc_h = h.mc_set()?;
    let fiber_space = n.check_enumerable(1)?;
    let mut fibers = Vec::with_capacity(mc_h.len());
    let mut mc_total = 0u64;
    for x in &mc_h {
        let count = (0..fiber_space)
            .filter(|&k| {
                let z = decode(p, n.dims()[1], k);
                g.is_mc(&x.iter().chain(&z).copied().collect::<Vec<u32>>())
            })
            .count() as u64;
        fibers.push(count);
        mc_total += count;
    }
    if mc_total != g.mc_set()?.len() as u64 {
        return Err(Error::CheckFailed(
            "elements of mc(g) do not project into mc(h)".into(),
        ));
    }
    let mut outcomes = Vec::new();
    for sign in [TwistSign::Plus, TwistSign::Minus] {
        let mut fiber_sum = 0u64;
        let mut per_fiber = true;
        for (x, &expected) in mc_h.iter().zip(&fibers) {
            let c = s.twisted(x, sign)?.mc_set()?.len() as u64;
            fiber_sum += c;
            per_fiber &= c == expected;
        }
        outcomes.push(SignOutcome {
            sign,
            fiber_sum,
            set_identity: fiber_sum == mc_total,
            per_fiber_identity: per_fiber,
        });
    }
    let signs_passing = outcomes.iter().filter(|o| o.holds()).map(|o| o.sign).collect();

    let base = h.groupoid()?;
    let mut groupoid_fibers = BigRational::zero();
    for (x, &aut) in base.representatives.iter().zip(&base.stabilizers) {
        let nx = s.twisted(x, TWIST_SIGN)?;
        nx.validate().map_err(|e| {
            Error::CheckFailed(format!("the twisted algebra over {x:?} is not a dg-Lie algebra: {e}"))
        })?;
        groupoid_fibers += nx.groupoid_card()?.groupoid_cardinality / BigInt::from(aut);
    }
    let groupoid_total = g.groupoid_card()?.groupoid_cardinality;
    Ok(FibrationReport {
        pinned_sign: TWIST_SIGN,
        mc_total,
        mc_base: mc_h.len() as u64,
        outcomes,
        signs_passing,
        groupoid_identity: groupoid_total == groupoid_fibers,
        groupoid_total,
        groupoid_fibers,
    })
}

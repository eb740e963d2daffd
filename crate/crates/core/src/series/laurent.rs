//! Truncated series in `t` whose coefficients are Laurent polynomials in `u`.
//!
//! Exponents of `u` are stored doubled (`u_times_2`) so half-integral exponents
//! are exact. Every `t`-coefficient carries its own validity floor: terms with
//! `u_times_2 >= valid_from` are exact, terms below it are unknown and are never
//! stored. A floor of `None` means the coefficient is known completely.
//!
//! When two coefficients are multiplied, the unknown tail of one factor can only
//! reach the product above `floor_a + max_b`, where `max_b` bounds the exponents
//! of the other factor; the product floor is the larger of the two such bounds.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::numbers::rational;

/// One `t`-coefficient: exact terms above an optional floor.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Coefficient {
    terms: BTreeMap<i64, BigRational>,
    valid_from: Option<i64>,
}

impl Coefficient {
    pub fn exact(terms: BTreeMap<i64, BigRational>) -> Self {
        let mut c = Coefficient {
            terms,
            valid_from: None,
        };
        c.terms.retain(|_, v| !v.is_zero());
        c
    }

    pub fn one() -> Self {
        Coefficient::exact(BTreeMap::from([(0, BigRational::one())]))
    }

    pub fn terms(&self) -> &BTreeMap<i64, BigRational> {
        &self.terms
    }

    pub fn valid_from(&self) -> Option<i64> {
        self.valid_from
    }

    /// Upper bound on the exponents of the true coefficient; `None` if it is exactly zero.
    fn exponent_bound(&self) -> Option<i64> {
        let stored = self.terms.keys().next_back().copied();
        match (stored, self.valid_from) {
            (Some(s), Some(f)) => Some(s.max(f - 1)),
            (Some(s), None) => Some(s),
            (None, Some(f)) => Some(f - 1),
            (None, None) => None,
        }
    }

    /// Drops everything below `floor` and records it as unknown.
    pub fn truncate_below(&mut self, floor: i64) {
        let floor = self.valid_from.map_or(floor, |f| f.max(floor));
        self.terms = self.terms.split_off(&floor);
        self.valid_from = Some(floor);
    }

    fn raise_floor(&mut self, floor: Option<i64>) {
        if let Some(f) = floor {
            self.truncate_below(f);
        }
    }

    fn add_assign(&mut self, other: &Coefficient) {
        for (k, v) in &other.terms {
            let e = self.terms.entry(*k).or_insert_with(BigRational::zero);
            *e += v;
        }
        self.terms.retain(|_, v| !v.is_zero());
        let floor = max_floor(self.valid_from, other.valid_from);
        self.valid_from = None;
        self.raise_floor(floor);
    }

    fn mul(&self, other: &Coefficient) -> Coefficient {
        let mut terms: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                *terms.entry(ka + kb).or_insert_with(BigRational::zero) += va * vb;
            }
        }
        let reach = |floor: Option<i64>, bound: Option<i64>| match (floor, bound) {
            (Some(f), Some(b)) => Some(f + b),
            _ => None,
        };
        let floor = max_floor(
            reach(self.valid_from, other.exponent_bound()),
            reach(other.valid_from, self.exponent_bound()),
        );
        let mut c = Coefficient::exact(terms);
        c.raise_floor(floor);
        c
    }

    fn scale(&self, s: &BigRational) -> Coefficient {
        let mut c = Coefficient::exact(self.terms.iter().map(|(k, v)| (*k, v * s)).collect());
        c.valid_from = self.valid_from;
        c
    }
}

fn max_floor(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Series `sum_{n <= t_order} c_n(u) t^n` with per-coefficient validity windows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentBiSeries {
    t_order: usize,
    /// Nominal floor `-K` in whole `u` units requested at construction.
    u_floor: i64,
    coeffs: Vec<Coefficient>,
}

impl LaurentBiSeries {
    /// The series `1`, exact in every coefficient.
    pub fn one(t_order: usize, u_floor: i64) -> Self {
        let mut coeffs = vec![Coefficient::default(); t_order + 1];
        coeffs[0] = Coefficient::one();
        LaurentBiSeries {
            t_order,
            u_floor,
            coeffs,
        }
    }

    pub fn from_coefficients(u_floor: i64, coeffs: Vec<Coefficient>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(precondition("a series needs at least the t^0 coefficient"));
        }
        if coeffs[0] != Coefficient::one() {
            return Err(precondition("the t^0 coefficient must be exactly 1"));
        }
        Ok(LaurentBiSeries {
            t_order: coeffs.len() - 1,
            u_floor,
            coeffs,
        })
    }

    pub fn t_order(&self) -> usize {
        self.t_order
    }

    pub fn u_floor(&self) -> i64 {
        self.u_floor
    }

    pub fn coefficients(&self) -> &[Coefficient] {
        &self.coeffs
    }

    pub fn t_coefficient(&self, t: usize) -> Result<&Coefficient> {
        self.coeffs.get(t).ok_or_else(|| {
            precondition(format!("t^{t} exceeds the truncation order {}", self.t_order))
        })
    }

    /// Coefficient of `t^t u^(u_times_2/2)`; an error outside the validity window.
    pub fn coefficient(&self, t: usize, u_times_2: i64) -> Result<BigRational> {
        let c = self.t_coefficient(t)?;
        if let Some(f) = c.valid_from {
            if u_times_2 < f {
                return Err(Error::OutsideWindow {
                    t,
                    u_times_2,
                    valid_from: f,
                });
            }
        }
        Ok(c.terms.get(&u_times_2).cloned().unwrap_or_else(BigRational::zero))
    }

    /// Drops all terms below `u^(u_times_2/2)` in every `t`-coefficient of positive degree.
    pub fn truncate_below(&mut self, u_times_2: i64) {
        for c in self.coeffs.iter_mut().skip(1) {
            c.truncate_below(u_times_2);
        }
    }

    /// Product, truncated at the smaller `t`-order with intersected windows.
    pub fn mul(&self, other: &Self) -> Self {
        let t_order = self.t_order.min(other.t_order);
        let coeffs = (0..=t_order)
            .map(|n| {
                let mut acc = Coefficient::default();
                for k in 0..=n {
                    acc.add_assign(&self.coeffs[k].mul(&other.coeffs[n - k]));
                }
                acc
            })
            .collect();
        LaurentBiSeries {
            t_order,
            u_floor: self.u_floor.max(other.u_floor),
            coeffs,
        }
    }

    /// `self^k` for `k >= 0`.
    pub fn pow(&self, k: u64) -> Self {
        (0..k).fold(LaurentBiSeries::one(self.t_order, self.u_floor), |acc, _| acc.mul(self))
    }

    /// Multiplicative inverse; the constant coefficient must be exactly `1`.
    pub fn inverse(&self) -> Result<Self> {
        if self.coeffs[0] != Coefficient::one() {
            return Err(precondition("only series with constant coefficient exactly 1 are inverted"));
        }
        let mut inv: Vec<Coefficient> = vec![Coefficient::one()];
        let minus_one = -BigRational::one();
        for n in 1..=self.t_order {
            let mut acc = Coefficient::default();
            for k in 1..=n {
                acc.add_assign(&self.coeffs[k].mul(&inv[n - k]));
            }
            inv.push(acc.scale(&minus_one));
        }
        Ok(LaurentBiSeries {
            t_order: self.t_order,
            u_floor: self.u_floor,
            coeffs: inv,
        })
    }

    /// Whether both series agree on every term inside both windows, up to the
    /// smaller `t`-order.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_disagreement(other).is_none()
    }

    /// First `(t, u_times_2)` where the two series differ inside the common window.
    pub fn first_disagreement(&self, other: &Self) -> Option<(usize, i64)> {
        let t_order = self.t_order.min(other.t_order);
        for n in 0..=t_order {
            let (a, b) = (&self.coeffs[n], &other.coeffs[n]);
            let floor = max_floor(a.valid_from, b.valid_from);
            let keys: std::collections::BTreeSet<i64> =
                a.terms.keys().chain(b.terms.keys()).copied().collect();
            for k in keys {
                if floor.is_some_and(|f| k < f) {
                    continue;
                }
                if a.terms.get(&k) != b.terms.get(&k) {
                    return Some((n, k));
                }
            }
        }
        None
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    u_times_2: i64,
    #[serde(flatten, with = "rational")]
    value: BigRational,
}

#[derive(Serialize, Deserialize)]
struct CoefficientRepr {
    t: usize,
    valid_from_u_times_2: Option<i64>,
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    t_order: usize,
    u_floor: i64,
    coefficients: Vec<CoefficientRepr>,
}

impl Serialize for LaurentBiSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr {
            t_order: self.t_order,
            u_floor: self.u_floor,
            coefficients: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(t, c)| CoefficientRepr {
                    t,
                    valid_from_u_times_2: c.valid_from,
                    terms: c
                        .terms
                        .iter()
                        .map(|(k, v)| TermRepr {
                            u_times_2: *k,
                            value: v.clone(),
                        })
                        .collect(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentBiSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = SeriesRepr::deserialize(d)?;
        let mut coeffs = vec![Coefficient::default(); r.t_order + 1];
        for c in r.coefficients {
            let slot = coeffs
                .get_mut(c.t)
                .ok_or_else(|| D::Error::custom(format!("t = {} beyond t_order", c.t)))?;
            let mut coeff = Coefficient::exact(c.terms.into_iter().map(|t| (t.u_times_2, t.value)).collect());
            if let Some(f) = c.valid_from_u_times_2 {
                coeff.truncate_below(f);
            }
            *slot = coeff;
        }
        Ok(LaurentBiSeries {
            t_order: r.t_order,
            u_floor: r.u_floor,
            coeffs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::rational_from_ints;

    fn coeff(terms: &[(i64, i64)], floor: Option<i64>) -> Coefficient {
        let mut c = Coefficient::exact(terms.iter().map(|&(k, v)| (k, rational_from_ints(v, 1))).collect());
        if let Some(f) = floor {
            c.truncate_below(f);
        }
        c
    }

    #[test]
    fn reading_below_the_floor_is_an_error() {
        let s = LaurentBiSeries::from_coefficients(
            -1,
            vec![Coefficient::one(), coeff(&[(2, 1), (0, 1), (-2, 1)], Some(-2))],
        )
        .unwrap();
        assert_eq!(s.coefficient(1, -2).unwrap(), rational_from_ints(1, 1));
        assert_eq!(s.coefficient(1, 4).unwrap(), BigRational::zero());
        assert!(matches!(s.coefficient(1, -4), Err(Error::OutsideWindow { .. })));
        assert!(s.coefficient(2, 0).is_err());
    }

    #[test]
    fn product_window_accounts_for_positive_shifts() {
        // (u + ... truncated below u^-1) * (u) is known from u^0 upward only
        let a = coeff(&[(2, 1), (0, 1), (-2, 1)], Some(-2));
        let b = coeff(&[(2, 1)], None);
        let c = a.mul(&b);
        assert_eq!(c.valid_from(), Some(0));
        assert_eq!(c.terms().keys().copied().collect::<Vec<_>>(), vec![0, 2, 4]);
    }

    #[test]
    fn exactly_zero_factor_gives_exact_zero() {
        let a = coeff(&[(0, 1)], Some(-4));
        let c = a.mul(&Coefficient::default());
        assert_eq!(c, Coefficient::default());
    }

    #[test]
    fn json_round_trip() {
        let s = LaurentBiSeries::from_coefficients(
            -2,
            vec![Coefficient::one(), coeff(&[(2, 3), (-1, -2)], Some(-4))],
        )
        .unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"u_times_2\":-1,\"numerator\":-2,\"denominator\":1"));
        let back: LaurentBiSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{check_feasible, count, CountMethod, Variety};
use crate::error::{infeasible, Error, Result};
use crate::ff::primes;
use crate::numbers::{as_integer, rational_vec};

/// A point count as a polynomial in the field size `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountPolynomial {
    /// Coefficients indexed by the power of `q`, without trailing zeros.
    #[serde(with = "rational_vec")]
    coefficients: Vec<BigRational>,
}

impl CountPolynomial {
    pub fn new(mut coefficients: Vec<BigRational>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        CountPolynomial { coefficients }
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> BigRational {
        self.coefficients.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn integer_coefficients(&self) -> Option<Vec<BigInt>> {
        self.coefficients.iter().map(as_integer).collect()
    }

    pub fn eval(&self, q: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * q + c)
    }
}

/// The unique polynomial of degree `< points.len()` through the given points.
pub fn lagrange_interpolate(points: &[(BigRational, BigRational)]) -> CountPolynomial {
    let mut result = vec![BigRational::zero(); points.len()];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial prod_{j != i} (q - x_j) / (x_i - x_j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        let scale = yi / denom;
        for (r, b) in result.iter_mut().zip(&basis) {
            *r += b * &scale;
        }
    }
    CountPolynomial::new(result)
}

/// Outcome of an interpolation run, with the data that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interpolation {
    pub variety: Variety,
    pub method: CountMethod,
    pub n: usize,
    pub degree_bound: usize,
    pub primes: Vec<u32>,
    #[serde(with = "count_list")]
    pub counts: Vec<BigUint>,
    pub held_out_prime: u32,
    #[serde(with = "crate::numbers::big_uint")]
    pub held_out_count: BigUint,
    pub polynomial: CountPolynomial,
}

mod count_list {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Item(#[serde(with = "crate::numbers::big_uint")] BigUint);

    pub fn serialize<S: Serializer>(xs: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(|x| Item(x.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Ok(Vec::<Item>::deserialize(d)?.into_iter().map(|i| i.0).collect())
    }
}

/// Largest prime tried when looking for feasible interpolation nodes.
const PRIME_SEARCH_LIMIT: u32 = 1_000;

/// Interpolates the count of `variety` through the first `degree_bound + 1`
/// primes on which `method` is feasible, and checks the result at the next
/// feasible prime and for integrality.
pub fn interpolate_count_polynomial(
    variety: Variety,
    method: CountMethod,
    n: usize,
    degree_bound: usize,
) -> Result<Interpolation> {
    let needed = degree_bound + 2;
    // costs grow with p, so the first infeasible prime ends the search
    let node_primes: Vec<u32> = primes()
        .take_while(|&p| p <= PRIME_SEARCH_LIMIT && check_feasible(variety, method, n, p as u64).is_ok())
        .take(needed)
        .collect();
    if node_primes.len() < needed {
        return Err(infeasible(format!(
            "{method:?} counting is feasible at only {} primes; degree bound {degree_bound} needs {needed}",
            node_primes.len()
        )));
    }
    let mut nodes = node_primes
        .into_iter()
        .map(|p| count(variety, method, n, p).map(|c| (p, c)))
        .collect::<Result<Vec<_>>>()?;
    let (held_out_prime, held_out_count) = nodes.pop().expect("nonempty");
    let points: Vec<(BigRational, BigRational)> = nodes
        .iter()
        .map(|(p, c)| {
            (
                BigRational::from_integer(BigInt::from(*p)),
                BigRational::from_integer(BigInt::from(c.clone())),
            )
        })
        .collect();
    let polynomial = lagrange_interpolate(&points);
    let predicted = polynomial.eval(&BigRational::from_integer(BigInt::from(held_out_prime)));
    if predicted != BigRational::from_integer(BigInt::from(held_out_count.clone())) {
        return Err(Error::CheckFailed(format!(
            "degree_bound too small or counting bug: interpolant predicts {predicted} at p = {held_out_prime}, counted {held_out_count}"
        )));
    }
    if polynomial.integer_coefficients().is_none() {
        return Err(Error::CheckFailed(
            "degree_bound too small or counting bug: non-integer coefficients".into(),
        ));
    }
    let (primes, counts) = nodes.into_iter().unzip();
    Ok(Interpolation {
        variety,
        method,
        n,
        degree_bound,
        primes,
        counts,
        held_out_prime,
        held_out_count,
        polynomial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::rational_from_ints;

    #[test]
    fn interpolates_a_known_cubic() {
        // 2q^3 - q + 5
        let f = |q: i64| 2 * q * q * q - q + 5;
        let pts: Vec<_> = [2i64, 3, 5, 7]
            .iter()
            .map(|&q| (rational_from_ints(q, 1), rational_from_ints(f(q), 1)))
            .collect();
        let poly = lagrange_interpolate(&pts);
        assert_eq!(
            poly.integer_coefficients().unwrap(),
            vec![BigInt::from(5), BigInt::from(-1), BigInt::from(0), BigInt::from(2)]
        );
        assert_eq!(poly.degree(), Some(3));
    }

    #[test]
    fn affine_plane_count_is_q_squared() {
        let run = interpolate_count_polynomial(Variety::Commuting, CountMethod::Kernel, 1, 2).unwrap();
        assert_eq!(
            run.polynomial.integer_coefficients().unwrap(),
            vec![BigInt::from(0), BigInt::from(0), BigInt::from(1)]
        );
    }

    #[test]
    fn too_small_degree_bound_is_caught_by_the_held_out_prime() {
        let err = interpolate_count_polynomial(Variety::Commuting, CountMethod::Kernel, 1, 1);
        assert!(matches!(err, Err(Error::CheckFailed(_))));
    }

    #[test]
    fn kernel_route_cannot_reach_degree_twelve() {
        let err = interpolate_count_polynomial(Variety::Commuting, CountMethod::Kernel, 3, 12);
        assert!(matches!(err, Err(Error::Infeasible(_))));
    }
}

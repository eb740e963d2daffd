//! Point counts of the commuting variety as a product of punctual factors over
//! the closed points of the plane.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::commvar::{count_commuting_kernel, count_nilpotent_bruteforce, gl_order};
use crate::error::{infeasible, precondition, Result};
use crate::ff::{FiniteField, PrimeField, F4};
use crate::numbers::{big_pow, rational_vec};
use crate::Error;

fn mobius(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Number of closed points of degree `d` of the affine plane over `F_q`, for
/// `d = 1..=d_max`.
pub fn closed_point_counts(d_max: u32, q: u64) -> Result<Vec<BigUint>> {
    if d_max == 0 {
        return Err(precondition("d_max must be at least 1"));
    }
    if q < 2 {
        return Err(precondition(format!("q = {q} is not a field order")));
    }
    let mut out = Vec::with_capacity(d_max as usize);
    for d in 1..=d_max {
        let mut s = BigInt::zero();
        for e in (1..=d).filter(|e| d % e == 0) {
            s += BigInt::from(mobius((d / e) as u64)) * BigInt::from(big_pow(q, 2 * e));
        }
        let (n, r) = (s.clone() / d, s % d);
        assert!(r.is_zero(), "Möbius sum not divisible by {d}");
        out.push(n.to_biguint().expect("nonnegative point count"));
    }
    for m in 1..=d_max {
        let total: BigUint = (1..=m)
            .filter(|d| m % d == 0)
            .map(|d| &out[d as usize - 1] * d)
            .sum();
        assert_eq!(total, big_pow(q, 2 * m), "closed points do not add up at degree {m}");
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerStructureReport {
    pub q: u64,
    pub n: usize,
    pub closed_points: Vec<u64>,
    /// `|C_n(F_q)| / |GL_n(F_q)|` for `n = 0..=N`.
    #[serde(with = "rational_vec")]
    pub left: Vec<BigRational>,
    /// The product of punctual factors, coefficient by coefficient.
    #[serde(with = "rational_vec")]
    pub right: Vec<BigRational>,
    pub equal: bool,
}

fn ratio(count: BigUint, n: usize, q: u64) -> BigRational {
    BigRational::new(count.into(), gl_order(n, q).into())
}

/// Punctual factor `sum_n |NC_n(F)| / |GL_n(F)| x^n` for `n <= n_max`.
fn punctual<F: FiniteField>(field: F, n_max: usize) -> Result<Vec<BigRational>> {
    let q = field.order() as u64;
    let mut out = vec![BigRational::one()];
    for n in 1..=n_max {
        out.push(ratio(count_nilpotent_bruteforce(field, n)?, n, q));
    }
    Ok(out)
}

fn mul_truncated(a: &[BigRational], b: &[BigRational], n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Compares the commuting-variety count series at `q` with the product over
/// closed points of the nilpotent (punctual) count series, through `x^N`.
pub fn power_structure_check(q: u32, n: usize) -> Result<PowerStructureReport> {
    if q != 2 || n > 2 {
        return Err(infeasible(format!(
            "power structure check is available for q = 2 and N <= 2 only (got q = {q}, N = {n})"
        )));
    }
    let base = PrimeField::new(q)?;
    let q64 = q as u64;
    let points = closed_point_counts(n.max(1) as u32, q64)?;
    let mut left = vec![BigRational::one()];
    for m in 1..=n {
        left.push(ratio(count_commuting_kernel(base, m)?, m, q64));
    }
    let mut right = vec![BigRational::one()];
    right.resize(n + 1, BigRational::zero());
    for (d, count) in points.iter().enumerate().map(|(i, c)| (i + 1, c)) {
        if d > n {
            break;
        }
        let local = match d {
            1 => punctual(base, n)?,
            2 => punctual(F4, n / 2)?,
            _ => unreachable!("N <= 2"),
        };
        // substitute x -> x^d
        let mut factor = vec![BigRational::zero(); n + 1];
        for (k, c) in local.into_iter().enumerate() {
            if k * d <= n {
                factor[k * d] = c;
            }
        }
        let exponent: u64 = count
            .try_into()
            .map_err(|_| Error::Infeasible("too many closed points".into()))?;
        for _ in 0..exponent {
            right = mul_truncated(&right, &factor, n);
        }
    }
    Ok(PowerStructureReport {
        q: q64,
        n,
        closed_points: points.iter().map(|p| p.try_into().unwrap_or(u64::MAX)).collect(),
        equal: left == right,
        left,
        right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_points_of_the_plane() {
        let two = closed_point_counts(2, 2).unwrap();
        assert_eq!(two, vec![BigUint::from(4u32), BigUint::from(6u32)]);
        let three = closed_point_counts(3, 3).unwrap();
        assert_eq!(three[2], BigUint::from(240u32));
        assert!(closed_point_counts(0, 2).is_err());
    }

    #[test]
    fn power_structure_holds_at_two() {
        let r = power_structure_check(2, 2).unwrap();
        assert_eq!(r.left[0], BigRational::one());
        assert_eq!(r.left[1], BigRational::from_integer(4.into()));
        assert!(r.equal, "{r:?}");
        assert!(matches!(power_structure_check(3, 2), Err(Error::Infeasible(_))));
    }
}

//! Univariate polynomials and rational functions in `u` over the rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Polynomial in `u`, coefficients from the constant term upward, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly(Vec<BigRational>);

impl UPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn one() -> Self {
        UPoly(vec![BigRational::one()])
    }

    /// `u^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigRational::zero(); k + 1];
        c[k] = BigRational::one();
        UPoly(c)
    }

    /// `u^k - 1`.
    pub fn power_minus_one(k: usize) -> Self {
        let mut c = UPoly::monomial(k).0;
        c[0] -= BigRational::one();
        UPoly::new(c)
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.0.len().max(other.0.len());
        let zero = BigRational::zero();
        UPoly::new(
            (0..len)
                .map(|i| self.0.get(i).unwrap_or(&zero) + other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        UPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.leading().recip();
        let mut rem = self.0.clone();
        let mut quot = vec![BigRational::zero(); self.0.len().saturating_sub(d)];
        while rem.len() > d {
            let k = rem.len() - 1 - d;
            let c = rem.last().expect("nonempty") * &lead_inv;
            for (i, b) in divisor.0.iter().enumerate() {
                rem[k + i] -= &c * b;
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (UPoly::new(quot), UPoly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let l = a.leading().recip();
        a.scale(&l)
    }

    pub fn eval(&self, u: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * u + c)
    }
}

/// A rational function `num / den` in lowest terms with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: UPoly,
    den: UPoly,
}

impl RationalFunction {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RationalFunction {
                num,
                den: UPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let l = den.leading().recip();
        RationalFunction {
            num: num.scale(&l),
            den: den.scale(&l),
        }
    }

    pub fn zero() -> Self {
        RationalFunction::new(UPoly::zero(), UPoly::one())
    }

    pub fn numerator(&self) -> &UPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UPoly {
        &self.den
    }

    pub fn add(&self, other: &Self) -> Self {
        RationalFunction::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalFunction::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    /// Value at `u`, or `None` at a pole.
    pub fn eval(&self, u: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(u);
        (!d.is_zero()).then(|| self.num.eval(u) / d)
    }

    /// Laurent expansion at `u = infinity`, keeping exponents `>= min_exponent`.
    pub fn expand_at_infinity(&self, min_exponent: i64) -> BTreeMap<i64, BigRational> {
        let mut out = BTreeMap::new();
        let (Some(a), Some(b)) = (self.num.degree(), self.den.degree()) else {
            return out;
        };
        let top = a as i64 - b as i64;
        if top < min_exponent {
            return out;
        }
        // in w = 1/u: num/u^a and den/u^b are polynomials in w with reversed coefficients
        let n_rev: Vec<BigRational> = self.num.0.iter().rev().cloned().collect();
        let d_rev: Vec<BigRational> = self.den.0.iter().rev().cloned().collect();
        let terms = (top - min_exponent + 1) as usize;
        let d0_inv = d_rev[0].recip();
        let mut series: Vec<BigRational> = Vec::with_capacity(terms);
        for k in 0..terms {
            let mut c = n_rev.get(k).cloned().unwrap_or_else(BigRational::zero);
            for j in 1..=k.min(d_rev.len() - 1) {
                c -= &d_rev[j] * &series[k - j];
            }
            series.push(c * &d0_inv);
        }
        for (k, c) in series.into_iter().enumerate() {
            if !c.is_zero() {
                out.insert(top - k as i64, c);
            }
        }
        out
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})u")?,
                _ => write!(f, "({c})u^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}

//! Arbitrary-precision integers and rationals, and their JSON encoding.
//!
//! Integers are written as plain JSON numbers of any size, rationals as
//! `{"numerator": n, "denominator": d}` in lowest terms with `d > 0`.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn big_pow(base: u64, exp: u32) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

pub fn rational_from_ints(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn rational_from_uint(x: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

/// Exact integer value of `x`, if it is one.
pub fn as_integer(x: &BigRational) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

pub fn rational_pow(x: &BigRational, exp: i64) -> BigRational {
    if exp >= 0 {
        num_traits::pow(x.clone(), exp as usize)
    } else {
        num_traits::pow(x.recip(), (-exp) as usize)
    }
}

fn number_from_decimal<E: serde::ser::Error>(s: &str) -> Result<serde_json::Number, E> {
    serde_json::Number::from_str(s).map_err(E::custom)
}

/// `#[serde(with = "big_uint")]` for [`BigUint`] fields.
pub mod big_uint {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        number_from_decimal::<S::Error>(&x.to_string())?.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        use serde::de::Error as _;
        let n = serde_json::Number::deserialize(d)?;
        BigUint::from_str(&n.to_string()).map_err(D::Error::custom)
    }
}

/// `#[serde(with = "big_int")]` for [`BigInt`] fields.
pub mod big_int {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        number_from_decimal::<S::Error>(&x.to_string())?.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        use serde::de::Error as _;
        let n = serde_json::Number::deserialize(d)?;
        BigInt::from_str(&n.to_string()).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    #[serde(with = "big_int")]
    numerator: BigInt,
    #[serde(with = "big_int")]
    denominator: BigInt,
}

/// `#[serde(with = "rational")]` for [`BigRational`] fields.
pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        RationalRepr {
            numerator: x.numer().clone(),
            denominator: x.denom().clone(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        use serde::de::Error as _;
        let r = RationalRepr::deserialize(d)?;
        if r.denominator.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(BigRational::new(r.numerator, r.denominator))
    }
}

/// `#[serde(with = "rational_vec")]` for `Vec<BigRational>` fields.
pub mod rational_vec {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Item(#[serde(with = "super::rational")] BigRational);

    pub fn serialize<S: Serializer>(xs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(|x| Item(x.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Ok(Vec::<Item>::deserialize(d)?.into_iter().map(|i| i.0).collect())
    }
}

/// Wrapper giving a [`BigRational`] the JSON encoding of this module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonRational(#[serde(with = "rational")] pub BigRational);

impl From<BigRational> for JsonRational {
    fn from(x: BigRational) -> Self {
        JsonRational(x)
    }
}

pub fn one() -> BigRational {
    BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Sample {
        #[serde(with = "big_uint")]
        count: BigUint,
        #[serde(with = "rational")]
        ratio: BigRational,
    }

    #[test]
    fn huge_integers_stay_plain_numbers() {
        let s = Sample {
            count: big_pow(47, 14),
            ratio: rational_from_ints(-6, 4),
        };
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(
            text,
            format!(
                "{{\"count\":{},\"ratio\":{{\"numerator\":-3,\"denominator\":2}}}}",
                big_pow(47, 14)
            )
        );
        let back: Sample = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn small_counts_render_like_machine_integers() {
        let s = Sample {
            count: BigUint::from(4u32),
            ratio: rational_from_ints(4, 1),
        };
        assert!(serde_json::to_string(&s).unwrap().starts_with("{\"count\":4,"));
    }
}

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};

/// A finite field whose elements are encoded as integers `0..order()`.
///
/// The encoding is a bijection, so enumerating `0..order()` enumerates the field.
/// Zero is always encoded as `0` and one as `1`.
pub trait FiniteField: Copy + Debug + Eq + Send + Sync {
    fn order(&self) -> u32;
    fn characteristic(&self) -> u32;
    fn add(&self, a: u32, b: u32) -> u32;
    fn neg(&self, a: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: u32) -> Option<u32>;

    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Image of an integer under the canonical map from the integers.
    fn from_int(&self, k: i64) -> u32 {
        let p = self.characteristic() as i64;
        let r = k.rem_euclid(p) as u32;
        // prime subfield elements are encoded by their residue in both implementations
        r
    }

    fn elements(&self) -> std::ops::Range<u32> {
        0..self.order()
    }
}

/// The prime field of integers modulo `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(precondition(format!("modulus {p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

impl TryFrom<u32> for PrimeField {
    type Error = crate::Error;

    fn try_from(p: u32) -> Result<Self> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u32 {
    fn from(f: PrimeField) -> u32 {
        f.p
    }
}

impl FiniteField for PrimeField {
    fn order(&self) -> u32 {
        self.p
    }

    fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    fn inv(&self, a: u32) -> Option<u32> {
        if a % self.p == 0 {
            return None;
        }
        Some(self.pow(a, self.p as u64 - 2))
    }
}

/// The field with four elements, `F_2[z]/(z^2 + z + 1)`.
///
/// The element `a + b z` is encoded as `a + 2b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct F4;

const F4_MUL: [[u32; 4]; 4] = [
    [0, 0, 0, 0],
    [0, 1, 2, 3],
    // z*z = z + 1, z*(1+z) = 1
    [0, 2, 3, 1],
    [0, 3, 1, 2],
];

impl FiniteField for F4 {
    fn order(&self) -> u32 {
        4
    }

    fn characteristic(&self) -> u32 {
        2
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        a
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        F4_MUL[a as usize][b as usize]
    }

    fn inv(&self, a: u32) -> Option<u32> {
        match a {
            0 => None,
            1 => Some(1),
            2 => Some(3),
            _ => Some(2),
        }
    }
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes in increasing order starting from 2.
pub fn primes() -> impl Iterator<Item = u32> {
    (2u32..).filter(|&n| is_prime(n as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_modulus() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(0).is_err());
        assert!(PrimeField::new(7).is_ok());
    }

    #[test]
    fn prime_field_inverses() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.inv(0), None);
    }

    #[test]
    fn f4_is_a_field() {
        let f = F4;
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in f.elements() {
                    assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
        // z generates the cyclic group of order 3
        assert_eq!(f.mul(2, f.mul(2, 2)), 1);
    }

    #[test]
    fn first_primes() {
        let ps: Vec<u32> = primes().take(6).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13]);
    }
}

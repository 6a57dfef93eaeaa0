use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exact field with a runtime-chosen representation.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_i64(&self, n: i64) -> Self::Elem;

    /// `a - c*b`, the inner step of elimination.
    fn sub_mul(&self, a: &Self::Elem, c: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(c, b))
    }
}

/// The prime field F_p with residues stored as `u32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not a supported prime")));
        }
        Ok(Fp { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn addm(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let p = self.p as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    pub fn subm(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.p as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn mulm(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn negm(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// `(-1)^e` as a residue.
    #[inline]
    pub fn sign(&self, e: i64) -> u32 {
        if e.rem_euclid(2) == 0 {
            1
        } else {
            self.p - 1
        }
    }

    pub fn powm(&self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1u32 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mulm(r, a);
            }
            a = self.mulm(a, a);
            e >>= 1;
        }
        r
    }

    pub fn invm(&self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.powm(a, self.p as u64 - 2))
        }
    }

    /// Symmetric lift to (-p/2, p/2], used for display.
    pub fn centered(&self, a: u32) -> i64 {
        if a as u64 * 2 > self.p as u64 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl TryFrom<u32> for Fp {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Fp::new(p)
    }
}

impl From<Fp> for u32 {
    fn from(f: Fp) -> u32 {
        f.p
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n as u64 {
        if (n as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for Fp {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.addm(*a, *b)
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.subm(*a, *b)
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.mulm(*a, *b)
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        self.negm(*a)
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        self.invm(*a)
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn from_i64(&self, n: i64) -> u32 {
        self.reduce_i64(n)
    }
    #[inline]
    fn sub_mul(&self, a: &u32, c: &u32, b: &u32) -> u32 {
        let p = self.p as u64;
        let prod = (*c as u64 * *b as u64) % p;
        ((*a as u64 + p - prod) % p) as u32
    }
}

/// The rationals, backed by arbitrary-precision fractions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert!(Fp::new(9).is_err());
        assert!(Fp::new(1).is_err());
        assert!(Fp::new(7).is_ok());
    }

    #[test]
    fn inverses_mod_seven() {
        let f = Fp::new(7).unwrap();
        for a in 1..7 {
            let b = f.invm(a).unwrap();
            assert_eq!(f.mulm(a, b), 1);
        }
        assert_eq!(f.invm(0), None);
    }

    #[test]
    fn signs() {
        let f = Fp::new(5).unwrap();
        assert_eq!(f.sign(3), 4);
        assert_eq!(f.sign(-2), 1);
        assert_eq!(f.centered(4), -1);
    }
}

//! Prime fields `F_p` for small `p`.
//!
//! [`PrimeField`] is the field descriptor; raw residues (`u32` in `[0, p)`)
//! are what the linear-algebra engine works with. [`FieldElement`] bundles a
//! residue with its descriptor so that mixing characteristics is caught.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest characteristic accepted. Products of two residues must fit in `u32`.
pub const MAX_CHARACTERISTIC: u32 = 65_521;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=MAX_CHARACTERISTIC).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidCharacteristic(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn characteristic(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn order(self) -> u64 {
        self.p as u64
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        a * b % self.p
    }

    /// `a + b*c`
    #[inline]
    pub fn mul_add(self, a: u32, b: u32, c: u32) -> u32 {
        (a + b * c) % self.p
    }

    pub fn inv(self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero);
        }
        // Fermat: a^(p-2)
        Ok(self.pow(a, self.p - 2))
    }

    pub fn pow(self, mut base: u32, mut exp: u32) -> u32 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn element(self, v: i64) -> FieldElement {
        FieldElement {
            value: self.reduce(v),
            field: self,
        }
    }

    pub fn zero(self) -> FieldElement {
        self.element(0)
    }

    pub fn one(self) -> FieldElement {
        self.element(1)
    }

    /// All elements `0, 1, …, p-1`.
    pub fn elements(self) -> impl Iterator<Item = FieldElement> {
        (0..self.p).map(move |v| FieldElement {
            value: v,
            field: self,
        })
    }

    /// Residue written as a signed integer in `(-p/2, p/2]`.
    pub fn signed(self, a: u32) -> i64 {
        if a as u64 * 2 > self.p as u64 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl TryFrom<u32> for PrimeField {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u32 {
    fn from(f: PrimeField) -> u32 {
        f.p
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A residue together with the field it lives in.
///
/// The `std::ops` impls panic when characteristics differ; use the
/// `checked_*` methods where the operands come from untrusted input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    field: PrimeField,
}

impl FieldElement {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field(self) -> PrimeField {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_field(self, other: FieldElement) -> Result<PrimeField> {
        if self.field != other.field {
            return Err(Error::CharacteristicMismatch {
                left: self.field.p,
                right: other.field.p,
            });
        }
        Ok(self.field)
    }

    pub fn checked_add(self, other: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(other)?;
        Ok(FieldElement {
            value: f.add(self.value, other.value),
            field: f,
        })
    }

    pub fn checked_sub(self, other: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(other)?;
        Ok(FieldElement {
            value: f.sub(self.value, other.value),
            field: f,
        })
    }

    pub fn checked_mul(self, other: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(other)?;
        Ok(FieldElement {
            value: f.mul(self.value, other.value),
            field: f,
        })
    }

    pub fn inv(self) -> Result<FieldElement> {
        Ok(FieldElement {
            value: self.field.inv(self.value)?,
            field: self.field,
        })
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.checked_add(rhs).expect("characteristic mismatch")
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.checked_sub(rhs).expect("characteristic mismatch")
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.checked_mul(rhs).expect("characteristic mismatch")
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_identities() {
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!((f2.one() + f2.one()).value(), 0);
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(f3.element(2).inv().unwrap().value(), 2);
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!((f5.element(3) * f5.element(4)).value(), 2);
    }

    #[test]
    fn zero_has_no_inverse() {
        let f = PrimeField::new(7).unwrap();
        let err = f.zero().inv().unwrap_err();
        assert_eq!(err.to_string(), "division by zero in F_p");
    }

    #[test]
    fn rejects_composite_and_mixing() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        let a = PrimeField::new(2).unwrap().one();
        let b = PrimeField::new(3).unwrap().one();
        assert!(matches!(
            a.checked_add(b),
            Err(Error::CharacteristicMismatch { .. })
        ));
    }

    #[test]
    fn axioms_exhaustive_small_p() {
        for p in [2u32, 3, 5] {
            let f = PrimeField::new(p).unwrap();
            for a in f.elements() {
                assert!((a + (-a)).is_zero());
                if !a.is_zero() {
                    assert_eq!((a * a.inv().unwrap()).value(), 1);
                    assert_eq!(a.inv().unwrap().inv().unwrap(), a);
                }
                for b in f.elements() {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    for c in f.elements() {
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }
}

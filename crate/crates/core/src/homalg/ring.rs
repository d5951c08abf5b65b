use std::fmt::{self, Debug};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients for chain-level elimination.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn is_unit(&self) -> bool;

    /// Inverse of a unit. Callers must check `is_unit` first.
    fn unit_inverse(&self) -> Self;

    fn from_int(v: &BigInt) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_int(&BigInt::from(v))
    }
}

pub trait Field: Coefficient {
    fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        self.unit_inverse()
    }
}

impl Coefficient for BigInt {
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }

    fn unit_inverse(&self) -> Self {
        self.clone()
    }

    fn from_int(v: &BigInt) -> Self {
        v.clone()
    }
}

impl Coefficient for BigRational {
    fn is_unit(&self) -> bool {
        !self.is_zero()
    }

    fn unit_inverse(&self) -> Self {
        self.recip()
    }

    fn from_int(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
}

impl Field for BigRational {}

/// The field with two elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct F2(pub bool);

impl Debug for F2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 as u8)
    }
}

// addition is xor and multiplication is and in F2
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for F2 {
    type Output = F2;
    fn add(self, o: F2) -> F2 {
        F2(self.0 ^ o.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Sub for F2 {
    type Output = F2;
    fn sub(self, o: F2) -> F2 {
        F2(self.0 ^ o.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for F2 {
    type Output = F2;
    fn mul(self, o: F2) -> F2 {
        F2(self.0 & o.0)
    }
}

impl Neg for F2 {
    type Output = F2;
    fn neg(self) -> F2 {
        self
    }
}

impl Zero for F2 {
    fn zero() -> Self {
        F2(false)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
}

impl One for F2 {
    fn one() -> Self {
        F2(true)
    }
}

impl Coefficient for F2 {
    fn is_unit(&self) -> bool {
        self.0
    }

    fn unit_inverse(&self) -> Self {
        *self
    }

    fn from_int(v: &BigInt) -> Self {
        F2(v.bit(0))
    }

    fn from_i64(v: i64) -> Self {
        F2(v & 1 == 1)
    }
}

impl Field for F2 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_from_negative_ints() {
        assert_eq!(F2::from_int(&BigInt::from(-3)), F2(true));
        assert_eq!(F2::from_int(&BigInt::from(-2)), F2(false));
    }

    #[test]
    fn integer_units() {
        assert!(BigInt::from(-1).is_unit());
        assert!(!BigInt::from(2).is_unit());
        assert!(!BigInt::zero().is_unit());
    }
}

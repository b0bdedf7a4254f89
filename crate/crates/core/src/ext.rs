//! Nonnegative extended reals with the arithmetic conventions
//! `1/∞ = 0`, `0/0 = 0` and `0·∞ = 0`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Serialize, Serializer};

use crate::scalar::Scalar;

/// A value in `[0, +∞]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ExtReal<T>(T);

impl<T: Scalar> ExtReal<T> {
    pub fn new(value: T) -> Self {
        debug_assert!(!value.is_nan(), "ExtReal cannot hold NaN");
        ExtReal(value)
    }

    pub fn zero() -> Self {
        ExtReal(T::zero())
    }

    pub fn infinity() -> Self {
        ExtReal(T::infinity())
    }

    pub fn value(self) -> T {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_zero(self) -> bool {
        self.0 == T::zero()
    }

    /// `self^e` with `0^e = ∞` for `e < 0`, `∞^e = 0` for `e < 0` and `x^0 = 1`.
    pub fn powf(self, e: T) -> Self {
        ExtReal(pow_conv(self.0, e))
    }

    /// Quotient under the conventions `x/∞ = 0` and `0/0 = 0`.
    pub fn div(self, rhs: Self) -> Self {
        ExtReal(div_conv(self.0, rhs.0))
    }

    pub fn max(self, rhs: Self) -> Self {
        if self.0 >= rhs.0 {
            self
        } else {
            rhs
        }
    }

    pub fn to_f64(self) -> f64 {
        self.0.as_f64()
    }

    /// Relative distance `|a-b| / max(|a|,|b|)`, zero when both are infinite.
    pub fn rel_diff(self, other: Self) -> T {
        rel_diff(self.0, other.0)
    }
}

impl<T: Scalar> Add for ExtReal<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ExtReal(self.0 + rhs.0)
    }
}

impl<T: Scalar> Mul for ExtReal<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        ExtReal(mul_conv(self.0, rhs.0))
    }
}

impl<T: Scalar> PartialOrd for ExtReal<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl<T: Scalar> From<T> for ExtReal<T> {
    fn from(v: T) -> Self {
        ExtReal::new(v)
    }
}

impl<T: Scalar> fmt::Display for ExtReal<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Infinite values serialize as the string `"inf"`.
impl<T: Scalar> Serialize for ExtReal<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0.as_f64())
        }
    }
}

/// `a·b` with `0·∞ = 0`.
#[inline]
pub fn mul_conv<T: Scalar>(a: T, b: T) -> T {
    if a == T::zero() || b == T::zero() {
        T::zero()
    } else {
        a * b
    }
}

/// `a/b` with `0/0 = 0` and `x/∞ = 0`.
#[inline]
pub fn div_conv<T: Scalar>(a: T, b: T) -> T {
    if a == T::zero() || (b.is_infinite() && a.is_finite()) {
        T::zero()
    } else if b == T::zero() {
        T::infinity()
    } else {
        a / b
    }
}

/// `Π x_i^{e_i}` for `x_i ∈ [0, ∞]`, formed in logarithms so that huge and
/// tiny factors do not overflow or underflow on the way. A vanishing factor
/// wins over an infinite one (`0·∞ = 0`); `x^0 = 1`.
pub fn prod_pow<T: Scalar>(factors: &[(T, T)]) -> T {
    let mut l = T::zero();
    let mut inf = false;
    for &(x, e) in factors {
        if e == T::zero() {
            continue;
        }
        let zero = (x == T::zero() && e > T::zero()) || (x.is_infinite() && e < T::zero());
        if zero {
            return T::zero();
        }
        if x == T::zero() || x.is_infinite() {
            inf = true;
            continue;
        }
        l = l + e * x.ln();
    }
    if inf {
        T::infinity()
    } else {
        l.exp()
    }
}

/// `x^e` for `x ∈ [0, ∞]` with `x^0 = 1`.
#[inline]
pub fn pow_conv<T: Scalar>(x: T, e: T) -> T {
    if e == T::zero() {
        T::one()
    } else if x == T::zero() {
        if e > T::zero() {
            T::zero()
        } else {
            T::infinity()
        }
    } else if x.is_infinite() {
        if e > T::zero() {
            T::infinity()
        } else {
            T::zero()
        }
    } else {
        x.powf(e)
    }
}

pub fn rel_diff<T: Scalar>(a: T, b: T) -> T {
    if a == b {
        return T::zero();
    }
    if a.is_infinite() || b.is_infinite() {
        return T::infinity();
    }
    (a - b).abs() / a.abs().max(b.abs())
}

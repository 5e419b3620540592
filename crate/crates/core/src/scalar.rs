//! Scalar abstraction for the LP machinery.
//!
//! The simplex tableau and the branch-and-bound search are generic over the
//! scalar type: `f64` with a 1e-9 comparison tolerance is the production
//! instantiation, and `BigRational` gives an exact mode used as a test
//! oracle on small models (a few hundred variables at most). Concrete
//! aliases live at the crate root.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait LpScalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Signed
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn from_ratio(num: i64, den: u64) -> Self;

    /// Comparison tolerance; exact types return zero.
    fn tolerance() -> Self;

    fn to_f64_lossy(&self) -> f64;

    /// Largest integer at most `self + tolerance`; bounds on an integral
    /// objective can be tightened with this.
    fn floor_with_tolerance(&self) -> i64;

    fn is_zero_approx(&self) -> bool {
        self.abs() <= Self::tolerance()
    }

    /// `self > other` beyond the tolerance.
    fn gt_approx(&self, other: &Self) -> bool {
        self.clone() - other.clone() > Self::tolerance()
    }

    /// Within tolerance of the given integer.
    fn is_near(&self, value: i64) -> bool {
        (self.clone() - Self::from_ratio(value, 1)).is_zero_approx()
    }
}

impl LpScalar for f64 {
    fn from_ratio(num: i64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn tolerance() -> Self {
        1e-9
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }

    fn floor_with_tolerance(&self) -> i64 {
        (self + Self::tolerance()).floor() as i64
    }
}

impl LpScalar for BigRational {
    fn from_ratio(num: i64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn tolerance() -> Self {
        BigRational::zero()
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn floor_with_tolerance(&self) -> i64 {
        self.floor()
            .to_integer()
            .to_i64()
            .expect("objective fits in i64")
    }
}

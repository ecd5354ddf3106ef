//! Scalar abstractions.
//!
//! Combinatorial and density code only needs field arithmetic, so it is
//! written against [`Scalar`], which exact rationals also satisfy.
//! Eigen-solvers and samplers need square roots and transcendental
//! functions and use [`Real`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug + Send + Sync + ToPrimitive + 'static {
    /// Relative rounding unit; zero for exact types.
    fn unit_roundoff() -> f64;

    fn from_f64_lossy(x: f64) -> Option<Self>;

    fn from_count(n: usize) -> Self;

    /// `a / b` for integer counts.
    fn ratio(a: usize, b: usize) -> Self {
        Self::from_count(a) / Self::from_count(b)
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn unit_roundoff() -> f64 {
                <$t>::EPSILON as f64
            }
            fn from_f64_lossy(x: f64) -> Option<Self> {
                x.is_finite().then_some(x as $t)
            }
            fn from_count(n: usize) -> Self {
                n as $t
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for Rational64 {
    fn unit_roundoff() -> f64 {
        0.0
    }
    fn from_f64_lossy(x: f64) -> Option<Self> {
        Rational64::from_f64(x)
    }
    fn from_count(n: usize) -> Self {
        Rational64::from_integer(n as i64)
    }
}

impl Scalar for BigRational {
    fn unit_roundoff() -> f64 {
        0.0
    }
    fn from_f64_lossy(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }
    fn from_count(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

/// Floating-point scalars.
pub trait Real: Scalar + Float + Copy + std::iter::Sum {}

impl Real for f32 {}
impl Real for f64 {}

pub(crate) fn abs_diff<T: Scalar>(a: &T, b: &T) -> T {
    (a.clone() - b.clone()).abs()
}

pub(crate) fn max_of<T: Scalar>(values: impl IntoIterator<Item = T>) -> T {
    values
        .into_iter()
        .fold(T::zero(), |acc, v| if v > acc { v } else { acc })
}

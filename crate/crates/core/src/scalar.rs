use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the model and invariant algebra are written against.
///
/// Implemented for `f32` and `f64`. `FromStr` and `Display` are required so the
/// CSV loader and the model DSL can parse and render values without going
/// through an intermediate `f64`.
pub trait Scalar:
    Float + FromPrimitive + FromStr + Debug + Display + Default + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + FromStr + Debug + Display + Default + Send + Sync + 'static
{
}

/// Converts an `f64` literal into `T`.
#[inline]
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Numerically stable `ln(e^a + e^b)`.
#[inline]
pub(crate) fn log_add_exp<T: Scalar>(a: T, b: T) -> T {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == T::neg_infinity() {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `|e^d - 1|`, the relative deviation between two quantities whose logs differ by `d`.
#[inline]
pub(crate) fn rel_from_log_diff<T: Scalar>(d: T) -> T {
    d.exp_m1().abs()
}

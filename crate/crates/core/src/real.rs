use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Scalar type used by every routine of the crate.
///
/// Blanket-implemented for any float with the usual conversions, so both `f64`
/// and extended-precision types such as `twofloat::TwoFloat` qualify.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + From<f64> + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal exactly.
    ///
    /// Goes through `From<f64>`: some extended types inherit the truncating
    /// default of `FromPrimitive::from_f64`.
    fn lit(v: f64) -> Self {
        <Self as From<f64>>::from(v)
    }

    fn from_usize_lossy(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("count representable")
    }

    fn from_i64_lossy(n: i64) -> Self {
        <Self as FromPrimitive>::from_i64(n).expect("integer representable")
    }

    /// Nearest `f64`, used for reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float + FromPrimitive + ToPrimitive + From<f64> + Debug + Display + Send + Sync + 'static
{
}

/// Neumaier-compensated running sum; terms are accumulated in insertion order.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CompensatedSum<T> {
    sum: T,
    comp: T,
}

impl<T: Real> CompensatedSum<T> {
    pub(crate) fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    pub(crate) fn add(&mut self, v: T) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp = self.comp + ((self.sum - t) + v);
        } else {
            self.comp = self.comp + ((v - t) + self.sum);
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> T {
        self.sum + self.comp
    }
}

/// `|a - b| / scale`, with a zero scale treated as exact agreement when `a == b`.
pub fn scaled_difference<T: Real>(a: T, b: T, scale: T) -> T {
    let diff = (a - b).abs();
    if diff == T::zero() {
        return T::zero();
    }
    if scale == T::zero() {
        return T::infinity();
    }
    diff / scale.abs()
}

/// Relative difference `|a - b| / max(|a|, |b|)`.
pub fn relative_difference<T: Real>(a: T, b: T) -> T {
    scaled_difference(a, b, a.abs().max(b.abs()))
}

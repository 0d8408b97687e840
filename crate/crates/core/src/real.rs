//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Floating point scalar the laboratory computes in: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Default + Debug + Display + Send + Sync
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Converts a count into the working scalar.
#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Japanese bracket `sqrt(1 + x^2)`.
#[inline]
pub fn bracket<T: Real>(x: T) -> T {
    (T::one() + x * x).sqrt()
}

/// Euclidean length of a planar vector.
#[inline]
pub fn norm2<T: Real>(v: [T; 2]) -> T {
    v[0].hypot(v[1])
}

/// Pairwise (cascade) summation in a fixed order, so results do not depend
/// on how the caller partitioned the work.
pub fn pairwise_sum<T: Real>(values: &[T]) -> T {
    const LEAF: usize = 64;
    if values.len() <= LEAF {
        return values.iter().fold(T::zero(), |acc, &v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Smallest power of two that is `>= x` (and at least 1), saturating at `2^63`.
pub fn dyadic_ceil<T: Real>(x: T) -> u64 {
    let mut d: u64 = 1;
    while d < 1 << 63 && lit::<T>(d as f64) < x {
        d <<= 1;
    }
    d
}

/// Largest power of two that is `<= x`, for `x >= 1`.
pub fn dyadic_floor<T: Real>(x: T) -> u64 {
    debug_assert!(x >= T::one());
    let mut d: u64 = 1;
    while d < 1 << 62 && lit::<T>((d << 1) as f64) <= x {
        d <<= 1;
    }
    d
}

/// Largest dyadic `d` with `d^2 <= x2`; `x2 >= 1`.
pub fn dyadic_floor_sq<T: Real>(x2: T) -> u64 {
    let mut d: u64 = 1;
    while d < 1 << 31 && lit::<T>(((d << 1) * (d << 1)) as f64) <= x2 {
        d <<= 1;
    }
    d
}

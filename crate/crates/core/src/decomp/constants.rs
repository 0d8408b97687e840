//! Dyadic constants shared by every geometric checker.

use crate::error::Result;
use crate::real::{dyadic_ceil, lit, Real};

use super::check_speed;

/// Constants that depend only on the wave speed `c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants<T> {
    pub c: T,
}

impl<T: Real> Constants<T> {
    pub fn new(c: T) -> Result<Self> {
        check_speed(c)?;
        Ok(Self { c })
    }

    fn gap(&self) -> T {
        T::one() - self.c
    }

    /// `M0`: minimal dyadic `≥ N0^{1/2}`.
    pub fn m0(&self, n0: T) -> u64 {
        dyadic_ceil(n0.sqrt())
    }

    /// `M1`: minimal dyadic `≥ 2^7 (1-c)^{-1/2} (|ξ1||ξ2|)^{1/2} / |ξ|`.
    pub fn m1(&self, r1: T, r2: T, r: T) -> u64 {
        let x = lit::<T>(128.0) * (r1 * r2).sqrt() / (self.gap().sqrt() * r);
        dyadic_ceil(x)
    }

    /// `A1`: minimal dyadic `≥ 2^20 (1-c)^{-2} A`.
    pub fn a1(&self, a: u64) -> u64 {
        dyadic_ceil(lit::<T>(1048576.0) * lit::<T>(a as f64) / self.gap().powi(2))
    }

    /// Shell thickness `δ = 2^{-20}(1-c)^2 N0 A^{-1/2}`.
    pub fn delta(&self, n0: T, a: u64) -> T {
        lit::<T>(2f64.powi(-20)) * self.gap().powi(2) * n0 / lit::<T>(a as f64).sqrt()
    }

    /// `k`: minimal dyadic `≥ 2^20 (1-c)^{-2}`.
    pub fn k(&self) -> u64 {
        dyadic_ceil(lit::<T>(1048576.0) / self.gap().powi(2))
    }

    /// Sector level for the directional-derivative bound, minimal dyadic
    /// `≥ 2^10 (1-c)^{-1/2}`.
    pub fn derivative_level(&self) -> u64 {
        dyadic_ceil(lit::<T>(1024.0) / self.gap().sqrt())
    }

    /// Smallness threshold `(1-c) / (2(1+c))` of the opposite-sign case.
    pub fn smallness_ratio(&self) -> T {
        self.gap() / (lit::<T>(2.0) * (T::one() + self.c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_half_speed() {
        let k = Constants::new(0.5f64).unwrap();
        assert_eq!(k.m0(64.0), 8);
        assert_eq!(k.m0(65.0), 16);
        assert_eq!(k.k(), 1 << 22);
        assert_eq!(k.a1(64), 1 << 28);
        assert_eq!(k.derivative_level(), 2048);
        assert!((k.delta(1.0, 64) - 2f64.powi(-25)).abs() < 1e-20);
        // 2^7 · sqrt(2) · 1 / 1 → 181.02 → 256.
        assert_eq!(k.m1(1.0, 1.0, 1.0), 256);
        assert!((k.smallness_ratio() - 1.0 / 6.0).abs() < 1e-15);
        assert!(Constants::new(1.0f64).is_err());
    }
}

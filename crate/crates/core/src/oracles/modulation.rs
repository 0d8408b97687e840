//! Modulation lower bounds.

use serde::{Deserialize, Serialize};

use crate::decomp::{check_speed, Constants, Sign};
use crate::error::{LabError, Result};
use crate::real::{bracket, lit, Real};

/// Constant in `max⟨·⟩ ≥ κ·|A - B - C|`.
///
/// The three brackets `A, B, C` can share the difference equally, so the
/// best constant from the triangle inequality is `1/3`. With `κ = 1` the
/// bounds fail on an open set (see the tests).
pub const MODULATION_KAPPA: f64 = 1.0 / 3.0;

/// Interacting frequencies `(τ1, ξ1)`, `(τ2, ξ2)`; the output `(τ, ξ)` is
/// always recomputed as their sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulationSample<T> {
    pub tau1: T,
    pub tau2: T,
    pub xi1: [T; 2],
    pub xi2: [T; 2],
    pub sign0: Sign,
    pub sign1: Sign,
    pub sign2: Sign,
    pub c: T,
}

impl<T: Real> ModulationSample<T> {
    pub fn tau(&self) -> T {
        self.tau1 + self.tau2
    }

    pub fn xi(&self) -> [T; 2] {
        [self.xi1[0] + self.xi2[0], self.xi1[1] + self.xi2[1]]
    }

    /// `max(⟨τ ±0 c|ξ|⟩, ⟨τ1 ±1 |ξ1|⟩, ⟨τ2 ±2 |ξ2|⟩)`.
    pub fn max_modulation(&self) -> T {
        let [x0, x1] = self.xi();
        let r = x0.hypot(x1);
        let r1 = self.xi1[0].hypot(self.xi1[1]);
        let r2 = self.xi2[0].hypot(self.xi2[1]);
        let m0 = bracket(self.tau() + self.sign0.value::<T>() * self.c * r);
        let m1 = bracket(self.tau1 + self.sign1.value::<T>() * r1);
        let m2 = bracket(self.tau2 + self.sign2.value::<T>() * r2);
        m0.max(m1).max(m2)
    }
}

/// `max⟨·⟩ - κ(1-c)(|ξ1| + |ξ2|)` for `sign1 = sign2 = -`.
pub fn same_sign_margin<T: Real>(s: &ModulationSample<T>, kappa: T) -> Result<T> {
    check_speed(s.c)?;
    if s.sign1 != Sign::Minus || s.sign2 != Sign::Minus {
        return Err(LabError::Precondition(
            "same-sign bound is stated for sign1 = sign2 = -".into(),
        ));
    }
    let r1 = s.xi1[0].hypot(s.xi1[1]);
    let r2 = s.xi2[0].hypot(s.xi2[1]);
    Ok(s.max_modulation() - kappa * (T::one() - s.c) * (r1 + r2))
}

pub fn check_same_sign_modulation<T: Real>(s: &ModulationSample<T>) -> Result<T> {
    same_sign_margin(s, lit(MODULATION_KAPPA))
}

/// `max⟨·⟩ - κ(1-c)/2 · max(|ξ1|, |ξ2|)` for `sign1 = -`, `sign2 = +` when
/// one frequency is much smaller than the other.
pub fn opposite_sign_margin<T: Real>(s: &ModulationSample<T>, kappa: T) -> Result<T> {
    let k = Constants::new(s.c)?;
    if s.sign1 != Sign::Minus || s.sign2 != Sign::Plus {
        return Err(LabError::Precondition(
            "opposite-sign bound is stated for sign1 = -, sign2 = +".into(),
        ));
    }
    let r1 = s.xi1[0].hypot(s.xi1[1]);
    let r2 = s.xi2[0].hypot(s.xi2[1]);
    let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    if lo > k.smallness_ratio() * hi {
        return Err(LabError::Precondition(format!(
            "min |ξ| = {lo} exceeds (1-c)/(2(1+c)) · max |ξ|"
        )));
    }
    let half = lit::<T>(0.5);
    Ok(s.max_modulation() - kappa * (T::one() - s.c) * half * hi)
}

pub fn check_opposite_sign_smallness<T: Real>(s: &ModulationSample<T>) -> Result<T> {
    opposite_sign_margin(s, lit(MODULATION_KAPPA))
}

//! Brute-force measure of the sets `E(τ, ξ)` bounding bilinear estimates.
//!
//! Cells are laid out in the sheared variables `(σ, ξ1)` with
//! `σ = τ1 ± |ξ1|`. The shear has unit Jacobian, so the measure of a cell is
//! `Δσ·Δξ²` and the `g`-constraint depends on `σ` alone.

use serde::{Deserialize, Serialize};

use crate::decomp::{sector_index, Constants, Sign};
use crate::error::{LabError, Result};
use crate::real::{from_usize, lit, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EsetMode {
    /// `ξ1` in a column of radius `N_min` around `ξ'`, inside `D_0^A` with
    /// `A` the directional-derivative level; bound `N_min L1 L2`.
    Prop22,
    /// `ξ1` in the annulus `⟨ξ1⟩ ~ N0` inside `D_0^{M0}`; bound
    /// `N0^{1/2} L0 L1`.
    PropN014,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EsetParams<T> {
    pub mode: EsetMode,
    pub c: T,
    /// Sign in `⟨τ - τ1 ± c|ξ - ξ1|⟩`.
    pub sign_f: Sign,
    /// Sign in `⟨τ1 ± |ξ1|⟩`.
    pub sign_g: Sign,
    /// Dyadic modulation of the reduced-speed factor.
    pub l_f: u64,
    /// Dyadic modulation of the full-speed factor.
    pub l_g: u64,
    /// `N_min` for [`EsetMode::Prop22`], `N0` for [`EsetMode::PropN014`].
    pub n: u64,
    /// Distance of the column centre from the origin (column mode only).
    pub column_radius: T,
    /// Cells per axis.
    pub cells: usize,
}

impl<T: Real> EsetParams<T> {
    pub fn prop22(c: T, n_min: u64, l1: u64, l2: u64) -> Self {
        Self {
            mode: EsetMode::Prop22,
            c,
            sign_f: Sign::Plus,
            sign_g: Sign::Plus,
            l_f: l1,
            l_g: l2,
            n: n_min,
            column_radius: lit(65536.0),
            cells: 128,
        }
    }

    pub fn n014(c: T, n0: u64, l0: u64, l1: u64) -> Self {
        Self {
            mode: EsetMode::PropN014,
            c,
            sign_f: Sign::Plus,
            sign_g: Sign::Minus,
            l_f: l0,
            l_g: l1,
            n: n0,
            column_radius: T::zero(),
            cells: 128,
        }
    }

    fn validate(&self) -> Result<Constants<T>> {
        let k = Constants::new(self.c)?;
        for (name, v) in [("L_f", self.l_f), ("L_g", self.l_g), ("N", self.n)] {
            if !v.is_power_of_two() {
                return Err(LabError::InvalidParameter(format!("{name} = {v} is not dyadic")));
            }
        }
        if self.cells == 0 {
            return Err(LabError::InvalidParameter("cells must be positive".into()));
        }
        if self.mode == EsetMode::PropN014 && self.sign_g != Sign::Minus {
            return Err(LabError::InvalidParameter(
                "the N0^{1/2} set uses ⟨τ1 - |ξ1|⟩".into(),
            ));
        }
        Ok(k)
    }

    /// Sector level `A` of the set.
    pub fn sector_level(&self) -> Result<u64> {
        let k = self.validate()?;
        Ok(match self.mode {
            EsetMode::Prop22 => k.derivative_level(),
            EsetMode::PropN014 => k.m0(lit(self.n as f64)),
        })
    }

    /// Scaling bound the measure is compared against.
    pub fn normalizer(&self) -> T {
        let l = lit::<T>((self.l_f * self.l_g) as f64);
        match self.mode {
            EsetMode::Prop22 => lit::<T>(self.n as f64) * l,
            EsetMode::PropN014 => lit::<T>(self.n as f64).sqrt() * l,
        }
    }

    /// Centre of the `ξ1` region: the column centre or the annulus midpoint,
    /// on the bisector of sector 0.
    pub fn anchor(&self) -> Result<[T; 2]> {
        let a = self.sector_level()?;
        let angle = T::PI() / lit::<T>(2.0 * a as f64);
        let r = match self.mode {
            EsetMode::Prop22 => self.column_radius,
            EsetMode::PropN014 => lit::<T>(1.5 * self.n as f64),
        };
        Ok([r * angle.cos(), r * angle.sin()])
    }

    /// Bounding box `[lo, hi]` of the `ξ1` region.
    fn bounding_box(&self, a: u64) -> ([T; 2], [T; 2]) {
        match self.mode {
            EsetMode::Prop22 => {
                let c = self.anchor().unwrap();
                let n = lit::<T>(self.n as f64);
                ([c[0] - n, c[1] - n], [c[0] + n, c[1] + n])
            }
            EsetMode::PropN014 => {
                // sector 0 spans angles [0, π/A); for A = 1 that is a half plane
                let top = lit::<T>(2.0 * self.n as f64);
                let opening = T::PI() / lit::<T>(a as f64);
                let half_pi = T::FRAC_PI_2();
                let left = if opening > half_pi { top * opening.cos() } else { T::zero() };
                let height = if opening >= half_pi { T::one() } else { opening.sin() };
                ([left, T::zero()], [top, top * height])
            }
        }
    }

    fn in_region(&self, xi1: [T; 2], a: u64, anchor: [T; 2]) -> bool {
        if sector_index(xi1, a).map_or(true, |j| j != 0) {
            return false;
        }
        match self.mode {
            EsetMode::Prop22 => {
                let n = lit::<T>(self.n as f64);
                (xi1[0] - anchor[0]).hypot(xi1[1] - anchor[1]) <= n
            }
            EsetMode::PropN014 => {
                let b2 = T::one() + xi1[0] * xi1[0] + xi1[1] * xi1[1];
                let n = lit::<T>(self.n as f64);
                b2 >= n * n && b2 < lit::<T>(4.0) * n * n
            }
        }
    }
}

/// Range of `|x|` with `L ≤ ⟨x⟩ < 2L`, and its midpoint.
fn bracket_band<T: Real>(l: u64) -> (T, T, T) {
    let l = lit::<T>(l as f64);
    let lo = (l * l - T::one()).max(T::zero()).sqrt();
    let hi = (lit::<T>(4.0) * l * l - T::one()).sqrt();
    (lo, hi, (lo + hi) * lit::<T>(0.5))
}

#[inline]
fn in_band<T: Real>(x: T, l2: T, four_l2: T) -> bool {
    let b = T::one() + x * x;
    b >= l2 && b < four_l2
}

/// Measure of `E(τ, ξ)` as a lattice count times the cell measure.
pub fn eset_measure<T: Real>(params: &EsetParams<T>, tau: T, xi: [T; 2]) -> Result<T> {
    let a = params.sector_level()?;
    let anchor = params.anchor()?;
    let (lo, hi) = params.bounding_box(a);
    let n = params.cells;
    let nt = from_usize::<T>(n);
    let two = lit::<T>(2.0);
    let lg = lit::<T>(params.l_g as f64);
    let s_lo = -two * lg;
    let ds = lit::<T>(4.0) * lg / nt;
    let dx = (hi[0] - lo[0]) / nt;
    let dy = (hi[1] - lo[1]) / nt;
    let half = lit::<T>(0.5);

    let (lg2, lg4) = (lg * lg, lit::<T>(4.0) * lg * lg);
    let sigmas: Vec<T> = (0..n)
        .map(|k| s_lo + (from_usize::<T>(k) + half) * ds)
        .filter(|&s| in_band(s, lg2, lg4))
        .collect();
    let lf = lit::<T>(params.l_f as f64);
    let (lf2, lf4) = (lf * lf, lit::<T>(4.0) * lf * lf);
    let sg = params.sign_g.value::<T>();
    let sf = params.sign_f.value::<T>() * params.c;

    let mut count: u64 = 0;
    for i in 0..n {
        let x = lo[0] + (from_usize::<T>(i) + half) * dx;
        for j in 0..n {
            let y = lo[1] + (from_usize::<T>(j) + half) * dy;
            let xi1 = [x, y];
            if !params.in_region(xi1, a, anchor) {
                continue;
            }
            let q = tau + sg * x.hypot(y) + sf * (xi[0] - x).hypot(xi[1] - y);
            count += sigmas
                .iter()
                .filter(|&&s| in_band(q - s, lf2, lf4))
                .count() as u64;
        }
    }
    Ok(lit::<T>(count as f64) * ds * dx * dy)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EsetSup<T> {
    pub measure: T,
    pub tau: T,
    pub xi: [T; 2],
    pub normalizer: T,
}

impl<T: Real> EsetSup<T> {
    pub fn ratio(&self) -> T {
        self.measure / self.normalizer
    }
}

/// Largest measure over output points `(τ, ξ)` aligned with the anchor so
/// that both modulations sit mid-band at `ξ1 = anchor`.
pub fn eset_sup<T: Real>(params: &EsetParams<T>) -> Result<EsetSup<T>> {
    let anchor = params.anchor()?;
    let xi = [anchor[0] + anchor[0], anchor[1] + anchor[1]];
    let r = anchor[0].hypot(anchor[1]);
    let (_, _, mg) = bracket_band::<T>(params.l_g);
    let (_, _, mf) = bracket_band::<T>(params.l_f);
    let shift = (params.sign_g.value::<T>() + params.sign_f.value::<T>() * params.c) * r;
    let mut best = EsetSup {
        measure: -T::one(),
        tau: T::zero(),
        xi,
        normalizer: params.normalizer(),
    };
    for sigma in [mg, -mg] {
        for m in [mf, -mf] {
            let tau = m + sigma - shift;
            let measure = eset_measure(params, tau, xi)?;
            if measure > best.measure {
                best.measure = measure;
                best.tau = tau;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disjoint_constraints_give_zero() {
        let p = EsetParams::prop22(0.5, 1, 1, 1);
        let anchor = p.anchor().unwrap();
        let xi = [2.0 * anchor[0], 2.0 * anchor[1]];
        // τ far from any point where both modulations are O(1).
        assert_eq!(eset_measure(&p, 1e4, xi).unwrap(), 0.0);
    }

    #[test]
    fn one_cell_lattice() {
        let mut p = EsetParams::prop22(0.5f64, 2, 1, 1);
        p.cells = 1;
        let anchor = p.anchor().unwrap();
        let xi = [2.0 * anchor[0], 2.0 * anchor[1]];
        let r = anchor[0].hypot(anchor[1]);
        // σ = 0 and q = 0 at the single cell centre.
        let tau = -(1.0 + 0.5) * r;
        let m = eset_measure(&p, tau, xi).unwrap();
        assert!((m - 4.0 * 4.0 * 4.0).abs() < 1e-9);
    }

    #[test]
    fn sup_is_positive_and_scaled() {
        let p = EsetParams::n014(0.5, 16, 2, 4);
        let s = eset_sup(&p).unwrap();
        assert!(s.measure > 0.0);
        assert_eq!(s.normalizer, 4.0 * 8.0);
    }

    #[test]
    fn half_plane_sector_is_not_degenerate() {
        // N0 = 1 gives M0 = 1: sector 0 is the upper half plane
        let s = eset_sup(&EsetParams::n014(0.5f64, 1, 1, 1)).unwrap();
        assert!(s.measure > 0.1, "{}", s.measure);
    }
}

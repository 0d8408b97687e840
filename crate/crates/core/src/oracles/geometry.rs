//! Angular geometry of interacting frequencies: antipodal separation,
//! directional derivatives, surface normals and transversality.

use serde::{Deserialize, Serialize};

use super::linalg3::{det_cols, Vec3};
use crate::decomp::{sector_index, sector_pair_class, Constants, SectorPairClass, Sign};
use crate::error::{LabError, Result};
use crate::real::{lit, Real};

fn radius<T: Real>(x: [T; 2]) -> T {
    x[0].hypot(x[1])
}

fn nonzero<T: Real>(x: [T; 2], what: &str) -> Result<T> {
    let r = radius(x);
    if r == T::zero() || !r.is_finite() {
        return Err(LabError::Degenerate(format!("{what} must be nonzero")));
    }
    Ok(r)
}

fn add<T: Real>(a: [T; 2], b: [T; 2]) -> [T; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

/// `||ξ1| - |ξ2|| - sqrt((1+c)/2)|ξ|` for nearly antipodal `ξ1, ξ2`.
///
/// Requires the sectors of `ξ1, ξ2` at level `M1` to satisfy
/// `|j1 - j2 ± M1| ≤ 16`.
pub fn check_antipodal_separation<T: Real>(xi1: [T; 2], xi2: [T; 2], c: T) -> Result<T> {
    let k = Constants::new(c)?;
    let xi = add(xi1, xi2);
    let r = nonzero(xi, "ξ1 + ξ2")?;
    let r1 = nonzero(xi1, "ξ1")?;
    let r2 = nonzero(xi2, "ξ2")?;
    let m1 = k.m1(r1, r2, r);
    let j1 = sector_index(xi1, m1)?;
    let j2 = sector_index(xi2, m1)?;
    if sector_pair_class(j1, j2, m1, 0, m1) != SectorPairClass::NearAntipodal {
        return Err(LabError::Precondition(format!(
            "sectors {j1}, {j2} are not within 16 of antipodal at level M1 = {m1}"
        )));
    }
    let half = lit::<T>(0.5);
    Ok((r1 - r2).abs() - ((T::one() + c) * half).sqrt() * r)
}

/// `min_signs |∂₁(±|ξ1| ± c|ξ - ξ1|)| - (1-c)/2` for `ξ1` in sector `D_0^A`.
pub fn directional_derivative_bound<T: Real>(xi1: [T; 2], xi: [T; 2], c: T, a: u64) -> Result<T> {
    Constants::new(c)?;
    let r1 = nonzero(xi1, "ξ1")?;
    let rest = [xi[0] - xi1[0], xi[1] - xi1[1]];
    let rr = nonzero(rest, "ξ - ξ1")?;
    if sector_index(xi1, a)? != 0 {
        return Err(LabError::Precondition(format!(
            "ξ1 is not in sector 0 at level {a}"
        )));
    }
    let u = xi1[0] / r1;
    let w = c * rest[0] / rr;
    let d = (u - w).abs().min((u + w).abs());
    Ok(d - (T::one() - c) * lit::<T>(0.5))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    KleinGordonPlus,
    KleinGordonMinus,
    WaveGraph(Sign),
}

/// Point `ξ` on one of the characteristic surfaces; `offset` is the
/// constant `c_k` of the graph (it does not affect the normal).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint<T> {
    pub kind: SurfaceKind,
    pub xi: [T; 2],
    pub offset: T,
    pub c: T,
}

impl<T: Real> SurfacePoint<T> {
    /// Space-time point `(τ, ξ)` on the surface.
    pub fn point(&self) -> Vec3<T> {
        let r = radius(self.xi);
        let tau = match self.kind {
            SurfaceKind::KleinGordonPlus => r + self.offset,
            SurfaceKind::KleinGordonMinus => -r + self.offset,
            SurfaceKind::WaveGraph(Sign::Plus) => -self.c * r + self.offset,
            SurfaceKind::WaveGraph(Sign::Minus) => self.c * r + self.offset,
        };
        [tau, self.xi[0], self.xi[1]]
    }
}

pub fn surface_normal<T: Real>(p: &SurfacePoint<T>) -> Result<Vec3<T>> {
    let r = nonzero(p.xi, "ξ")?;
    let (u, v) = (p.xi[0] / r, p.xi[1] / r);
    let s2 = lit::<T>(2.0).sqrt();
    Ok(match p.kind {
        SurfaceKind::KleinGordonPlus => [-T::one() / s2, u / s2, v / s2],
        SurfaceKind::KleinGordonMinus => [T::one() / s2, u / s2, v / s2],
        SurfaceKind::WaveGraph(sign) => {
            let n = (T::one() + p.c * p.c).sqrt();
            [sign.value::<T>() / n, p.c * u / n, p.c * v / n]
        }
    })
}

/// The three unit normals at `ξ1` (KG plus), `ξ2` (KG minus) and `ξ1 + ξ2`
/// (wave graph with `sign`).
pub fn interaction_normals<T: Real>(
    xi1: [T; 2],
    xi2: [T; 2],
    c: T,
    sign: Sign,
) -> Result<[Vec3<T>; 3]> {
    let mk = |kind, xi| SurfacePoint {
        kind,
        xi,
        offset: T::zero(),
        c,
    };
    Ok([
        surface_normal(&mk(SurfaceKind::KleinGordonPlus, xi1))?,
        surface_normal(&mk(SurfaceKind::KleinGordonMinus, xi2))?,
        surface_normal(&mk(SurfaceKind::WaveGraph(sign), add(xi1, xi2)))?,
    ])
}

/// `|det(n1, n2, n3)|` of the interaction normals.
pub fn transversality_det<T: Real>(xi1: [T; 2], xi2: [T; 2], c: T, sign: Sign) -> Result<T> {
    Constants::new(c)?;
    let [a, b, d] = interaction_normals(xi1, xi2, c, sign)?;
    Ok(det_cols(a, b, d).abs())
}

pub fn rotate<T: Real>(x: [T; 2], angle: T) -> [T; 2] {
    let (s, c) = angle.sin_cos();
    [c * x[0] - s * x[1], s * x[0] + c * x[1]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antipodal_example() {
        let m = check_antipodal_separation([2.0, 0.0], [-1.0, 0.0], 0.5).unwrap();
        let expected = 1.0 - 0.75f64.sqrt();
        assert!((m - expected).abs() < 1e-15);
        assert!(check_antipodal_separation([1.0, 0.0], [-1.0, 0.0], 0.5).is_err());
        assert!(matches!(
            check_antipodal_separation([1.0, 0.0], [0.0, 1.0], 0.5),
            Err(LabError::Precondition(_))
        ));
    }

    #[test]
    fn derivative_examples() {
        let a = Constants::new(0.5f64).unwrap().derivative_level();
        let m = directional_derivative_bound([1.0f64, 0.0], [3.0, 0.0], 0.5, a).unwrap();
        assert!((m - 0.25).abs() < 1e-15);
        assert!(directional_derivative_bound([0.0, 1.0], [3.0, 0.0], 0.5, a).is_err());
        assert!(directional_derivative_bound([0.0, 0.0], [3.0, 0.0], 0.5, a).is_err());
    }

    #[test]
    fn normals_match_formulas() {
        let p = SurfacePoint {
            kind: SurfaceKind::KleinGordonPlus,
            xi: [1.0, 0.0],
            offset: 0.0,
            c: 0.5,
        };
        let n = surface_normal(&p).unwrap();
        let s = 0.5f64.sqrt();
        assert!((n[0] + s).abs() < 1e-15 && (n[1] - s).abs() < 1e-15 && n[2] == 0.0);
        let q = SurfacePoint {
            kind: SurfaceKind::WaveGraph(Sign::Plus),
            xi: [0.0, 1.0],
            offset: 0.0,
            c: 0.5,
        };
        let n = surface_normal(&q).unwrap();
        let k = 1.25f64.sqrt();
        assert!((n[0] - 1.0 / k).abs() < 1e-15 && n[1] == 0.0 && (n[2] - 0.5 / k).abs() < 1e-15);
    }

    #[test]
    fn determinant_example() {
        let d = transversality_det([1.0, 0.0], [0.0, 1.0], 0.5, Sign::Plus).unwrap();
        assert!((d - 1.0 / (2.0 * 1.25f64.sqrt())).abs() < 1e-15);
        let d = transversality_det([1.0, 0.0], [2.0, 0.0], 0.5, Sign::Plus).unwrap();
        assert!(d < 1e-15);
    }
}

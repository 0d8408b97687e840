//! Log-log regression over dyadic sweeps.

use serde::{Deserialize, Serialize};

use super::probe::RatioReport;
use crate::error::{LabError, Result};
use crate::real::{to_f64, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    N0,
    N1,
    N2,
    L0,
    L1,
    L2,
}

impl Axis {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "N0" => Axis::N0,
            "N1" => Axis::N1,
            "N2" => Axis::N2,
            "L0" => Axis::L0,
            "L1" => Axis::L1,
            "L2" => Axis::L2,
            _ => return None,
        })
    }

    pub fn value<T: Real>(self, r: &RatioReport<T>) -> u64 {
        let b = &r.spec.blocks;
        match self {
            Axis::N0 => b[0].n,
            Axis::N1 => b[1].n,
            Axis::N2 => b[2].n,
            Axis::L0 => b[0].l,
            Axis::L1 => b[1].l,
            Axis::L2 => b[2].l,
        }
    }
}

/// Least-squares slope of `log max_ratio` against `log axis`.
pub fn scaling_fit<T: Real>(reports: &[RatioReport<T>], axis: Axis) -> Result<f64> {
    let pts: Vec<(f64, f64)> = reports
        .iter()
        .map(|r| ((axis.value(r) as f64).ln(), to_f64(r.max_ratio).ln()))
        .collect();
    loglog_slope(&pts)
}

/// Slope of a least-squares line through `(x, y)` pairs.
pub fn loglog_slope(pts: &[(f64, f64)]) -> Result<f64> {
    if pts.len() < 4 {
        return Err(LabError::InvalidParameter(format!(
            "scaling fit needs at least 4 points, got {}",
            pts.len()
        )));
    }
    if pts.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
        return Err(LabError::NonFinite("log of nonpositive ratio".into()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx < 1e-12 {
        return Err(LabError::Degenerate("axis does not vary".into()));
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let flat: Vec<_> = (2..7).map(|k| ((1u64 << k) as f64).ln()).map(|x| (x, 0.3)).collect();
        assert!(loglog_slope(&flat).unwrap().abs() < 1e-12);
        let half: Vec<_> = (2..7)
            .map(|k| {
                let a = (1u64 << k) as f64;
                (a.ln(), (3.0 * a.sqrt()).ln())
            })
            .collect();
        assert!((loglog_slope(&half).unwrap() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn too_few_or_flat_axis() {
        assert!(loglog_slope(&[(0.0, 0.0); 3]).is_err());
        assert!(loglog_slope(&[(1.0, 0.0), (1.0, 1.0), (1.0, 2.0), (1.0, 3.0)]).is_err());
    }
}

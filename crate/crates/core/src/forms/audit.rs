//! Dyadic-sum exponent bookkeeping of the nonlinear estimate's proof cases.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseId {
    Ia,
    Ib,
    Ic,
    IIIa,
    IIIb,
    IIIc,
    #[serde(rename = "I'")]
    IPrime,
    #[serde(rename = "II'")]
    IIPrime,
    #[serde(rename = "III'")]
    IIIPrime,
    #[serde(rename = "IV'-small")]
    IVPrimeSmall,
    #[serde(rename = "IV'-large")]
    IVPrimeLarge,
}

impl CaseId {
    pub const ALL: [CaseId; 11] = [
        CaseId::Ia,
        CaseId::Ib,
        CaseId::Ic,
        CaseId::IIIa,
        CaseId::IIIb,
        CaseId::IIIc,
        CaseId::IPrime,
        CaseId::IIPrime,
        CaseId::IIIPrime,
        CaseId::IVPrimeSmall,
        CaseId::IVPrimeLarge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::Ia => "Ia",
            CaseId::Ib => "Ib",
            CaseId::Ic => "Ic",
            CaseId::IIIa => "IIIa",
            CaseId::IIIb => "IIIb",
            CaseId::IIIc => "IIIc",
            CaseId::IPrime => "I'",
            CaseId::IIPrime => "II'",
            CaseId::IIIPrime => "III'",
            CaseId::IVPrimeSmall => "IV'-small",
            CaseId::IVPrimeLarge => "IV'-large",
        }
    }

    fn is_dyadic_sum(self) -> bool {
        matches!(
            self,
            CaseId::Ia | CaseId::Ib | CaseId::Ic | CaseId::IIIa | CaseId::IIIb | CaseId::IIIc
        )
    }
}

/// Exponents of one case's final bound.
///
/// Cases `Ia`–`Ic` sum `N₀^{e₀} N₁^{e₁}` over `N₀ ≲ N₁`; cases
/// `IIIa`–`IIIc` sum `N₀^{e₀} N₂^{e₁}` over `N₂ ≲ N₀ ∼ N₁` (so
/// `exponent_n1` is the exponent of the small frequency `N₂` there).
/// `epsilon` is the decay margin: minus the combined exponent for the
/// dyadic-sum cases, the gain `ε` for the primed ones. The budget
/// converges iff `epsilon > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentBudget {
    pub s: f64,
    pub b: f64,
    pub case_id: CaseId,
    pub exponent_n0: f64,
    pub exponent_n1: f64,
    pub epsilon: f64,
}

impl ExponentBudget {
    pub fn converges(&self) -> bool {
        self.epsilon > 0.0
    }
}

/// `ε = (18/28)(s + 13/18)`.
pub fn epsilon_small(s: f64) -> f64 {
    18.0 / 28.0 * (s + 13.0 / 18.0)
}

/// `ε = (18s + 13)/14`.
pub fn epsilon_large(s: f64) -> f64 {
    (18.0 * s + 13.0) / 14.0
}

fn exponents(case: CaseId, s: f64, b: f64) -> (f64, f64) {
    match case {
        CaseId::Ia => (0.5 - s, -0.75 - b),
        CaseId::Ib => (0.75 - s, -1.0 - b),
        CaseId::Ic => (0.75 - s, -2.0 + b),
        CaseId::IIIa | CaseId::IIIb => (-1.0 - b - 2.0 * s, 0.75 + s),
        CaseId::IIIc => (-2.0 + b - 2.0 * s, 0.5 + s),
        CaseId::IPrime | CaseId::IIPrime => (-0.75, 0.0),
        CaseId::IIIPrime => (1.0, -1.75),
        CaseId::IVPrimeSmall => (1.5, -2.0),
        CaseId::IVPrimeLarge => (-0.25, -0.75),
    }
}

/// Exponent of the large frequency after summing the small one out.
fn combined(case: CaseId, e0: f64, e1: f64) -> f64 {
    match case {
        CaseId::Ia | CaseId::Ib | CaseId::Ic => e1 + e0.max(0.0),
        _ => e0 + e1.max(0.0),
    }
}

pub fn case_budget(case: CaseId, s: f64, b: f64) -> ExponentBudget {
    let (e0, e1) = exponents(case, s, b);
    let epsilon = match case {
        CaseId::IPrime | CaseId::IIPrime | CaseId::IIIPrime => s + 0.75,
        CaseId::IVPrimeSmall => epsilon_small(s),
        CaseId::IVPrimeLarge => epsilon_large(s),
        _ => -combined(case, e0, e1),
    };
    ExponentBudget {
        s,
        b,
        case_id: case,
        exponent_n0: e0,
        exponent_n1: e1,
        epsilon,
    }
}

fn check_range(s: f64, b: f64) -> Result<()> {
    if !(s > -1.0 && s < 0.0) {
        return Err(LabError::InvalidParameter(format!("s = {s} outside (-1, 0)")));
    }
    if !(b > 0.5 && b < 1.0) {
        return Err(LabError::InvalidParameter(format!("b = {b} outside (1/2, 1)")));
    }
    Ok(())
}

/// Budgets of every proof case at `(s, b)`.
pub fn summability_audit(s: f64, b: f64) -> Result<Vec<ExponentBudget>> {
    check_range(s, b)?;
    Ok(CaseId::ALL.iter().map(|&c| case_budget(c, s, b)).collect())
}

/// Open interval of `b ∈ (1/2, 1)` for which the case converges at `s`,
/// or `None` when empty. Primed cases do not involve `b`.
pub fn b_window(case: CaseId, s: f64) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (0.5f64, 1.0f64);
    if case.is_dyadic_sum() {
        // every combined exponent is affine in b; bound it from each side
        let f = |b: f64| combined(case, exponents(case, s, b).0, exponents(case, s, b).1);
        let (f0, f1) = (f(0.0), f(1.0));
        let slope = f1 - f0;
        if slope.abs() < 1e-15 {
            if f0 >= 0.0 {
                return None;
            }
        } else {
            let root = -f0 / slope;
            if slope > 0.0 {
                hi = hi.min(root);
            } else {
                lo = lo.max(root);
            }
        }
    } else if case_budget(case, s, 0.75).epsilon <= 0.0 {
        return None;
    }
    (lo < hi).then_some((lo, hi))
}

/// Intersection of all per-case windows.
pub fn joint_b_window(s: f64) -> Option<(f64, f64)> {
    let mut acc = (0.5f64, 1.0f64);
    for c in CaseId::ALL {
        let (lo, hi) = b_window(c, s)?;
        acc = (acc.0.max(lo), acc.1.min(hi));
    }
    (acc.0 < acc.1).then_some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_ia_example() {
        let e = case_budget(CaseId::Ia, -0.7, 0.55);
        assert!((e.exponent_n0 - 1.2).abs() < 1e-12);
        assert!((e.exponent_n1 + 1.3).abs() < 1e-12);
        assert!(e.converges());
    }

    #[test]
    fn epsilon_threshold() {
        assert!(epsilon_small(-13.0 / 18.0).abs() < 1e-15);
        assert!((epsilon_small(-0.7) - 0.014285714285714).abs() < 1e-12);
        assert!(epsilon_small(-0.73) < 0.0);
    }

    #[test]
    fn ic_window_closes_at_b_five_quarters_plus_s() {
        let (lo, hi) = b_window(CaseId::Ic, -0.72).unwrap();
        assert_eq!(lo, 0.5);
        assert!((hi - 0.53).abs() < 1e-12);
        assert!(!case_budget(CaseId::Ic, -0.7, 0.55).converges());
        let (lo, hi) = joint_b_window(-0.7).unwrap();
        assert!((lo - 0.5).abs() < 1e-12 && (hi - 0.55).abs() < 1e-12);
        assert!(joint_b_window(-0.73).is_none());
    }

    #[test]
    fn range_checked() {
        assert!(summability_audit(0.1, 0.6).is_err());
        assert!(summability_audit(-0.5, 0.5).is_err());
        assert_eq!(summability_audit(-0.5, 0.6).unwrap().len(), 11);
    }
}

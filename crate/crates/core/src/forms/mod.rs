//! Trilinear forms, empirical bilinear constants and exponent bookkeeping.

mod audit;
mod fit;
mod probe;
mod trilinear;

pub use audit::{
    b_window, case_budget, epsilon_large, epsilon_small, joint_b_window, summability_audit, CaseId,
    ExponentBudget,
};
pub use fit::{loglog_slope, scaling_fit, Axis};
pub use probe::{
    bilinear_ratio, bilinear_ratio_probe, ProbeSpec, RatioReport, RhsFormula, CSV_HEADER,
    PATCH_RADIUS_CAP, PROBE_SPACING,
};
pub use trilinear::{sum_lattice, trilinear_eval, trilinear_eval_with, FormKind, Route, TrilinearSpec};

//! Checkers for the closed-form inequalities and geometric premises.
//!
//! Every checker returns a margin (slack) instead of a boolean; a margin
//! below zero is a violation.

mod bht;
mod campaign;
mod eset;
mod geometry;
pub mod linalg3;
mod modulation;

pub use campaign::{
    bht_campaign, modulation_campaign, sector_separated_pair, transversality_campaign,
    CampaignSummary, Regime, Sequence, MAX_RECORDS,
};
pub use bht::{verify_bht_premises, BhtParams, ConditionReport};
pub use eset::{eset_measure, eset_sup, EsetMode, EsetParams, EsetSup};
pub use geometry::{
    check_antipodal_separation, directional_derivative_bound, interaction_normals, rotate,
    surface_normal, transversality_det, SurfaceKind, SurfacePoint,
};
pub use modulation::{
    check_opposite_sign_smallness, check_same_sign_modulation, opposite_sign_margin,
    same_sign_margin, ModulationSample, MODULATION_KAPPA,
};

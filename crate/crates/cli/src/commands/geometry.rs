use kgz_core::oracles::{bht_campaign, transversality_campaign};
use serde::{Deserialize, Serialize};

use super::{campaign_csv, Outcome};
use crate::config::{dyadic_list, require};
use crate::error::CliError;
use crate::output::Artifacts;

/// Largest allowed change of `|det N|` under a common rotation.
pub const ROTATION_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub seed: u64,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default = "default_levels")]
    pub levels: Vec<u64>,
    /// Admissible transversality samples per level.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_bht_configs")]
    pub bht_configs: usize,
    #[serde(default = "default_bht_samples")]
    pub bht_samples: usize,
}

fn default_c() -> f64 {
    0.5
}

fn default_levels() -> Vec<u64> {
    vec![64, 128, 256, 512]
}

fn default_samples() -> usize {
    100_000
}

fn default_bht_configs() -> usize {
    100
}

fn default_bht_samples() -> usize {
    1000
}

pub fn run(cfg: &GeometryConfig) -> Result<Outcome, CliError> {
    dyadic_list("levels", &cfg.levels)?;
    require(cfg.levels.iter().all(|&a| a >= 64), "`levels` must be at least 64")?;
    require(cfg.c > 0.0 && cfg.c < 1.0, "`c` must lie in (0, 1)")?;
    require(cfg.samples > 0, "`samples` must be positive")?;

    let mut art = Artifacts::default();
    let mut rows = Vec::new();
    let mut rotation = 0.0f64;
    for &a in &cfg.levels {
        let s = transversality_campaign(a, cfg.c, cfg.samples, cfg.seed)?;
        rotation = rotation.max(s.extra["rotation_max_dev"]);
        art.record("campaign", &s);
        rows.push(s);
    }
    if cfg.bht_configs > 0 {
        require(cfg.bht_samples > 0, "`bht_samples` must be positive")?;
        let s = bht_campaign(&cfg.levels, cfg.c, cfg.bht_configs, cfg.bht_samples, cfg.seed)?;
        art.record("campaign", &s);
        rows.push(s);
    }
    art.set_summary(campaign_csv(&rows));
    let passed = rows.iter().all(|s| s.passed()) && rotation <= ROTATION_TOL;
    let violations: usize = rows.iter().map(|s| s.violations).sum();
    let msg = format!(
        "{} campaigns, {violations} violations, rotation deviation {rotation:e}",
        rows.len()
    );
    Ok(Outcome::new(cfg, passed, msg, art))
}

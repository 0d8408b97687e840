use kgz_core::oracles::{modulation_campaign, Regime};
use serde::{Deserialize, Serialize};

use super::{campaign_csv, Outcome};
use crate::config::{require, OneOrMany};
use crate::error::CliError;
use crate::output::Artifacts;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulationConfig {
    pub seed: u64,
    #[serde(default = "default_c")]
    pub c: OneOrMany<f64>,
    /// Admissible samples per regime and speed.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_regimes")]
    pub regimes: Vec<String>,
}

fn default_c() -> OneOrMany<f64> {
    OneOrMany::Many(vec![0.1, 0.5, 0.9])
}

fn default_samples() -> usize {
    1_000_000
}

fn default_regimes() -> Vec<String> {
    Regime::ALL.iter().map(|r| r.name().to_string()).collect()
}

pub fn run(cfg: &ModulationConfig) -> Result<Outcome, CliError> {
    require(cfg.samples > 0, "`samples` must be positive")?;
    let regimes = cfg
        .regimes
        .iter()
        .map(|name| {
            Regime::parse(name).ok_or_else(|| CliError::Config(format!("unknown regime `{name}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    require(!regimes.is_empty(), "`regimes` is empty")?;
    let speeds = cfg.c.to_vec();
    require(
        !speeds.is_empty() && speeds.iter().all(|&c| c > 0.0 && c < 1.0),
        "every `c` must lie in (0, 1)",
    )?;

    let mut art = Artifacts::default();
    let mut rows = Vec::new();
    for &c in &speeds {
        for &regime in &regimes {
            let s = modulation_campaign(regime, c, cfg.samples, cfg.seed)?;
            art.record("campaign", &s);
            rows.push(s);
        }
    }
    art.set_summary(campaign_csv(&rows));
    let violations: usize = rows.iter().map(|s| s.violations).sum();
    let passed = rows.iter().all(|s| s.passed());
    let min = rows.iter().map(|s| s.min_margin).fold(f64::INFINITY, f64::min);
    let msg = format!("{} campaigns, {violations} violations, min margin {min:e}", rows.len());
    Ok(Outcome::new(cfg, passed, msg, art))
}

use kgz_core::oracles::{eset_sup, EsetMode, EsetParams};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::Outcome;
use crate::config::{dyadic_list, require};
use crate::error::CliError;
use crate::output::Artifacts;

/// Grid over `(N, L_f, L_g)`: `(N_min, L1, L2)` for `prop22`,
/// `(N0, L0, L1)` for `prop_N014`. The measure is a deterministic lattice
/// count, so `seed` is recorded but unused.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EsetConfig {
    pub seed: u64,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default = "default_modes")]
    pub modes: Vec<String>,
    #[serde(default = "default_dyadic")]
    pub n_values: Vec<u64>,
    #[serde(default = "default_dyadic")]
    pub lf_values: Vec<u64>,
    #[serde(default = "default_dyadic")]
    pub lg_values: Vec<u64>,
    #[serde(default = "default_cells")]
    pub cells: usize,
    /// Largest allowed max/min ratio of `|E| / bound` over the grid.
    #[serde(default = "default_spread")]
    pub max_spread: f64,
}

fn default_c() -> f64 {
    0.5
}

fn default_modes() -> Vec<String> {
    vec!["prop22".into(), "prop_N014".into()]
}

fn default_dyadic() -> Vec<u64> {
    vec![1, 2, 4, 8, 16]
}

fn default_cells() -> usize {
    128
}

fn default_spread() -> f64 {
    100.0
}

fn parse_mode(s: &str) -> Result<EsetMode, CliError> {
    match s {
        "prop22" => Ok(EsetMode::Prop22),
        "prop_N014" => Ok(EsetMode::PropN014),
        _ => Err(CliError::Config(format!("unknown E-set mode `{s}`"))),
    }
}

fn mode_name(m: EsetMode) -> &'static str {
    match m {
        EsetMode::Prop22 => "prop22",
        EsetMode::PropN014 => "prop_N014",
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EsetPoint {
    pub mode: String,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "L_f")]
    pub l_f: u64,
    #[serde(rename = "L_g")]
    pub l_g: u64,
    pub measure: f64,
    pub normalizer: f64,
    pub ratio: f64,
    pub tau: f64,
    pub xi: [f64; 2],
}

pub fn run(cfg: &EsetConfig) -> Result<Outcome, CliError> {
    let modes = cfg.modes.iter().map(|m| parse_mode(m)).collect::<Result<Vec<_>, _>>()?;
    require(!modes.is_empty(), "`modes` is empty")?;
    dyadic_list("n_values", &cfg.n_values)?;
    dyadic_list("lf_values", &cfg.lf_values)?;
    dyadic_list("lg_values", &cfg.lg_values)?;
    require(cfg.c > 0.0 && cfg.c < 1.0, "`c` must lie in (0, 1)")?;
    require(cfg.cells > 0, "`cells` must be positive")?;
    require(cfg.max_spread >= 1.0, "`max_spread` must be at least 1")?;

    let mut art = Artifacts::default();
    let mut csv = String::from("mode,N,L_f,L_g,measure,normalizer,ratio\n");
    let mut passed = true;
    let mut notes = Vec::new();
    for mode in modes {
        let mut grid = Vec::new();
        for &n in &cfg.n_values {
            for &lf in &cfg.lf_values {
                for &lg in &cfg.lg_values {
                    grid.push((n, lf, lg));
                }
            }
        }
        let points = grid
            .par_iter()
            .map(|&(n, lf, lg)| {
                let mut p = match mode {
                    EsetMode::Prop22 => EsetParams::prop22(cfg.c, n, lf, lg),
                    EsetMode::PropN014 => EsetParams::n014(cfg.c, n, lf, lg),
                };
                p.cells = cfg.cells;
                let sup = eset_sup(&p)?;
                Ok(EsetPoint {
                    mode: mode_name(mode).into(),
                    n,
                    l_f: lf,
                    l_g: lg,
                    measure: sup.measure,
                    normalizer: sup.normalizer,
                    ratio: sup.ratio(),
                    tau: sup.tau,
                    xi: sup.xi,
                })
            })
            .collect::<Result<Vec<_>, kgz_core::LabError>>()?;
        for p in &points {
            art.record("eset", p);
            csv.push_str(&format!(
                "{},{},{},{},{:e},{:e},{:e}\n",
                p.mode, p.n, p.l_f, p.l_g, p.measure, p.normalizer, p.ratio
            ));
        }
        let hi = points.iter().map(|p| p.ratio).fold(0.0, f64::max);
        let lo = points.iter().map(|p| p.ratio).fold(f64::INFINITY, f64::min);
        let spread = if lo > 0.0 { hi / lo } else { f64::INFINITY };
        let ok = spread < cfg.max_spread;
        passed &= ok;
        notes.push(format!("{} spread {spread:.3}", mode_name(mode)));
        art.record(
            "eset-spread",
            &json!({
                "mode": mode_name(mode),
                "c": cfg.c,
                "ratio_max": hi,
                "ratio_min": lo,
                "spread": if spread.is_finite() { json!(spread) } else { json!(null) },
                "max_spread": cfg.max_spread,
                "passed": ok,
            }),
        );
    }
    art.set_summary(csv);
    Ok(Outcome::new(cfg, passed, notes.join(", "), art))
}

use kgz_core::decomp::SectorSpec;
use kgz_core::forms::{
    bilinear_ratio_probe, scaling_fit, Axis, ProbeSpec, RatioReport, RhsFormula, CSV_HEADER,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::Outcome;
use crate::config::{dyadic_list, require};
use crate::error::CliError;
use crate::output::Artifacts;

/// Dyadic sweeps of the bilinear ratio. `prop21`/`prop22` use the resonant
/// geometry; the sector formulas use the sector pair `(j1, j2)` at level `a`
/// with `N2 = N1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    pub seed: u64,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default = "default_formulas")]
    pub formulas: Vec<String>,
    #[serde(default = "default_sweeps")]
    pub sweeps: Vec<String>,
    /// Fixed `N1` for sweeps over other axes.
    #[serde(default = "default_n1")]
    pub n1: u64,
    #[serde(default = "one")]
    pub l1: u64,
    #[serde(default = "one")]
    pub l2: u64,
    #[serde(default = "default_values")]
    pub n1_values: Vec<u64>,
    #[serde(default = "default_values")]
    pub l1_values: Vec<u64>,
    #[serde(default = "default_values")]
    pub l2_values: Vec<u64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Largest accepted log-log slope of `max_ratio`.
    #[serde(default = "default_slope_tol")]
    pub slope_tol: f64,
    #[serde(default = "default_a")]
    pub a: u64,
    #[serde(default)]
    pub j1: i64,
    #[serde(default = "default_j2")]
    pub j2: i64,
}

fn default_c() -> f64 {
    0.5
}

fn default_formulas() -> Vec<String> {
    vec!["prop21".into(), "prop22".into()]
}

fn default_sweeps() -> Vec<String> {
    vec!["N1".into(), "L1".into()]
}

fn default_n1() -> u64 {
    8
}

fn one() -> u64 {
    1
}

fn default_values() -> Vec<u64> {
    (0..8).map(|k| 1 << k).collect()
}

fn default_trials() -> usize {
    200
}

fn default_slope_tol() -> f64 {
    0.05
}

fn default_a() -> u64 {
    64
}

fn default_j2() -> i64 {
    20
}

/// Dyadic parameters of one probe point.
#[derive(Clone, Copy)]
struct Point {
    n1: u64,
    l1: u64,
    l2: u64,
}

impl ProbeConfig {
    fn spec(&self, formula: RhsFormula, p: Point) -> Result<ProbeSpec<f64>, CliError> {
        Ok(match formula {
            RhsFormula::Prop21 | RhsFormula::Prop22 => {
                ProbeSpec::resonant(formula, self.c, p.n1, p.l1, p.l2)?
            }
            _ => ProbeSpec::sector_pair(
                formula,
                self.c,
                p.n1,
                p.n1,
                [SectorSpec { a: self.a, j: self.j1 }, SectorSpec { a: self.a, j: self.j2 }],
                p.l1,
                p.l2,
            )?,
        })
    }

    fn points(&self, axis: Axis) -> Result<Vec<Point>, CliError> {
        let base = Point {
            n1: self.n1,
            l1: self.l1,
            l2: self.l2,
        };
        Ok(match axis {
            Axis::N1 => self.n1_values.iter().map(|&n1| Point { n1, ..base }).collect(),
            Axis::L1 => self.l1_values.iter().map(|&l1| Point { l1, ..base }).collect(),
            Axis::L2 => self.l2_values.iter().map(|&l2| Point { l2, ..base }).collect(),
            _ => return Err(CliError::Config("sweeps must be N1, L1 or L2".into())),
        })
    }
}

fn tagged(report: &RatioReport<f64>, sweep: &str) -> Value {
    let mut v = serde_json::to_value(report).expect("report serialises");
    v["sweep"] = json!(sweep);
    v
}

pub fn run(cfg: &ProbeConfig) -> Result<Outcome, CliError> {
    let formulas = cfg
        .formulas
        .iter()
        .map(|f| RhsFormula::parse(f).ok_or_else(|| CliError::Config(format!("unknown formula `{f}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let sweeps = cfg
        .sweeps
        .iter()
        .map(|s| Axis::parse(s).map(|a| (s.clone(), a)).ok_or_else(|| CliError::Config(format!("unknown axis `{s}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    require(!formulas.is_empty() && !sweeps.is_empty(), "nothing to probe")?;
    for (name, v) in [("n1_values", &cfg.n1_values), ("l1_values", &cfg.l1_values), ("l2_values", &cfg.l2_values)] {
        dyadic_list(name, v)?;
    }
    dyadic_list("n1", &[cfg.n1, cfg.l1, cfg.l2])?;
    require(cfg.trials > 0, "`trials` must be positive")?;

    let mut art = Artifacts::default();
    let mut csv = format!("sweep,{CSV_HEADER}\n");
    let mut passed = true;
    let mut notes = Vec::new();
    for &formula in &formulas {
        for (name, axis) in &sweeps {
            let mut reports = Vec::new();
            for p in cfg.points(*axis)? {
                let spec = cfg.spec(formula, p)?;
                let r = bilinear_ratio_probe(&spec, formula, cfg.trials, cfg.seed)?;
                csv.push_str(&format!("{name},{}\n", r.csv_row()));
                art.record("probe", &tagged(&r, name));
                reports.push(r);
            }
            let slope = scaling_fit(&reports, *axis)?;
            let ok = slope <= cfg.slope_tol;
            passed &= ok;
            notes.push(format!("{} {name} slope {slope:.3}", formula.name()));
            art.record(
                "fit",
                &json!({
                    "rhs_formula": formula,
                    "sweep": name,
                    "slope": slope,
                    "slope_tol": cfg.slope_tol,
                    "points": reports.len(),
                    "passed": ok,
                }),
            );
        }
    }
    art.set_summary(csv);
    Ok(Outcome::new(cfg, passed, notes.join(", "), art))
}

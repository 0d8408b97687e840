use kgz_core::lattice::PlaneGrid;
use kgz_core::solver::{
    data_sensitivity_probe, diagnostics_csv, picard_iterate, strang_step, write_checkpoint,
    DataSpec, Envelope, SolverConfig, SolverState, CONVERGENCE_TOL,
};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::Outcome;
use crate::config::require;
use crate::error::CliError;
use crate::output::Artifacts;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Picard,
    Strang,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    pub seed: u64,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "unit")]
    pub dxi: f64,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default = "default_s")]
    pub s: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(rename = "T", default = "default_t")]
    pub t_final: f64,
    #[serde(default = "default_iters")]
    pub picard_iters: usize,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    /// `low-regularity` (borderline `H^s × Ḣ^s` decay) or `smooth` (Gaussian).
    #[serde(default = "default_envelope")]
    pub envelope: String,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default = "default_method")]
    pub method: Method,
    #[serde(default = "yes")]
    pub nonlinearity_on: bool,
    #[serde(default = "yes")]
    pub dealias: bool,
    /// Largest accepted successive-difference ratio of the Picard run.
    #[serde(default = "default_max_ratio")]
    pub max_ratio: f64,
    /// Perturbation sizes for the data-sensitivity probe.
    #[serde(default)]
    pub eta: Vec<f64>,
    /// Extra Strang runs at `dt/2^k`, `k = 1..=refine_levels + 1`.
    #[serde(default)]
    pub refine_levels: usize,
    #[serde(default = "yes")]
    pub checkpoint: bool,
}

fn default_n() -> usize {
    64
}
fn unit() -> f64 {
    1.0
}
fn default_c() -> f64 {
    0.5
}
fn default_s() -> f64 {
    -0.7
}
fn default_dt() -> f64 {
    0.05
}
fn default_t() -> f64 {
    0.5
}
fn default_iters() -> usize {
    8
}
fn default_amplitude() -> f64 {
    1e-3
}
fn default_envelope() -> String {
    "low-regularity".into()
}
fn default_width() -> f64 {
    3.0
}
fn default_method() -> Method {
    Method::Picard
}
fn yes() -> bool {
    true
}
fn default_max_ratio() -> f64 {
    0.5
}

/// Sensitivity ratios across `eta` must agree within this factor.
pub const SENSITIVITY_FACTOR: f64 = 2.0;

impl SolveConfig {
    fn solver(&self) -> SolverConfig<f64> {
        SolverConfig {
            c: self.c,
            dt: self.dt,
            t_final: self.t_final,
            picard_iters: self.picard_iters,
            nonlinearity_on: self.nonlinearity_on,
            dealias: self.dealias,
            s: self.s,
        }
    }

    fn data(&self, grid: PlaneGrid<f64>, amplitude: f64, seed: u64) -> Result<SolverState<f64>, CliError> {
        let envelope = match self.envelope.as_str() {
            "low-regularity" => Envelope::LowRegularity { s: self.s },
            "smooth" => Envelope::Smooth { width: self.width },
            e => return Err(CliError::Config(format!("unknown envelope `{e}`"))),
        };
        Ok(DataSpec {
            envelope,
            amplitude,
            seed,
        }
        .generate(grid, self.s)?)
    }
}

fn strang_states(data: &SolverState<f64>, cfg: &SolverConfig<f64>) -> Result<Vec<SolverState<f64>>, CliError> {
    cfg.validate()?;
    let mut states = vec![data.clone()];
    for _ in 0..cfg.steps() {
        let next = strang_step(states.last().unwrap(), cfg);
        if !next.is_finite() {
            return Err(kgz_core::LabError::NonFinite(format!("Strang step at t = {}", next.t)).into());
        }
        states.push(next);
    }
    Ok(states)
}

pub fn run(cfg: &SolveConfig) -> Result<Outcome, CliError> {
    let grid = PlaneGrid::new(cfg.n, cfg.dxi).map_err(|e| CliError::Config(e.to_string()))?;
    let solver = cfg.solver();
    solver.validate().map_err(|e| CliError::Config(e.to_string()))?;
    require(cfg.amplitude > 0.0, "`amplitude` must be positive")?;
    require(cfg.eta.iter().all(|&e| e >= 0.0), "`eta` entries must be non-negative")?;
    let data = cfg.data(grid, cfg.amplitude, cfg.seed)?;

    let mut art = Artifacts::default();
    let mut passed = true;
    let mut notes = Vec::new();
    let states = match cfg.method {
        Method::Picard => {
            let run = picard_iterate(&data, &solver)?;
            let r = &run.report;
            let ok = r.contracted && r.ratios.iter().all(|&q| q <= cfg.max_ratio);
            passed &= ok;
            notes.push(format!(
                "Picard last difference {:e}, max ratio {:e}",
                r.diffs.last().copied().unwrap_or(0.0),
                r.ratios.iter().copied().fold(0.0, f64::max)
            ));
            art.record(
                "contraction",
                &json!({
                    "report": r,
                    "converged": r.converged(CONVERGENCE_TOL),
                    "max_ratio": cfg.max_ratio,
                    "passed": ok,
                }),
            );
            run.states
        }
        Method::Strang => strang_states(&data, &solver)?,
    };
    art.set_summary(diagnostics_csv(&states, cfg.s));
    let last = states.last().expect("trajectory has the initial state");
    art.record(
        "final",
        &json!({ "t": last.t, "norm": last.norm(cfg.s), "reality_defect": last.reality_defect() }),
    );

    if cfg.refine_levels > 0 {
        let mut finals = Vec::new();
        let mut dts = Vec::new();
        for k in 0..=cfg.refine_levels + 1 {
            let dt = cfg.dt / f64::powi(2.0, k as i32);
            let sc = SolverConfig { dt, ..solver };
            finals.push(strang_states(&data, &sc)?.pop().expect("nonempty"));
            dts.push(dt);
        }
        let diffs: Vec<f64> = finals.windows(2).map(|w| w[0].distance(&w[1], cfg.s)).collect();
        let ratios: Vec<f64> = diffs.windows(2).map(|w| w[0] / w[1]).collect();
        notes.push(format!("refinement ratios {ratios:?}"));
        art.record("refinement", &json!({ "dt": dts, "diffs": diffs, "ratios": ratios }));
    }

    if !cfg.eta.is_empty() {
        let direction = cfg.data(grid, 1.0, cfg.seed.wrapping_add(1))?;
        let mut values = Vec::new();
        for &eta in &cfg.eta {
            let ratio = data_sensitivity_probe(&data, &direction, eta, &solver)?;
            art.record("sensitivity", &json!({ "eta": eta, "ratio": ratio }));
            if eta > 0.0 {
                values.push(ratio);
            }
        }
        let hi = values.iter().copied().fold(0.0, f64::max);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        if values.len() >= 2 {
            let ok = lo > 0.0 && hi / lo <= SENSITIVITY_FACTOR;
            passed &= ok;
            notes.push(format!("sensitivity spread {:.4}", hi / lo));
        }
    }

    if cfg.checkpoint {
        let mut bytes = Vec::new();
        write_checkpoint(last, &mut bytes)?;
        art.file("checkpoint.bin", bytes);
    }
    Ok(Outcome::new(cfg, passed, notes.join("; "), art))
}

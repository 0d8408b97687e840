use serde::{Deserialize, Serialize};

use super::flow::{linear_propagator, nonlinearity};
use super::state::{SolverConfig, SolverState};
use crate::error::{LabError, Result};
use crate::real::{from_usize, lit, to_f64, Real};

/// Successive-difference norms `d_k = sup_t ‖u^{(k+1)} − u^{(k)}‖_{H^s×Ḣ^s}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub diffs: Vec<f64>,
    pub ratios: Vec<f64>,
    pub contracted: bool,
    /// `sup_t` norm of the final iterate.
    pub sup_norm: f64,
}

impl ContractionReport {
    fn new(diffs: Vec<f64>, sup_norm: f64) -> Self {
        let ratios: Vec<f64> = diffs
            .windows(2)
            .map(|w| if w[0] == 0.0 { 0.0 } else { w[1] / w[0] })
            .collect();
        let contracted = diffs
            .windows(2)
            .all(|w| if w[0] == 0.0 { w[1] == 0.0 } else { w[1] < w[0] });
        Self {
            diffs,
            ratios,
            contracted,
            sup_norm,
        }
    }

    /// Last difference is below `tol` relative to the solution size.
    pub fn converged(&self, tol: f64) -> bool {
        match self.diffs.last() {
            Some(&d) => d <= tol * self.sup_norm.max(f64::MIN_POSITIVE),
            None => false,
        }
    }
}

pub struct Trajectory<T> {
    pub states: Vec<SolverState<T>>,
    pub report: ContractionReport,
}

fn time<T: Real>(config: &SolverConfig<T>, j: usize) -> T {
    config.dt * from_usize::<T>(j)
}

fn sup_distance<T: Real>(a: &[SolverState<T>], b: &[SolverState<T>], s: T) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |m, (x, y)| m.max(x.distance(y, s)))
}

/// One application of the discrete Duhamel map: trapezoid rule on the
/// interaction-picture integrand `e^{+iLs} N(u(s))`, then the exact phase.
fn duhamel<T: Real>(
    data: &SolverState<T>,
    prev: &[SolverState<T>],
    config: &SolverConfig<T>,
) -> Vec<SolverState<T>> {
    let half_dt = config.dt * lit(0.5);
    let pulled: Vec<SolverState<T>> = prev
        .iter()
        .enumerate()
        .map(|(j, u)| {
            let rate = nonlinearity(u, config.c, config.dealias).as_rate();
            linear_propagator(&rate, -time(config, j), config.c)
        })
        .collect();
    let mut out = Vec::with_capacity(prev.len());
    let mut acc = data.clone();
    acc.t = T::zero();
    out.push(acc.clone());
    for j in 1..prev.len() {
        acc = acc.axpy(half_dt, &pulled[j - 1]).axpy(half_dt, &pulled[j]);
        let mut u = linear_propagator(&acc, time(config, j), config.c);
        u.t = time(config, j);
        out.push(u);
    }
    out
}

/// Picard iteration of the Duhamel map on `[0, T]`.
pub fn picard_iterate<T: Real>(
    data: &SolverState<T>,
    config: &SolverConfig<T>,
) -> Result<Trajectory<T>> {
    config.validate()?;
    if !data.is_finite() {
        return Err(LabError::NonFinite("initial data".into()));
    }
    let steps = config.steps();
    let mut iterate: Vec<SolverState<T>> = (0..=steps)
        .map(|j| {
            let mut u = linear_propagator(data, time(config, j), config.c);
            u.t = time(config, j);
            u
        })
        .collect();
    let mut diffs = Vec::with_capacity(config.picard_iters);
    for k in 0..config.picard_iters {
        let next = if config.nonlinearity_on {
            duhamel(data, &iterate, config)
        } else {
            iterate.clone()
        };
        if next.iter().any(|u| !u.is_finite()) {
            return Err(LabError::NonFinite(format!("Picard iterate {}", k + 1)));
        }
        diffs.push(to_f64(sup_distance(&next, &iterate, config.s)));
        iterate = next;
    }
    let sup_norm = iterate
        .iter()
        .fold(0.0f64, |m, u| m.max(to_f64(u.norm(config.s))));
    Ok(Trajectory {
        states: iterate,
        report: ContractionReport::new(diffs, sup_norm),
    })
}

/// Strang step: half linear, midpoint-rule nonlinear step, half linear.
pub fn strang_step<T: Real>(state: &SolverState<T>, config: &SolverConfig<T>) -> SolverState<T> {
    let h = config.dt * lit(0.5);
    let a = linear_propagator(state, h, config.c);
    let b = if config.nonlinearity_on {
        let k1 = nonlinearity(&a, config.c, config.dealias).as_rate();
        let mid = a.axpy(h, &k1);
        let k2 = nonlinearity(&mid, config.c, config.dealias).as_rate();
        a.axpy(config.dt, &k2)
    } else {
        a
    };
    linear_propagator(&b, h, config.c)
}

/// Strang-split solution at `t = T`.
pub fn strang_solve<T: Real>(
    data: &SolverState<T>,
    config: &SolverConfig<T>,
) -> Result<SolverState<T>> {
    config.validate()?;
    let mut u = data.clone();
    for _ in 0..config.steps() {
        u = strang_step(&u, config);
        if !u.is_finite() {
            return Err(LabError::NonFinite(format!("Strang step at t = {}", u.t)));
        }
    }
    Ok(u)
}

/// Relative tolerance a Picard run must reach to count as converged.
pub const CONVERGENCE_TOL: f64 = 1e-8;

/// `sup_t ‖u[data + η·d] − u[data]‖ / η` with `d` normalised to unit
/// `H^s × Ḣ^s` norm.
pub fn data_sensitivity_probe<T: Real>(
    data: &SolverState<T>,
    direction: &SolverState<T>,
    eta: T,
    config: &SolverConfig<T>,
) -> Result<T> {
    if eta == T::zero() {
        return Ok(T::zero());
    }
    let dn = direction.norm(config.s);
    if !(dn > T::zero()) {
        return Err(LabError::Degenerate("perturbation direction has zero norm".into()));
    }
    let base = picard_iterate(data, config)?;
    let pert = picard_iterate(&data.axpy(eta / dn, direction), config)?;
    for (name, run) in [("base", &base), ("perturbed", &pert)] {
        if !run.report.converged(CONVERGENCE_TOL) {
            return Err(LabError::Precondition(format!(
                "{name} Picard run did not converge: d = {:?}",
                run.report.diffs
            )));
        }
    }
    Ok(sup_distance(&pert.states, &base.states, config.s) / eta)
}

/// Per-step diagnostics as CSV: `step,t,norm,reality_defect`.
pub fn diagnostics_csv<T: Real>(states: &[SolverState<T>], s: T) -> String {
    let mut out = String::from("step,t,norm,reality_defect\n");
    for (j, u) in states.iter().enumerate() {
        out.push_str(&format!(
            "{j},{},{},{}\n",
            to_f64(u.t),
            to_f64(u.norm(s)),
            to_f64(u.reality_defect())
        ));
    }
    out
}

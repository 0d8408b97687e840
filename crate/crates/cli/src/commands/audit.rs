use kgz_core::forms::{joint_b_window, summability_audit};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::Outcome;
use crate::config::{require, OneOrMany};
use crate::error::CliError;
use crate::output::Artifacts;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditConfig {
    pub seed: u64,
    pub s: OneOrMany<f64>,
    #[serde(default = "default_b")]
    pub b: f64,
}

fn default_b() -> f64 {
    0.55
}

pub fn run(cfg: &AuditConfig) -> Result<Outcome, CliError> {
    let values = cfg.s.to_vec();
    require(!values.is_empty(), "`s` is empty")?;
    let mut art = Artifacts::default();
    let mut csv = String::from("s,b,case,exponent_n0,exponent_n1,epsilon,converges\n");
    let mut failing = Vec::new();
    for &s in &values {
        let budgets = summability_audit(s, cfg.b)
            .map_err(|e| CliError::Config(e.to_string()))?;
        for e in &budgets {
            art.record("budget", e);
            csv.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                e.s,
                e.b,
                e.case_id.name(),
                e.exponent_n0,
                e.exponent_n1,
                e.epsilon,
                e.converges()
            ));
            if !e.converges() {
                failing.push(format!("{} at s = {s}", e.case_id.name()));
            }
        }
        let window = joint_b_window(s);
        art.record(
            "b-window",
            &json!({ "s": s, "b_lo": window.map(|w| w.0), "b_hi": window.map(|w| w.1) }),
        );
    }
    art.set_summary(csv);
    let msg = if failing.is_empty() {
        "every case budget converges".to_string()
    } else {
        format!("non-convergent: {}", failing.join(", "))
    };
    Ok(Outcome::new(cfg, failing.is_empty(), msg, art))
}

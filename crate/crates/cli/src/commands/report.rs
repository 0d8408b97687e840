use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::Outcome;
use crate::config::require;
use crate::error::CliError;
use crate::output::{Artifacts, RESULTS};
use crate::svg::{Chart, Scale, Series};

/// Aggregates the `results.jsonl` of earlier runs.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportConfig {
    pub seed: u64,
    pub inputs: Vec<String>,
}

#[derive(Default)]
struct Collected {
    probe: Vec<Series>,
    contraction: Vec<Series>,
    eset: Vec<Series>,
}

fn push(list: &mut Vec<Series>, name: String, point: (f64, f64)) {
    match list.iter_mut().find(|(n, _)| *n == name) {
        Some((_, pts)) => pts.push(point),
        None => list.push((name, vec![point])),
    }
}

fn num(v: &Value) -> Option<f64> {
    v.as_f64()
}

fn probe_axis(rec: &Value) -> Option<f64> {
    let blocks = &rec["spec"]["blocks"];
    let v = match rec["sweep"].as_str()? {
        "N0" => &blocks[0]["N"],
        "N1" => &blocks[1]["N"],
        "N2" => &blocks[2]["N"],
        "L0" => &blocks[0]["L"],
        "L1" => &blocks[1]["L"],
        "L2" => &blocks[2]["L"],
        _ => return None,
    };
    num(v)
}

fn collect(input: &str, text: &str, out: &mut Collected) -> Result<(), CliError> {
    for (k, line) in text.lines().enumerate() {
        let rec: Value = serde_json::from_str(line)
            .map_err(|e| CliError::Config(format!("{input}: line {}: {e}", k + 1)))?;
        match rec["record"].as_str() {
            Some("probe") => {
                if let (Some(x), Some(y)) = (probe_axis(&rec), num(&rec["max_ratio"])) {
                    let name = format!(
                        "{} {}",
                        rec["rhs_formula"].as_str().unwrap_or("?"),
                        rec["sweep"].as_str().unwrap_or("?")
                    );
                    push(&mut out.probe, name, (x, y));
                }
            }
            Some("contraction") => {
                let name = format!("{input} #{}", out.contraction.len() + 1);
                let diffs = rec["report"]["diffs"].as_array().cloned().unwrap_or_default();
                let pts = diffs
                    .iter()
                    .enumerate()
                    .filter_map(|(i, d)| num(d).map(|d| ((i + 1) as f64, d)))
                    .collect();
                out.contraction.push((name, pts));
            }
            Some("eset") => {
                let (n, lf, lg) = (num(&rec["N"]), num(&rec["L_f"]), num(&rec["L_g"]));
                if let (Some(n), Some(lf), Some(lg), Some(r)) = (n, lf, lg, num(&rec["ratio"])) {
                    let name = format!("{} N={n}", rec["mode"].as_str().unwrap_or("?"));
                    push(&mut out.eset, name, (lf * lg, r));
                }
            }
            _ => {}
        }
    }
    Ok(())
}

pub fn run(cfg: &ReportConfig) -> Result<Outcome, CliError> {
    require(!cfg.inputs.is_empty(), "`inputs` is empty")?;
    let mut data = Collected::default();
    for input in &cfg.inputs {
        let path = Path::new(input).join(RESULTS);
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        collect(input, &text, &mut data)?;
    }

    let mut art = Artifacts::default();
    let mut csv = String::from("group,series,x,y\n");
    for (group, list) in [("probe", &data.probe), ("contraction", &data.contraction), ("eset", &data.eset)] {
        for (name, pts) in list {
            art.record("series", &json!({ "group": group, "series": name, "points": pts }));
            for (x, y) in pts {
                csv.push_str(&format!("{group},{name},{x},{y:e}\n"));
            }
        }
    }
    art.set_summary(csv);

    let charts = [
        (
            "probe_ratios.svg",
            Chart {
                title: "Bilinear probe: max ratio vs dyadic parameter",
                x_label: "dyadic parameter",
                y_label: "max ratio",
                x_scale: Scale::Log,
                y_scale: Scale::Log,
            },
            &data.probe,
        ),
        (
            "contraction.svg",
            Chart {
                title: "Picard successive differences",
                x_label: "iteration",
                y_label: "sup-time difference",
                x_scale: Scale::Linear,
                y_scale: Scale::Log,
            },
            &data.contraction,
        ),
        (
            "eset_ratios.svg",
            Chart {
                title: "E-set measure / bound",
                x_label: "L_f L_g",
                y_label: "ratio",
                x_scale: Scale::Log,
                y_scale: Scale::Log,
            },
            &data.eset,
        ),
    ];
    let mut made = Vec::new();
    for (name, chart, series) in charts {
        if !series.is_empty() {
            art.file(name, chart.render(series).into_bytes());
            made.push(name);
        }
    }
    let msg = format!("{} inputs, plots: {}", cfg.inputs.len(), made.join(" "));
    Ok(Outcome::new(cfg, true, msg, art))
}

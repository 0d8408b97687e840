mod audit;
mod eset;
mod geometry;
mod modulation;
mod probe;
mod report;
mod solve;

use serde::Serialize;
use serde_json::Value;

pub use audit::AuditConfig;
pub use eset::EsetConfig;
pub use geometry::{GeometryConfig, ROTATION_TOL};
pub use modulation::ModulationConfig;
pub use probe::ProbeConfig;
pub use report::ReportConfig;
pub use solve::SolveConfig;

use crate::config::{config_hash, RawConfig};
use crate::error::{CliError, Status};
use crate::output::Artifacts;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    CheckModulation,
    EsetMeasure,
    Geometry,
    ProbeBilinear,
    AuditExponents,
    Solve,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckModulation => "check-modulation",
            Command::EsetMeasure => "eset-measure",
            Command::Geometry => "geometry",
            Command::ProbeBilinear => "probe-bilinear",
            Command::AuditExponents => "audit-exponents",
            Command::Solve => "solve",
            Command::Report => "report",
        }
    }
}

pub struct Outcome {
    pub config: Value,
    pub config_hash: String,
    pub status: Status,
    pub message: String,
    pub artifacts: Artifacts,
}

impl Outcome {
    fn new<C: Serialize>(config: &C, passed: bool, message: String, artifacts: Artifacts) -> Self {
        Self {
            config: serde_json::to_value(config).expect("config serialises"),
            config_hash: config_hash(config),
            status: Status::from_passed(passed),
            message,
            artifacts,
        }
    }
}

/// Parses the typed config for `command`, then runs it.
pub fn execute(command: Command, raw: &RawConfig) -> Result<Outcome, CliError> {
    match command {
        Command::CheckModulation => modulation::run(&raw.typed()?),
        Command::EsetMeasure => eset::run(&raw.typed()?),
        Command::Geometry => geometry::run(&raw.typed()?),
        Command::ProbeBilinear => probe::run(&raw.typed()?),
        Command::AuditExponents => audit::run(&raw.typed()?),
        Command::Solve => solve::run(&raw.typed()?),
        Command::Report => report::run(&raw.typed()?),
    }
}

fn campaign_csv(rows: &[kgz_core::oracles::CampaignSummary]) -> String {
    let mut out = String::from("kind,c,level,samples,draws,admissible,violations,min_margin\n");
    for s in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{:e}\n",
            s.kind,
            s.c,
            s.level.map(|l| l.to_string()).unwrap_or_default(),
            s.samples,
            s.draws,
            s.admissible,
            s.violations,
            s.min_margin
        ));
    }
    out
}

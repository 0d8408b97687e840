//! Run artifacts: `results.jsonl`, `summary.csv`, extra files and the manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, Status};

pub const MANIFEST: &str = "manifest.json";
pub const RESULTS: &str = "results.jsonl";
pub const SUMMARY: &str = "summary.csv";

/// Everything a command produced; written in one pass by [`Artifacts::write`].
#[derive(Default)]
pub struct Artifacts {
    records: Vec<String>,
    summary: String,
    extra: Vec<(String, Vec<u8>)>,
}

impl Artifacts {
    /// Appends one JSON line tagged with `record`.
    pub fn record<T: Serialize>(&mut self, record: &str, body: &T) {
        let mut value = serde_json::to_value(body).expect("record serialises");
        match &mut value {
            Value::Object(map) => {
                map.insert("record".into(), Value::String(record.into()));
            }
            other => {
                value = json!({ "record": record, "value": other.take() });
            }
        }
        self.records.push(value.to_string());
    }

    pub fn set_summary(&mut self, csv: String) {
        self.summary = csv;
    }

    pub fn summary_mut(&mut self) -> &mut String {
        &mut self.summary
    }

    pub fn file(&mut self, name: &str, bytes: Vec<u8>) {
        self.extra.push((name.into(), bytes));
    }

    pub fn records(&self) -> &[String] {
        &self.records
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<String>, CliError> {
        fs::create_dir_all(dir)?;
        let mut lines = self.records.join("\n");
        if !lines.is_empty() {
            lines.push('\n');
        }
        fs::write(dir.join(RESULTS), lines)?;
        fs::write(dir.join(SUMMARY), &self.summary)?;
        let mut names = vec![RESULTS.to_string(), SUMMARY.to_string()];
        for (name, bytes) in &self.extra {
            fs::write(dir.join(name), bytes)?;
            names.push(name.clone());
        }
        Ok(names)
    }
}

pub struct Manifest<'a> {
    pub command: &'a str,
    pub config: Option<Value>,
    pub config_hash: Option<String>,
    pub status: Status,
    pub message: Option<String>,
    pub files: Vec<String>,
}

impl Manifest<'_> {
    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        fs::create_dir_all(dir)?;
        let body = json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": self.config,
            "config_sha256": self.config_hash,
            "status": self.status.name(),
            "exit_code": self.status.code(),
            "message": self.message,
            "files": self.files,
        });
        let path = dir.join(MANIFEST);
        let mut text = serde_json::to_string_pretty(&body).expect("manifest serialises");
        text.push('\n');
        fs::write(&path, text)?;
        Ok(path)
    }
}

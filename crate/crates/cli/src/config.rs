//! Key-value run configuration.
//!
//! A config file is TOML restricted to top-level keys. `seed` is mandatory;
//! unknown keys are rejected so a typo cannot silently fall back to a default.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Parsed file with the `--seed` override applied.
pub struct RawConfig {
    table: toml::Table,
}

impl RawConfig {
    pub fn parse(text: &str, seed_override: Option<u64>) -> Result<Self, CliError> {
        let mut table: toml::Table =
            text.parse().map_err(|e| CliError::Config(format!("not a key-value file: {e}")))?;
        if let Some((key, _)) = table.iter().find(|(_, v)| v.is_table()) {
            return Err(CliError::Config(format!("nested section `{key}` is not allowed")));
        }
        if let Some(seed) = seed_override {
            let seed = i64::try_from(seed)
                .map_err(|_| CliError::Config(format!("seed {seed} does not fit the file format")))?;
            table.insert("seed".into(), toml::Value::Integer(seed));
        }
        match table.get("seed") {
            Some(toml::Value::Integer(s)) if *s >= 0 => {}
            Some(_) => return Err(CliError::Config("seed must be a non-negative integer".into())),
            None => return Err(CliError::Config("missing mandatory key `seed`".into())),
        }
        Ok(Self { table })
    }

    pub fn typed<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        T::deserialize(toml::Value::Table(self.table.clone()))
            .map_err(|e| CliError::Config(e.to_string()))
    }
}

/// SHA-256 of the canonical JSON form of an effective config.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    let value = serde_json::to_value(config).expect("config serialises");
    let digest = Sha256::digest(value.to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// A scalar or a list in the file; always a list in code.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

pub fn require(cond: bool, msg: impl Into<String>) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Config(msg.into()))
    }
}

pub fn dyadic_list(name: &str, values: &[u64]) -> Result<(), CliError> {
    require(!values.is_empty(), format!("`{name}` is empty"))?;
    match values.iter().find(|v| !v.is_power_of_two()) {
        Some(v) => Err(CliError::Config(format!("`{name}` entry {v} is not a power of two"))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Deserialize, Serialize)]
    #[serde(deny_unknown_fields)]
    struct Demo {
        seed: u64,
        #[serde(default)]
        c: Option<OneOrMany<f64>>,
    }

    #[test]
    fn seed_is_mandatory_and_overridable() {
        assert!(RawConfig::parse("", None).is_err());
        assert!(RawConfig::parse("c = 0.5", None).is_err());
        let raw = RawConfig::parse("c = 0.5", Some(9)).unwrap();
        let d: Demo = raw.typed().unwrap();
        assert_eq!(d.seed, 9);
        assert_eq!(d.c.unwrap().to_vec(), vec![0.5]);
    }

    #[test]
    fn rejects_unknown_keys_and_sections() {
        let raw = RawConfig::parse("seed = 1\ncc = 2", None).unwrap();
        assert!(raw.typed::<Demo>().is_err());
        assert!(RawConfig::parse("seed = 1\n[x]\ny = 2", None).is_err());
    }

    #[test]
    fn hash_is_stable() {
        let a = Demo { seed: 1, c: None };
        assert_eq!(config_hash(&a), config_hash(&Demo { seed: 1, c: None }));
        assert_ne!(config_hash(&a), config_hash(&Demo { seed: 2, c: None }));
    }
}

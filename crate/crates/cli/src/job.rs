//! Job files: a germ, a command and its options, plus optional expectations.

use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::CliError;

pub const DEFAULT_TRUNC: u32 = 16;
pub const MIN_TRUNC: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Classify,
    Rates,
    Eigen,
    Exceptional,
    Walk,
    Rigidify,
    Curves,
    FirstAction,
    NormalForm,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Rates => "rates",
            Command::Eigen => "eigen",
            Command::Exceptional => "exceptional",
            Command::Walk => "walk",
            Command::Rigidify => "rigidify",
            Command::Curves => "curves",
            Command::FirstAction => "first-action",
            Command::NormalForm => "normal-form",
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    pub germ: String,
    #[serde(rename = "N", default = "default_trunc")]
    pub trunc: u32,
    /// Blow-up centers for `walk`, e.g. `z:0,w:0`.
    #[serde(default)]
    pub steps: Option<String>,
    #[serde(default)]
    pub max_steps: Option<u32>,
    /// Number of iterates for `rates`.
    #[serde(default)]
    pub iterates: Option<u32>,
    #[serde(default)]
    pub format: Option<Format>,
    /// The statement this job reproduces.
    #[serde(default)]
    pub claim: Option<String>,
    /// Dotted paths into the result with their expected values.
    #[serde(default)]
    pub expect: Option<toml::Table>,
}

fn default_trunc() -> u32 {
    DEFAULT_TRUNC
}

impl JobSpec {
    pub fn inline(command: Command, germ: String, trunc: u32) -> Self {
        JobSpec {
            command,
            germ,
            trunc,
            steps: None,
            max_steps: None,
            iterates: None,
            format: None,
            claim: None,
            expect: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let src = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&src).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.trunc < MIN_TRUNC {
            return Err(CliError::Parse(format!("N = {} is below the minimum {MIN_TRUNC}", self.trunc)));
        }
        if self.command == Command::Walk && self.steps.is_none() {
            return Err(CliError::Parse("walk needs steps".into()));
        }
        Ok(())
    }
}

/// Compares each expectation with the value found at its dotted path.
pub fn check_expectations(expect: &toml::Table, result: &Value) -> Vec<String> {
    let mut failures = Vec::new();
    for (path, want) in expect {
        let want = serde_json::to_value(want).expect("toml values are plain data");
        let mut cur = Some(result);
        for key in path.split('.') {
            cur = cur.and_then(|v| match v {
                Value::Object(m) => m.get(key),
                Value::Array(a) => key.parse::<usize>().ok().and_then(|k| a.get(k)),
                _ => None,
            });
        }
        match cur {
            Some(got) if *got == want => {}
            Some(got) => failures.push(format!("{path}: expected {want}, got {got}")),
            None => failures.push(format!("{path}: missing from the result")),
        }
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn dotted_paths_reach_nested_values() {
        let expect: toml::Table = toml::from_str("\"a.b\" = 3\n\"c.1\" = \"x\"\nmissing = true\n").unwrap();
        let result = json!({"a": {"b": 3}, "c": ["w", "x"]});
        let failures = check_expectations(&expect, &result);
        assert_eq!(failures, vec!["missing: missing from the result".to_string()]);
    }

    #[test]
    fn mismatch_names_both_values() {
        let expect: toml::Table = toml::from_str("k = 1\n").unwrap();
        let failures = check_expectations(&expect, &json!({"k": 2}));
        assert_eq!(failures, vec!["k: expected 1, got 2".to_string()]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<JobSpec>("command = \"classify\"\ngerm = \"(z, w)\"\nbogus = 1\n").is_err());
        let j: JobSpec = toml::from_str("command = \"normal-form\"\ngerm = \"(z, w)\"\n").unwrap();
        assert_eq!(j.trunc, DEFAULT_TRUNC);
        assert_eq!(j.command, Command::NormalForm);
    }
}

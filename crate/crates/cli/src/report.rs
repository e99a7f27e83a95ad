//! Machine-readable run reports (`report-v1`).
//!
//! Every command can dual-emit: a human-readable table on standard output
//! and a structured JSON file for golden tests. Reports carry no
//! timestamps or environment data, so identical invocations produce
//! byte-identical bytes.

use std::path::Path;

use serde_json::{json, Value};

pub const SCHEMA: &str = "report-v1";

/// Process outcome, mapped to the exit code contract: 0 success, 2
/// certification failure, 3 not-a-recognizer, 4 invalid input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    CertificationFailure,
    NotARecognizer,
    InvalidInput,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::CertificationFailure => 2,
            Outcome::NotARecognizer => 3,
            Outcome::InvalidInput => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Success => "success",
            Outcome::CertificationFailure => "certification-failure",
            Outcome::NotARecognizer => "not-a-recognizer",
            Outcome::InvalidInput => "invalid-input",
        }
    }
}

pub fn render(
    command: &str,
    input: &str,
    params: Value,
    results: Value,
    outcome: Outcome,
) -> String {
    let envelope = json!({
        "schema": SCHEMA,
        "command": command,
        "input": input,
        "params": params,
        "outcome": outcome.as_str(),
        "results": results,
    });
    let mut text = serde_json::to_string_pretty(&envelope).expect("serializable report");
    text.push('\n');
    text
}

pub fn write(
    path: Option<&Path>,
    command: &str,
    input: &str,
    params: Value,
    results: Value,
    outcome: Outcome,
) -> Result<(), String> {
    if let Some(path) = path {
        let text = render(command, input, params, results, outcome);
        std::fs::write(path, text)
            .map_err(|e| format!("cannot write report {}: {e}", path.display()))?;
    }
    Ok(())
}

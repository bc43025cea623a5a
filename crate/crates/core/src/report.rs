//! Machine-readable record of one command run.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub domain: String,
    pub command: String,
    pub parameters: Value,
    pub results: Value,
    pub error_estimates: Value,
    pub wall_time_s: f64,
    pub tool_version: String,
    pub seed: Option<u64>,
}

impl ReportRecord {
    pub fn new(domain: &str, command: &str, parameters: Value) -> Self {
        ReportRecord {
            domain: domain.to_string(),
            command: command.to_string(),
            parameters,
            results: Value::Null,
            error_estimates: Value::Null,
            wall_time_s: 0.0,
            tool_version: TOOL_VERSION.to_string(),
            seed: None,
        }
    }
}

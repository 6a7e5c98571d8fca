//! JSON reports. Exact values are `"p/q"` strings; every exact value is
//! paired with a decimal annotation.

use erglab::measure::Partition;
use erglab::rational::{format, to_f64, Q};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub fn exact(x: &Q) -> Value {
    json!({ "exact": format(x), "decimal": to_f64(x) })
}

pub fn exact_list<'a>(xs: impl IntoIterator<Item = &'a Q>) -> Value {
    Value::Array(xs.into_iter().map(exact).collect())
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn blocks(p: &Partition) -> Value {
    json!(p.blocks())
}

/// Outcome of one command: the JSON report, an optional CSV rendering, and
/// whether a checked property failed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub csv: Option<String>,
    pub violated: bool,
}

impl Outcome {
    pub fn new(command: &str, input_digest: String, result: Value, verdicts: Value) -> Self {
        let violated = verdicts.as_object().is_some_and(|m| m.values().any(|v| v == &Value::Bool(false)));
        let report = json!({
            "command": command,
            "input_digest": input_digest,
            "result": result,
            "verdicts": verdicts,
        });
        Self { report, csv: None, violated }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

use std::time::Duration;

use anyhow::Result;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u64 = 1;

/// Builds the report envelope. Keys serialize in sorted order, so parsing a
/// report and writing it back reproduces the same bytes.
pub fn run_report(command: &str, inputs: Value, results: impl Serialize, elapsed: Duration) -> Result<Value> {
    Ok(json!({
        "command": command,
        "schema_version": SCHEMA_VERSION,
        "engine_version": polytile_core::ENGINE_VERSION,
        "inputs": inputs,
        "results": serde_json::to_value(results)?,
        "timing_ms": elapsed.as_millis() as u64,
    }))
}

pub fn render(report: &Value) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("values always serialize");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_identical() {
        let report = run_report(
            "demo",
            json!({"z": 1, "a": [3, 2]}),
            json!({"ratio": "22/14", "nested": {"b": true, "a": null}}),
            Duration::from_millis(12),
        )
        .unwrap();
        let text = render(&report);
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(render(&parsed), text);
        assert!(text.find("\"command\"").unwrap() < text.find("\"engine_version\"").unwrap());
    }
}

//! Versioned JSON documents. Every document carries `format_version` and a
//! `kind` tag at the top level.

use serde::Serialize;
use serde_json::{json, Value};

use crate::checker::witness::WitnessOrderReport;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    format_version: u32,
    kind: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

/// Wraps a struct-like value; its fields land next to the version tag.
pub fn versioned<T: Serialize>(kind: &str, body: &T) -> Value {
    serde_json::to_value(Versioned {
        format_version: FORMAT_VERSION,
        kind,
        body,
    })
    .expect("report types serialize to JSON objects")
}

pub fn to_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// The witness report with pair and chain lists cut to `limit` entries.
pub fn witness_json(report: &WitnessOrderReport, limit: usize) -> Value {
    let pairs: Vec<[String; 2]> = report
        .sampled_pairs()
        .take(limit)
        .map(|(s, t)| [s.to_string(), t.to_string()])
        .collect();
    let body = json!({
        "passed": report.passed(),
        "incomplete": report.incomplete,
        "nodes": report.nodes.len(),
        "pairs": report.pairs.len(),
        "sample_pairs": pairs,
        "obligations": report.obligations,
        "cycle": report.cycle,
        "chains": report.chains.iter().take(limit).collect::<Vec<_>>(),
    });
    versioned("witness-order", &body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Body {
        verdict: &'static str,
    }

    #[test]
    fn version_tag_is_top_level() {
        let v = versioned("proof", &Body { verdict: "YES" });
        assert_eq!(v["format_version"], FORMAT_VERSION);
        assert_eq!(v["kind"], "proof");
        assert_eq!(v["verdict"], "YES");
        assert!(to_json(&v).ends_with("}\n"));
    }
}

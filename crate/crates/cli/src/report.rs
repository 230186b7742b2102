//! CSV and JSON rendering.

use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;
pub const CSV_HEADER: &str = "r,actual,bound,gap";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Row {
    pub r: f64,
    pub actual: f64,
    pub bound: f64,
    pub gap: f64,
}

impl Row {
    /// `gap = bound − actual`.
    pub fn new(r: f64, actual: f64, bound: f64) -> Self {
        Self { r, actual, bound, gap: bound - actual }
    }
}

/// A radial table plus a free-form summary.
#[derive(Debug, Clone)]
pub struct RadialReport {
    pub command: String,
    pub model: String,
    pub bound: String,
    pub rows: Vec<Row>,
    pub summary: Value,
}

impl RadialReport {
    pub fn csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.r, r.actual, r.bound, r.gap));
        }
        out
    }

    pub fn json(&self) -> String {
        let v = json!({
            "schema": SCHEMA,
            "command": self.command,
            "model": self.model,
            "bound": self.bound,
            "rows": self.rows,
            "summary": self.summary,
        });
        pretty(&v)
    }
}

/// Wraps `body` with the schema version.
pub fn versioned(mut body: Value) -> Value {
    if let Value::Object(map) = &mut body {
        map.insert("schema".into(), json!(SCHEMA));
    }
    body
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialise");
    s.push('\n');
    s
}

/// `key: value` lines for a flat JSON object, for human-readable summaries.
pub fn text(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = v {
        for (k, val) in map {
            match val {
                Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                other => out.push_str(&format!("{k}: {other}\n")),
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let rep = RadialReport {
            command: "laplacian".into(),
            model: "m".into(),
            bound: "b".into(),
            rows: vec![Row::new(0.5, 1.0, 1.5)],
            summary: json!({}),
        };
        assert_eq!(rep.csv(), "r,actual,bound,gap\n0.5,1,1.5,0.5\n");
        let parsed: Value = serde_json::from_str(&rep.json()).unwrap();
        assert_eq!(parsed["schema"], 1);
        assert_eq!(parsed["rows"][0]["gap"], 0.5);
    }
}

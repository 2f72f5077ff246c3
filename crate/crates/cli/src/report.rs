//! Versioned JSON run reports and their plain-text summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const FORMAT: &str = "rdmlab/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub format: String,
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    /// Named pass/fail checks; `pass` is their conjunction.
    pub checks: BTreeMap<String, bool>,
    pub artifacts: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    pub pass: bool,
    /// Wall-clock seconds; omitted when reports must be byte-stable.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing: Option<f64>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            format: FORMAT.to_string(),
            command: command.to_string(),
            parameters: BTreeMap::new(),
            checks: BTreeMap::new(),
            artifacts: BTreeMap::new(),
            error: None,
            pass: false,
            timing: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.parameters.insert(key.to_string(), to_value(value));
        self
    }

    pub fn artifact(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.artifacts.insert(key.to_string(), to_value(value));
        self
    }

    pub fn check(&mut self, key: &str, ok: bool) -> &mut Self {
        self.checks.insert(key.to_string(), ok);
        self
    }

    pub fn recompute_pass(&self) -> bool {
        self.error.is_none() && !self.checks.is_empty() && self.checks.values().all(|&b| b)
    }

    pub fn finish(&mut self) {
        self.pass = self.recompute_pass();
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Plain-text view of the same evidence: parameters, scalar artifacts, checks.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} ({})", self.command, self.format);
        for (k, v) in &self.parameters {
            let _ = writeln!(out, "  {k:<28} {}", scalar(v).unwrap_or_else(|| v.to_string()));
        }
        for (k, v) in &self.artifacts {
            if let Some(s) = scalar(v) {
                let _ = writeln!(out, "  {k:<28} {s}");
            }
        }
        for (k, ok) in &self.checks {
            let _ = writeln!(out, "  [{}] {k}", if *ok { "PASS" } else { "FAIL" });
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "  error: {e}");
        }
        if let Some(t) = self.timing {
            let _ = writeln!(out, "  time {t:.3} s");
        }
        let _ = writeln!(out, "result: {}", if self.pass { "PASS" } else { "FAIL" });
        out
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        Value::String(s) if !s.contains('\n') => Some(s.clone()),
        Value::Null => Some("null".into()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_needs_checks_and_no_error() {
        let mut r = RunReport::new("x");
        r.finish();
        assert!(!r.pass);
        r.check("a", true).finish();
        assert!(r.pass);
        r.check("b", false).finish();
        assert!(!r.pass);
        r.checks.insert("b".into(), true);
        r.error = Some("boom".into());
        assert!(!r.recompute_pass());
    }

    #[test]
    fn json_round_trip() {
        let mut r = RunReport::new("ghz3");
        r.param("c", -1.0).artifact("eigenvalue", -2.0).check("certified", true).finish();
        let back = RunReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(!r.to_json().contains("timing"));
    }
}

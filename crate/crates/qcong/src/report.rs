//! JSON-lines check reports shared by the verification suites and the CLI.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Violation,
}

/// One verification item: `{"check": ..., "params": {...}, "status": "ok",
/// "witness": ...}` on its own line.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub check: String,
    pub params: serde_json::Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

impl Check {
    pub fn ok(check: &str, params: serde_json::Value) -> Self {
        Check { check: check.into(), params, status: Status::Ok, witness: None }
    }

    pub fn violation(check: &str, params: serde_json::Value, witness: serde_json::Value) -> Self {
        Check {
            check: check.into(),
            params,
            status: Status::Violation,
            witness: Some(witness),
        }
    }

    /// Ok when no witness was found, a violation carrying it otherwise.
    pub fn scan(check: &str, params: serde_json::Value, witness: Option<serde_json::Value>) -> Self {
        match witness {
            None => Self::ok(check, params),
            Some(w) => Self::violation(check, params, w),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Ok
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("check serializes")
    }
}

/// Render a batch as JSON lines; returns (text, all_passed).
pub fn render_report(checks: &[Check]) -> (String, bool) {
    let mut out = String::new();
    let mut all = true;
    for c in checks {
        out.push_str(&c.to_json_line());
        out.push('\n');
        all &= c.passed();
    }
    (out, all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let c = Check::ok("demo", serde_json::json!({"t": 5}));
        let line = c.to_json_line();
        assert!(line.contains("\"status\":\"ok\""));
        assert!(!line.contains("witness"));
        let v = Check::violation("demo", serde_json::json!({}), serde_json::json!(3));
        assert!(v.to_json_line().contains("\"witness\":3"));
    }
}

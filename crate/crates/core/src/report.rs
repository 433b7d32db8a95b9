//! Outcome records for verification checks.

use std::collections::BTreeMap;
use std::fmt::Debug;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Failed,
    Skipped,
}

/// One line of verification output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub status: Status,
    pub counts: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status != Status::Failed
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// Accumulates assertions for a single check.
#[derive(Debug, Clone)]
pub struct Check {
    report: CheckReport,
    failures: Vec<String>,
}

impl Check {
    pub fn new(id: impl Into<String>) -> Check {
        Check {
            report: CheckReport {
                check: id.into(),
                params: BTreeMap::new(),
                status: Status::Verified,
                counts: BTreeMap::new(),
                witness: None,
            },
            failures: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, v: impl Serialize) -> Check {
        self.report.params.insert(key.into(), serde_json::to_value(v).expect("serializable"));
        self
    }

    pub fn set_param(&mut self, key: &str, v: impl Serialize) {
        self.report.params.insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }

    pub fn count(&mut self, key: &str, v: impl Serialize) {
        self.report.counts.insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }

    pub fn ensure(&mut self, ok: bool, what: impl FnOnce() -> String) -> bool {
        if !ok {
            self.failures.push(what());
        }
        ok
    }

    /// Records `got` under `key` and requires it to equal `expected`.
    pub fn expect_eq<T: PartialEq + Debug + Serialize>(&mut self, key: &str, got: T, expected: T) -> bool {
        let ok = got == expected;
        if !ok {
            self.failures.push(format!("{key}: got {got:?}, expected {expected:?}"));
        }
        self.count(key, got);
        ok
    }

    pub fn fail(&mut self, what: impl Into<String>) {
        self.failures.push(what.into());
    }

    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn finish(mut self) -> CheckReport {
        if !self.failures.is_empty() {
            self.report.status = Status::Failed;
            let shown: Vec<&String> = self.failures.iter().take(5).collect();
            self.report.witness = Some(serde_json::to_value(shown).expect("strings serialize"));
            self.report.counts.insert("failures".into(), self.failures.len().into());
        }
        self.report
    }

    pub fn skip(mut self, reason: impl Into<String>) -> CheckReport {
        self.report.status = Status::Skipped;
        self.report.witness = Some(Value::String(reason.into()));
        self.report
    }
}

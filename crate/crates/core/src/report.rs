//! Machine-readable verification reports.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Pass,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
        }
    }

    pub fn error(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Error,
            witness: Some(witness.into()),
        }
    }

    /// Pass if `witness` is `None`, otherwise fail with it.
    pub fn from_witness(name: impl Into<String>, witness: Option<String>) -> Self {
        match witness {
            None => Check::pass(name),
            Some(w) => Check::fail(name, w),
        }
    }

    /// Pass with an informational witness.
    pub fn note(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Pass,
            witness: Some(witness.into()),
        }
    }

    pub fn from_result(name: impl Into<String>, r: crate::Result<Option<String>>) -> Self {
        match r {
            Ok(w) => Check::from_witness(name, w),
            Err(e) => Check::error(name, e.to_string()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub order: i64,
    pub params: Map<String, Value>,
    pub checks: Vec<Check>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(suite: impl Into<String>, order: i64) -> Self {
        Report {
            suite: suite.into(),
            order,
            params: Map::new(),
            checks: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// Appends another report's checks, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status != Status::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per check.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "suite {} (order {}, {} ms)\n",
            self.suite, self.order, self.elapsed_ms
        );
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Error => "ERROR",
            };
            match &c.witness {
                Some(w) => out.push_str(&format!("  {status} {}: {w}\n", c.name)),
                None => out.push_str(&format!("  {status} {}\n", c.name)),
            }
        }
        out
    }
}

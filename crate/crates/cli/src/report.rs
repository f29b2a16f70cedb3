use std::time::Duration;

use serde::{Deserialize, Serialize};

/// Version of every JSON document the tool prints.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Measured quantity.
    pub value: f64,
    /// Threshold it is held against.
    pub envelope: f64,
    /// envelope − value, negative on failure.
    pub margin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    /// Passes when value ≤ envelope.
    pub fn at_most(name: impl Into<String>, value: f64, envelope: f64) -> Self {
        let ok = value <= envelope;
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            value,
            envelope,
            margin: envelope - value,
            detail: None,
        }
    }

    /// A yes/no check; value counts the failures.
    pub fn exact(name: impl Into<String>, failures: usize, detail: Option<String>) -> Self {
        let mut c = Check::at_most(name, failures as f64, 0.0);
        c.detail = detail;
        c
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    pub checks: Vec<Check>,
    pub status: Status,
    pub wall_clock_ms: u64,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            suite: suite.into(),
            checks: Vec::new(),
            status: Status::Pass,
            wall_clock_ms: 0,
        }
    }

    pub fn push(&mut self, check: Check) {
        if !check.passed() {
            self.status = Status::Fail;
        }
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        for c in other.checks {
            self.push(c);
        }
    }

    pub fn finish(mut self, elapsed: Duration) -> Self {
        self.wall_clock_ms = elapsed.as_millis() as u64;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,name,status,value,envelope,margin\n");
        for c in &self.checks {
            let status = if c.passed() { "pass" } else { "fail" };
            out.push_str(&format!(
                "{},{},{status},{:e},{:e},{:e}\n",
                self.suite, c.name, c.value, c.envelope, c.margin
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn any_failure_fails_the_report() {
        let mut r = Report::new("demo");
        r.push(Check::at_most("a", 1.0, 2.0));
        assert!(r.passed());
        r.push(Check::exact("b", 1, None));
        assert!(!r.passed());
        let json = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(json.contains("\"schema_version\":1"));
    }
}

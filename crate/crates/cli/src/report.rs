//! JSON report shared by every subcommand.

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Unknown => 2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unknown => "UNKNOWN",
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub topic: String,
    pub status: Status,
    pub payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub checks: Vec<Check>,
    pub status: Status,
    #[serde(skip)]
    timing: bool,
}

impl Report {
    pub fn new(command: String, timing: bool) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command,
            checks: Vec::new(),
            status: Status::Pass,
            timing,
        }
    }

    /// Runs `f`, timing it unless timing is disabled, and records the outcome.
    pub fn check<E>(
        &mut self,
        name: &str,
        topic: &str,
        f: impl FnOnce() -> Result<(Status, Value), E>,
    ) -> Result<Status, E> {
        let start = Instant::now();
        let (status, payload) = f()?;
        let runtime_ms = self.timing.then(|| start.elapsed().as_millis() as u64);
        self.checks.push(Check {
            name: name.into(),
            topic: topic.into(),
            status,
            payload,
            runtime_ms,
        });
        self.status = match (self.status, status) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Unknown, _) | (_, Status::Unknown) => Status::Unknown,
            _ => Status::Pass,
        };
        Ok(status)
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("{:<7} {}\n", c.status.label(), c.name));
        }
        out.push_str(&format!("overall: {}", self.status.label()));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_aggregation() {
        let mut r = Report::new("x".into(), false);
        r.check::<()>("a", "t", || Ok((Status::Pass, Value::Null)))
            .unwrap();
        assert_eq!(r.status, Status::Pass);
        r.check::<()>("b", "t", || Ok((Status::Unknown, Value::Null)))
            .unwrap();
        assert_eq!(r.status, Status::Unknown);
        r.check::<()>("c", "t", || Ok((Status::Fail, Value::Null)))
            .unwrap();
        r.check::<()>("d", "t", || Ok((Status::Unknown, Value::Null)))
            .unwrap();
        assert_eq!(r.status, Status::Fail);
        let json = serde_json::to_string(&r).unwrap();
        assert!(!json.contains("runtime_ms"));
        assert!(json.starts_with("{\"schema_version\":1"));
    }
}

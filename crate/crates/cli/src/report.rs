use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    /// Milliseconds.
    pub elapsed: f64,
}

impl Check {
    /// Runs `f`, which returns (passed, expected, actual). Errors count as failures.
    pub fn run<F>(name: &str, f: F) -> Check
    where
        F: FnOnce() -> ame_core::Result<(bool, String, String)>,
    {
        let start = Instant::now();
        let (status, expected, actual) = match f() {
            Ok((ok, expected, actual)) => (
                if ok { Status::Pass } else { Status::Fail },
                expected,
                actual,
            ),
            Err(e) => (Status::Fail, "no error".into(), format!("error: {e}")),
        };
        Check {
            name: name.into(),
            status,
            expected,
            actual,
            elapsed: start.elapsed().as_secs_f64() * 1e3,
        }
    }

    pub fn skip(name: &str, why: &str) -> Check {
        Check {
            name: name.into(),
            status: Status::Skip,
            expected: String::new(),
            actual: why.into(),
            elapsed: 0.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(suite: &str, seed: u64, checks: Vec<Check>) -> Self {
        SuiteReport {
            schema_version: SCHEMA_VERSION,
            suite: suite.into(),
            seed,
            passed: checks.iter().all(|c| c.status != Status::Fail),
            checks,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skip => "skip",
            };
            let _ = writeln!(
                out,
                "{tag}  {}: expected {}, got {} ({:.1} ms)",
                c.name, c.expected, c.actual, c.elapsed
            );
        }
        let failed = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        let _ = writeln!(
            out,
            "suite {}: {} checks, {failed} failed",
            self.suite,
            self.checks.len()
        );
        out
    }
}

/// Output of the non-suite subcommands.
#[derive(Clone, Debug, Serialize)]
pub struct CommandReport {
    pub schema_version: u32,
    pub command: String,
    pub passed: bool,
    pub report: Value,
}

impl CommandReport {
    pub fn new<T: Serialize>(command: &str, passed: bool, report: &T) -> Self {
        CommandReport {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            passed,
            report: serde_json::to_value(report).expect("reports serialize"),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {}\n",
            self.command,
            if self.passed { "pass" } else { "FAIL" }
        );
        flatten("", &self.report, &mut out);
        out
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) if a.len() > 8 => {
            let _ = writeln!(out, "  {prefix}: [{} items]", a.len());
        }
        _ => {
            let _ = writeln!(out, "  {prefix}: {v}");
        }
    }
}

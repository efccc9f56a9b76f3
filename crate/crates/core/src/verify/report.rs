use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

/// Outcome of one named check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// The statement being checked.
    pub claim: String,
    pub passed: bool,
    pub tolerance: String,
    pub computed: Value,
    pub expected: Value,
    pub notes: Vec<String>,
    /// Seed handed to this check, derived from the master seed.
    pub seed: u64,
    #[serde(skip)]
    pub runtime: Duration,
}

/// All check results of one run, in battery order.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub seeds: Vec<u64>,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Pretty JSON with sorted keys. Runtimes are included only on request,
    /// so that equal configurations give byte-identical output otherwise.
    pub fn to_json(&self, timings: bool) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        if timings {
            if let Some(checks) = value.get_mut("checks").and_then(Value::as_array_mut) {
                for (v, c) in checks.iter_mut().zip(&self.checks) {
                    v["runtime_ms"] = Value::from(c.runtime.as_secs_f64() * 1e3);
                }
            }
        }
        let mut out = serde_json::to_string_pretty(&value).expect("report serializes");
        out.push('\n');
        out
    }

    /// One line per check, then a total.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            writeln!(
                out,
                "{} {:width$}  {:>9.3}s  {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.runtime.as_secs_f64(),
                c.claim,
            )
            .unwrap();
            for n in &c.notes {
                writeln!(out, "     {:width$}  note: {n}", "").unwrap();
            }
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        writeln!(out, "{passed}/{} checks passed (seeds {:?})", self.checks.len(), self.seeds).unwrap();
        out
    }
}

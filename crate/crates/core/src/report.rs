//! Verification reports shared by every suite.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub context: String,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of one check: how many cases ran and which ones failed.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub check: String,
    pub config: BTreeMap<String, Value>,
    pub cases: u64,
    pub failures: Vec<Failure>,
    /// Named counters, e.g. failing pairs per block cell.
    pub tallies: BTreeMap<String, u64>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(check: &str) -> Report {
        Report { check: check.to_string(), ..Report::default() }
    }

    pub fn with_config(mut self, key: &str, value: impl Into<Value>) -> Report {
        self.config.insert(key.to_string(), value.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn case(&mut self) {
        self.cases += 1;
    }

    /// Counts one case and records a failure when `ok` is false.
    pub fn check(&mut self, ok: bool, failure: impl FnOnce() -> Failure) {
        self.cases += 1;
        if !ok {
            self.failures.push(failure());
        }
    }

    pub fn fail(&mut self, context: impl Into<String>, lhs: impl Into<String>, rhs: impl Into<String>) {
        self.failures.push(Failure { context: context.into(), lhs: lhs.into(), rhs: rhs.into() });
    }

    pub fn tally(&mut self, key: impl Into<String>, by: u64) {
        *self.tallies.entry(key.into()).or_insert(0) += by;
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Associative merge used when suites run in parallel chunks.
    pub fn merge(mut self, other: Report) -> Report {
        self.cases += other.cases;
        self.failures.extend(other.failures);
        for (k, v) in other.tallies {
            *self.tallies.entry(k).or_insert(0) += v;
        }
        self.notes.extend(other.notes);
        for (k, v) in other.config {
            self.config.entry(k).or_insert(v);
        }
        self
    }

    /// Folds `parts` into this report (keeps this report's name and config).
    pub fn absorb(&mut self, parts: Report) {
        let me = std::mem::take(self);
        *self = me.merge(parts);
    }

    /// Tallies sorted by decreasing count, then by key.
    pub fn ranked_tallies(&self) -> Vec<(&str, u64)> {
        let mut v: Vec<(&str, u64)> = self.tallies.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        v
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA_VERSION,
            "check": self.check,
            "config": self.config,
            "cases": self.cases,
            "passed": self.passed(),
            "failure_count": self.failures.len(),
            "failures": self.failures,
            "tallies": self.ranked_tallies().iter().map(|(k, v)| json!({"key": k, "count": v})).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }

    /// Human-readable rendering; shows at most `max_failures` failures.
    pub fn render_text(&self, max_failures: usize) -> String {
        let mut s = format!(
            "[{}] {}: {} cases, {} failures\n",
            if self.passed() { "PASS" } else { "FAIL" },
            self.check,
            self.cases,
            self.failures.len()
        );
        if !self.config.is_empty() {
            let cfg: Vec<String> = self.config.iter().map(|(k, v)| format!("{k}={v}")).collect();
            s += &format!("  config: {}\n", cfg.join(" "));
        }
        for f in self.failures.iter().take(max_failures) {
            s += &format!("  - {}: {} != {}\n", f.context, f.lhs, f.rhs);
        }
        if self.failures.len() > max_failures {
            s += &format!("  ... {} more\n", self.failures.len() - max_failures);
        }
        let ranked = self.ranked_tallies();
        for (k, v) in ranked.iter().take(20) {
            s += &format!("  # {k}: {v}\n");
        }
        if ranked.len() > 20 {
            s += &format!("  # ... {} more keys\n", ranked.len() - 20);
        }
        for n in &self.notes {
            s += &format!("  note: {n}\n");
        }
        s
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_text(10))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_is_additive() {
        let mut a = Report::new("x");
        a.check(true, || unreachable!());
        let mut b = Report::new("x");
        b.check(false, || Failure { context: "c".into(), lhs: "1".into(), rhs: "0".into() });
        b.tally("cell", 2);
        let m = a.merge(b);
        assert_eq!(m.cases, 2);
        assert!(!m.passed());
        assert_eq!(m.to_json()["schema"], 1);
        assert_eq!(m.ranked_tallies(), vec![("cell", 2)]);
    }
}

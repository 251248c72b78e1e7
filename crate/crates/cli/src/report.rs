//! Verification report documents: a deterministic list of named checks
//! with pass/fail/skipped status, emitted as stable line-oriented text or
//! as versioned JSON that round-trips losslessly.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subject {
    pub path: String,
    pub kind: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// One executed (or explicitly skipped) check. Failures always carry a
/// concrete witness; skips always carry a reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub statement: String,
    pub status: CheckStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Check {
    pub fn pass(name: &str, statement: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            statement: statement.into(),
            status: CheckStatus::Pass,
            witness: None,
            reason: None,
        }
    }

    pub fn fail(name: &str, statement: impl Into<String>, witness: Value) -> Self {
        Self {
            name: name.to_string(),
            statement: statement.into(),
            status: CheckStatus::Fail,
            witness: Some(witness),
            reason: None,
        }
    }

    pub fn skipped(name: &str, statement: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            statement: statement.into(),
            status: CheckStatus::Skipped,
            witness: None,
            reason: Some(reason.into()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(checks: &[Check]) -> Self {
        let mut s = Summary::default();
        for c in checks {
            match c.status {
                CheckStatus::Pass => s.pass += 1,
                CheckStatus::Fail => s.fail += 1,
                CheckStatus::Skipped => s.skipped += 1,
            }
        }
        s
    }

    pub fn total(&self) -> usize {
        self.pass + self.fail + self.skipped
    }

    fn absorb(&mut self, other: &Summary) {
        self.pass += other.pass;
        self.fail += other.fail;
        self.skipped += other.skipped;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub report_version: u32,
    pub tool_version: String,
    pub subject: Subject,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn new(subject: Subject, checks: Vec<Check>) -> Self {
        let summary = Summary::of(&checks);
        Self {
            report_version: REPORT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            subject,
            checks,
            summary,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// Stable line-oriented rendering, suitable for golden files.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("atomicity report v{}\n", self.report_version));
        out.push_str(&format!("subject: {} ({})\n", self.subject.path, self.subject.kind));
        render_checks(&mut out, &self.checks);
        out.push_str(&render_summary(&self.summary));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Several per-file reports folded into one document, ordered by input
/// position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub report_version: u32,
    pub tool_version: String,
    pub reports: Vec<VerificationReport>,
    pub summary: Summary,
}

impl AggregateReport {
    pub fn new(reports: Vec<VerificationReport>) -> Self {
        let mut summary = Summary::default();
        for r in &reports {
            summary.absorb(&r.summary);
        }
        Self {
            report_version: REPORT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            reports,
            summary,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("atomicity aggregate report v{}\n", self.report_version));
        for r in &self.reports {
            out.push_str(&format!("\nsubject: {} ({})\n", r.subject.path, r.subject.kind));
            render_checks(&mut out, &r.checks);
            out.push_str(&render_summary(&r.summary));
        }
        out.push_str(&format!("\ntotal: {}", render_summary(&self.summary)));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn render_checks(out: &mut String, checks: &[Check]) {
    for c in checks {
        let tag = match c.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "skip",
        };
        out.push_str(&format!("check [{tag}] {}: {}\n", c.name, c.statement));
        if let Some(w) = &c.witness {
            out.push_str(&format!("  witness: {w}\n"));
        }
        if let Some(r) = &c.reason {
            out.push_str(&format!("  reason: {r}\n"));
        }
    }
}

fn render_summary(s: &Summary) -> String {
    format!(
        "summary: {} checks: {} pass, {} fail, {} skipped\n",
        s.total(),
        s.pass,
        s.fail,
        s.skipped
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn subject() -> Subject {
        Subject { path: "specs/example.json".into(), kind: "hom".into() }
    }

    #[test]
    fn empty_report_renders_header_and_zero_summary() {
        let r = VerificationReport::new(subject(), vec![]);
        let text = r.to_text();
        assert!(text.starts_with("atomicity report v1\n"));
        assert!(text.contains("summary: 0 checks: 0 pass, 0 fail, 0 skipped"));
    }

    #[test]
    fn single_passing_check() {
        let r = VerificationReport::new(
            subject(),
            vec![Check::pass("axioms.closure", "products stay inside the element set")],
        );
        let text = r.to_text();
        assert!(text.contains("check [pass] axioms.closure:"));
        assert!(text.contains("summary: 1 checks: 1 pass, 0 fail, 0 skipped"));
        assert!(r.all_passed());
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let r = VerificationReport::new(
            subject(),
            vec![
                Check::pass("a.b", "fine"),
                Check::fail("c.d", "broken", json!({"x": 1, "y": 2})),
                Check::skipped("e.f", "later", "cap exceeded"),
            ],
        );
        let parsed = VerificationReport::from_json(&r.to_json()).unwrap();
        assert_eq!(r, parsed);
        assert!(!parsed.all_passed());
        assert_eq!(parsed.summary, Summary { pass: 1, fail: 1, skipped: 1 });
    }

    #[test]
    fn aggregate_round_trip_and_totals() {
        let a = VerificationReport::new(subject(), vec![Check::pass("a.a", "ok")]);
        let b = VerificationReport::new(
            Subject { path: "other.json".into(), kind: "linear-system".into() },
            vec![Check::fail("b.b", "bad", json!({"row": 1}))],
        );
        let agg = AggregateReport::new(vec![a, b]);
        assert!(!agg.all_passed());
        let parsed = AggregateReport::from_json(&agg.to_json()).unwrap();
        assert_eq!(agg, parsed);
        assert_eq!(parsed.summary.total(), 2);
    }

    #[test]
    fn identical_reports_render_identically() {
        let build = || {
            VerificationReport::new(
                subject(),
                vec![Check::fail("x.y", "statement", json!({"b": 2, "a": 1}))],
            )
        };
        assert_eq!(build().to_text(), build().to_text());
        assert_eq!(build().to_json(), build().to_json());
    }
}

//! Structured pass/fail results with witnesses.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The finite horizon could not decide the question.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// A concrete index where an inequality was evaluated, usually a violation.
/// `lhs` and `rhs` are exact strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub n: u64,
    pub detail: String,
    pub lhs: String,
    pub rhs: String,
}

impl Witness {
    pub fn new(n: u64, detail: impl Into<String>, lhs: impl Into<String>, rhs: impl Into<String>) -> Self {
        Witness { n, detail: detail.into(), lhs: lhs.into(), rhs: rhs.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub criterion: String,
    pub params: BTreeMap<String, String>,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    /// Extra named results (symbolic case verdicts, thresholds, …).
    pub details: BTreeMap<String, String>,
}

impl CheckReport {
    pub fn new(criterion: &str) -> Self {
        CheckReport {
            criterion: criterion.to_string(),
            params: BTreeMap::new(),
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
            details: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn detail(&mut self, key: &str, value: impl ToString) {
        self.details.insert(key.to_string(), value.to_string());
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.criterion, self.verdict)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        for w in self.witnesses.iter().take(5) {
            write!(f, "\n  n={} {}: {} vs {}", w.n, w.detail, w.lhs, w.rhs)?;
        }
        if self.witnesses.len() > 5 {
            write!(f, "\n  … {} more witnesses", self.witnesses.len() - 5)?;
        }
        for (k, v) in &self.details {
            write!(f, "\n  {k}: {v}")?;
        }
        Ok(())
    }
}

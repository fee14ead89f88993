//! Audit records: one checked inequality with its verdict and seed.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::states::StateDescriptor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "holds")]
    Holds,
    #[serde(rename = "holds (equality)")]
    HoldsEquality,
    #[serde(rename = "violated")]
    Violated,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl Verdict {
    pub fn is_violated(self) -> bool {
        self == Verdict::Violated
    }

    pub fn holds(self) -> bool {
        matches!(self, Verdict::Holds | Verdict::HoldsEquality)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HoldsEquality => "holds (equality)",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    /// Both sides are closed-form entropic quantities.
    Analytic,
    /// At least one side is an optimizer estimate.
    OptimizerAssisted,
}

impl Certification {
    pub fn as_str(self) -> &'static str {
        match self {
            Certification::Analytic => "analytic",
            Certification::OptimizerAssisted => "optimizer-assisted",
        }
    }
}

/// Direction of the audited inequality between `lhs` and `rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `lhs ≤ rhs`
    LessEq,
    /// `lhs ≥ rhs`
    GreaterEq,
}

/// An assumption the verdict depends on but which the audit cannot check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub claim_id: String,
    pub state: StateDescriptor,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    /// Signed slack of the inequality; positive when it holds strictly.
    pub margin: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub certification: Certification,
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hypotheses: Vec<Hypothesis>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Signed slack of `lhs relation rhs`.
pub fn margin(lhs: f64, rhs: f64, relation: Relation) -> f64 {
    match relation {
        Relation::LessEq => rhs - lhs,
        Relation::GreaterEq => lhs - rhs,
    }
}

/// Verdict from a margin: equality within `tol`, strict slack, or a
/// violation beyond `tol`.
pub fn judge(margin: f64, tol: f64) -> Verdict {
    if margin.is_nan() {
        Verdict::Inconclusive
    } else if margin.abs() <= tol {
        Verdict::HoldsEquality
    } else if margin > 0.0 {
        Verdict::Holds
    } else {
        Verdict::Violated
    }
}

impl AuditRecord {
    pub fn new(
        claim_id: &str,
        state: StateDescriptor,
        lhs: f64,
        rhs: f64,
        relation: Relation,
        tolerance: f64,
        certification: Certification,
    ) -> Self {
        let m = margin(lhs, rhs, relation);
        Self {
            claim_id: claim_id.to_string(),
            state,
            lhs,
            rhs,
            relation,
            margin: m,
            tolerance,
            verdict: judge(m, tolerance),
            certification,
            seed: None,
            extras: BTreeMap::new(),
            hypotheses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn extra(mut self, key: &str, value: f64) -> Self {
        self.extras.insert(key.to_string(), value);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Re-judge at a new tolerance; an inconclusive verdict is kept.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        if self.verdict != Verdict::Inconclusive {
            self.verdict = judge(self.margin, tolerance);
        }
        self
    }

    pub fn inconclusive(mut self, note: impl Into<String>) -> Self {
        self.verdict = Verdict::Inconclusive;
        self.notes.push(note.into());
        self
    }

    /// Check that the verdict agrees with `lhs`, `rhs` and the tolerance.
    pub fn is_consistent(&self) -> bool {
        let m = margin(self.lhs, self.rhs, self.relation);
        if (m - self.margin).abs() > 1e-12 * (1.0 + m.abs()) {
            return false;
        }
        match self.verdict {
            Verdict::Inconclusive => true,
            v => v == judge(m, self.tolerance),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{Family, StateDescriptor};

    fn desc() -> StateDescriptor {
        StateDescriptor::new(Family::Bell, vec![], None, None, None).unwrap()
    }

    #[test]
    fn verdicts_follow_margin() {
        let r = AuditRecord::new("x", desc(), 1.0, 2.0, Relation::LessEq, 1e-9, Certification::Analytic);
        assert_eq!(r.verdict, Verdict::Holds);
        assert!((r.margin - 1.0).abs() < 1e-15);
        let r = AuditRecord::new("x", desc(), 1.0, 2.0, Relation::GreaterEq, 1e-9, Certification::Analytic);
        assert_eq!(r.verdict, Verdict::Violated);
        let r = AuditRecord::new("x", desc(), 1.0, 1.0 + 1e-12, Relation::GreaterEq, 1e-9, Certification::Analytic);
        assert_eq!(r.verdict, Verdict::HoldsEquality);
        assert!(r.is_consistent());
        let r = r.inconclusive("boundary");
        assert!(r.is_consistent());
    }

    #[test]
    fn serializes_verdict_labels() {
        let r = AuditRecord::new("x", desc(), 1.0, 1.0, Relation::LessEq, 1e-9, Certification::OptimizerAssisted)
            .extra("k", 0.5);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"verdict\":\"holds (equality)\""));
        assert!(json.contains("\"certification\":\"optimizer-assisted\""));
        let back: AuditRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}

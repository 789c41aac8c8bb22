//! The common result shape for every inequality checker.
//!
//! Margins are always oriented as `big side - small side`, so an inequality
//! holds exactly when its margin clears `-tolerance`. The default tolerance
//! scales mildly with the operand magnitudes:
//! `tau = 1e-9 * (1 + max(|lhs|, |rhs|))`.

use serde::{Deserialize, Serialize};

/// Relative-ish tolerance used by every checker unless overridden.
pub fn default_tolerance(lhs: f64, rhs: f64) -> f64 {
    1e-9 * (1.0 + lhs.abs().max(rhs.abs()))
}

/// One audited hypothesis of a checker (e.g. "f is in S_0", "B is PSD").
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub condition: String,
    pub passed: bool,
}

/// Outcome of evaluating one inequality on concrete operands.
///
/// `holds` is `margin >= -tolerance` *gated by the hypothesis audit*: if any
/// audited hypothesis failed, the report is `inconclusive` and `holds` is
/// forced to `false` — a margin computed outside an inequality's hypotheses
/// is evidence of nothing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InequalityReport {
    pub check_id: String,
    pub inputs: serde_json::Value,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub holds: bool,
    pub inconclusive: bool,
    pub hypothesis_audit: Vec<HypothesisCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl InequalityReport {
    /// Build a report with the default tolerance and an empty audit.
    pub fn new(
        check_id: impl Into<String>,
        inputs: serde_json::Value,
        lhs: f64,
        rhs: f64,
        margin: f64,
    ) -> Self {
        let tolerance = default_tolerance(lhs, rhs);
        Self {
            check_id: check_id.into(),
            inputs,
            lhs,
            rhs,
            margin,
            tolerance,
            holds: margin >= -tolerance,
            inconclusive: false,
            hypothesis_audit: Vec::new(),
            notes: None,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.holds = !self.inconclusive && self.margin >= -tolerance;
        self
    }

    /// Record an audited hypothesis; a failure makes the report inconclusive.
    pub fn hypothesis(mut self, condition: impl Into<String>, passed: bool) -> Self {
        self.hypothesis_audit.push(HypothesisCheck { condition: condition.into(), passed });
        if !passed {
            self.inconclusive = true;
            self.holds = false;
        }
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes = Some(text.into());
        self
    }

    /// True when every recorded hypothesis passed.
    pub fn hypotheses_ok(&self) -> bool {
        self.hypothesis_audit.iter().all(|h| h.passed)
    }
}

//! Structured pass/fail records shared by the verification checks.

use std::collections::BTreeMap;

use serde::Serialize;

/// Location and value of the node that decides a check.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub location: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The input failed the hypotheses of the statement under test; no
    /// verdict is issued.
    HypothesesNotMet,
    /// The pipeline could not produce a verdict (e.g. a non-converged solve).
    Inconclusive,
}

/// Pass/fail record of one bound or residual check. `passed` holds exactly
/// when `margin > -tolerance`; vacuous passes and non-verdicts carry no
/// margin.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub status: CheckStatus,
    pub passed: bool,
    pub margin: Option<f64>,
    pub tolerance: f64,
    pub witness: Option<Witness>,
    pub params: BTreeMap<String, f64>,
    pub notes: String,
}

impl VerificationReport {
    pub fn from_margin(
        check_id: impl Into<String>,
        margin: f64,
        tolerance: f64,
        params: BTreeMap<String, f64>,
        witness: Option<Witness>,
        notes: impl Into<String>,
    ) -> Self {
        let passed = margin > -tolerance;
        let mut notes = notes.into();
        if !notes.is_empty() {
            notes.push_str("; ");
        }
        notes.push_str(&format!("tolerance {tolerance:.6e}"));
        Self {
            check_id: check_id.into(),
            status: if passed {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            passed,
            margin: Some(margin),
            tolerance,
            witness,
            params,
            notes,
        }
    }

    pub fn vacuous_pass(
        check_id: impl Into<String>,
        params: BTreeMap<String, f64>,
        notes: impl Into<String>,
    ) -> Self {
        Self {
            check_id: check_id.into(),
            status: CheckStatus::Pass,
            passed: true,
            margin: None,
            tolerance: 0.0,
            witness: None,
            params,
            notes: notes.into(),
        }
    }

    pub fn hypotheses_not_met(
        check_id: impl Into<String>,
        params: BTreeMap<String, f64>,
        notes: impl Into<String>,
    ) -> Self {
        Self {
            check_id: check_id.into(),
            status: CheckStatus::HypothesesNotMet,
            passed: false,
            margin: None,
            tolerance: 0.0,
            witness: None,
            params,
            notes: notes.into(),
        }
    }

    pub fn inconclusive(
        check_id: impl Into<String>,
        params: BTreeMap<String, f64>,
        notes: impl Into<String>,
    ) -> Self {
        Self {
            check_id: check_id.into(),
            status: CheckStatus::Inconclusive,
            passed: false,
            margin: None,
            tolerance: 0.0,
            witness: None,
            params,
            notes: notes.into(),
        }
    }

    pub fn with_witness(mut self, witness: Witness) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn csv_header() -> &'static str {
        "check_id,passed,margin,params"
    }

    /// One row of the summary CSV: `check_id,passed,margin,params` with the
    /// parameter map flattened as `k=v` pairs.
    pub fn csv_row(&self) -> String {
        let params = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v:.12e}"))
            .collect::<Vec<_>>()
            .join(";");
        let margin = self
            .margin
            .map(|m| format!("{m:.12e}"))
            .unwrap_or_default();
        format!("{},{},{},{}", self.check_id, self.passed, margin, params)
    }
}

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    HoldsWithTolerance,
    Violated,
    /// The inequality's hypothesis does not hold on the inputs.
    HypothesisFailed,
    /// The check's own preconditions do not hold on the inputs.
    PreconditionFailed,
    /// A limit the check depends on does not appear to exist.
    NoLimit,
}

impl Verdict {
    /// Inequality verdict: violated iff `margin < -tolerance`.
    pub fn from_margin(margin: f64, tolerance: f64) -> Self {
        if margin >= 0.0 {
            Verdict::Holds
        } else if margin >= -tolerance {
            Verdict::HoldsWithTolerance
        } else {
            Verdict::Violated
        }
    }

    /// Identity verdict: violated iff `|margin| > tolerance`.
    pub fn from_identity(margin: f64, tolerance: f64) -> Self {
        if margin == 0.0 {
            Verdict::Holds
        } else if margin.abs() <= tolerance {
            Verdict::HoldsWithTolerance
        } else {
            Verdict::Violated
        }
    }

    pub fn passes(self) -> bool {
        matches!(self, Verdict::Holds | Verdict::HoldsWithTolerance)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HoldsWithTolerance => "holds_with_tolerance",
            Verdict::Violated => "violated",
            Verdict::HypothesisFailed => "hypothesis_failed",
            Verdict::PreconditionFailed => "precondition_failed",
            Verdict::NoLimit => "no_limit",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub inputs_digest: String,
    pub metadata: BTreeMap<String, Value>,
}

impl VerificationReport {
    /// Report for `lhs >= rhs`.
    pub fn inequality(name: &str, lhs: f64, rhs: f64, tolerance: f64, digest: InputsDigest) -> Self {
        let margin = lhs - rhs;
        Self::build(name, lhs, rhs, tolerance, Verdict::from_margin(margin, tolerance), digest, "inequality")
    }

    /// Report for `lhs == rhs`.
    pub fn identity(name: &str, lhs: f64, rhs: f64, tolerance: f64, digest: InputsDigest) -> Self {
        let margin = lhs - rhs;
        Self::build(name, lhs, rhs, tolerance, Verdict::from_identity(margin, tolerance), digest, "identity")
    }

    fn build(
        name: &str,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        verdict: Verdict,
        digest: InputsDigest,
        kind: &str,
    ) -> Self {
        let mut metadata = BTreeMap::new();
        metadata.insert("check".to_string(), Value::from(kind));
        VerificationReport {
            name: name.to_string(),
            lhs,
            rhs,
            margin: lhs - rhs,
            tolerance,
            verdict,
            inputs_digest: digest.finish(),
            metadata,
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    /// Replaces the verdict, keeping the numbers (used for hypothesis and
    /// precondition failures).
    pub fn with_verdict(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub const CSV_HEADER: &'static str = "name,lhs,rhs,margin,tolerance,verdict";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.name, self.lhs, self.rhs, self.margin, self.tolerance, self.verdict
        )
    }
}

/// SHA-256 over labelled input data. Floats are hashed by their bit patterns.
#[derive(Clone, Default)]
pub struct InputsDigest {
    hasher: Sha256,
}

impl InputsDigest {
    pub fn new(name: &str) -> Self {
        let mut d = InputsDigest::default();
        d.label(name);
        d
    }

    pub fn label(&mut self, label: &str) -> &mut Self {
        self.hasher.update((label.len() as u64).to_le_bytes());
        self.hasher.update(label.as_bytes());
        self
    }

    pub fn floats(&mut self, label: &str, values: &[f64]) -> &mut Self {
        self.label(label);
        self.hasher.update((values.len() as u64).to_le_bytes());
        for v in values {
            self.hasher.update(v.to_bits().to_le_bytes());
        }
        self
    }

    pub fn float(&mut self, label: &str, value: f64) -> &mut Self {
        self.floats(label, &[value])
    }

    pub fn int(&mut self, label: &str, value: u64) -> &mut Self {
        self.label(label);
        self.hasher.update(value.to_le_bytes());
        self
    }

    pub fn finish(self) -> String {
        self.hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

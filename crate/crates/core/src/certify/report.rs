use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub index: usize,
    pub point: Vec<f64>,
    /// Value of every polynomial (or of the checked function) at the point;
    /// `None` stands for a non-finite value.
    pub values: Vec<Option<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub passed: bool,
    pub samples: usize,
    pub failures: usize,
    /// Failures at points inside the guard band; they do not count
    /// against `passed` but make the verdict inconclusive.
    pub guard_failures: usize,
    pub worst_value: Option<f64>,
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl CheckResult {
    pub fn skipped(note: &str) -> Self {
        Self {
            passed: true,
            samples: 0,
            failures: 0,
            guard_failures: 0,
            worst_value: None,
            witness: None,
            note: Some(note.to_string()),
        }
    }

    pub fn scalar(passed: bool, value: f64) -> Self {
        Self {
            passed,
            samples: 1,
            failures: usize::from(!passed),
            guard_failures: 0,
            worst_value: finite(value),
            witness: None,
            note: None,
        }
    }
}

pub(crate) fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Machine-readable outcome of a sampling certification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub id: String,
    pub verdict: Verdict,
    pub seed: u64,
    pub budgets: BTreeMap<String, usize>,
    pub tolerances: BTreeMap<String, f64>,
    pub checks: BTreeMap<String, CheckResult>,
}

impl CertReport {
    pub(crate) fn assemble(
        seed: u64,
        budgets: BTreeMap<String, usize>,
        tolerances: BTreeMap<String, f64>,
        checks: BTreeMap<String, CheckResult>,
    ) -> Self {
        let verdict = if checks.values().any(|c| !c.passed) {
            Verdict::Fail
        } else if checks.values().any(|c| c.guard_failures > 0) {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        };
        let mut r = Self {
            id: String::new(),
            verdict,
            seed,
            budgets,
            tolerances,
            checks,
        };
        let body = serde_json::to_vec(&r).expect("report serializes");
        let digest = Sha256::digest(&body);
        r.id = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
        r
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn total_failures(&self) -> usize {
        self.checks.values().map(|c| c.failures).sum()
    }

    pub fn witnesses(&self) -> impl Iterator<Item = (&str, &Witness)> {
        self.checks
            .iter()
            .filter_map(|(k, c)| c.witness.as_ref().map(|w| (k.as_str(), w)))
    }
}

use serde::{Deserialize, Serialize};

use crate::cases::CaseOutcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Outcome of one named check at one tuple of object sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub objects: Vec<usize>,
    pub status: Status,
    pub cases: u64,
    /// Size of the case space as a decimal string (it can exceed 64 bits).
    pub space: String,
    pub exhaustive: bool,
    /// Counterexample on failure, reason when skipped.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    pub(crate) fn from_outcome(name: &str, objects: &[usize], out: CaseOutcome) -> Self {
        CheckResult {
            name: name.to_string(),
            objects: objects.to_vec(),
            status: if out.counterexample.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            cases: out.cases,
            space: out.space,
            exhaustive: out.exhaustive,
            detail: out.counterexample,
        }
    }

    pub(crate) fn single(name: &str, objects: &[usize], failure: Option<String>) -> Self {
        CheckResult {
            name: name.to_string(),
            objects: objects.to_vec(),
            status: if failure.is_some() { Status::Fail } else { Status::Pass },
            cases: 1,
            space: "1".to_string(),
            exhaustive: true,
            detail: failure,
        }
    }

    pub(crate) fn skipped(name: &str, objects: &[usize], reason: String) -> Self {
        CheckResult {
            name: name.to_string(),
            objects: objects.to_vec(),
            status: Status::Skipped,
            cases: 0,
            space: "0".to_string(),
            exhaustive: false,
            detail: Some(reason),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

pub(crate) fn all_passed(checks: &[CheckResult]) -> bool {
    checks.iter().all(CheckResult::passed)
}

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Scalar;
use crate::space::ElementIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// A concrete counterexample: the quantified elements in the order the law
/// names them, plus the scalar for laws quantified over GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub elements: Vec<ElementIndex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Scalar>,
}

impl Witness {
    pub fn new(elements: &[ElementIndex]) -> Self {
        Self {
            elements: elements.to_vec(),
            k: None,
        }
    }

    pub fn with_scalar(elements: &[ElementIndex], k: Scalar) -> Self {
        Self {
            elements: elements.to_vec(),
            k: Some(k),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.elements)?;
        if let Some(k) = self.k {
            write!(f, " k={k}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub law_id: String,
    pub status: Status,
    pub tuples_checked: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CheckResult {
    pub fn pass(law_id: impl Into<String>, tuples_checked: u64) -> Self {
        Self {
            law_id: law_id.into(),
            status: Status::Pass,
            tuples_checked,
            witness: None,
        }
    }

    pub fn fail(law_id: impl Into<String>, tuples_checked: u64, witness: Witness) -> Self {
        Self {
            law_id: law_id.into(),
            status: Status::Fail,
            tuples_checked,
            witness: Some(witness),
        }
    }

    pub fn skipped(law_id: impl Into<String>) -> Self {
        Self {
            law_id: law_id.into(),
            status: Status::Skipped,
            tuples_checked: 0,
            witness: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Outcome of one or more law suites, in a fixed order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub results: Vec<CheckResult>,
}

impl CheckReport {
    pub fn push(&mut self, result: CheckResult) {
        debug_assert!(
            self.get(&result.law_id).is_none(),
            "duplicate law id {}",
            result.law_id
        );
        self.results.push(result);
    }

    pub fn extend(&mut self, other: CheckReport) {
        for r in other.results {
            self.push(r);
        }
    }

    pub fn get(&self, law_id: &str) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.law_id == law_id)
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn pass_count(&self) -> usize {
        self.results.iter().filter(|r| r.passed()).count()
    }

    pub fn fail_count(&self) -> usize {
        self.failures().count()
    }

    pub fn law_ids(&self) -> Vec<&str> {
        self.results.iter().map(|r| r.law_id.as_str()).collect()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            let status = match r.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            write!(f, "{status:4} {:24} {:>10}", r.law_id, r.tuples_checked)?;
            if let Some(w) = &r.witness {
                write!(f, "  witness {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Accumulates one law's evaluation: tuple count and first counterexample.
#[derive(Debug, Default)]
pub(crate) struct LawRun {
    pub(crate) checked: u64,
    witness: Option<Witness>,
}

impl LawRun {
    #[inline]
    pub(crate) fn record(&mut self, holds: bool, elements: &[ElementIndex], k: Option<Scalar>) {
        self.checked += 1;
        if !holds && self.witness.is_none() {
            self.witness = Some(Witness {
                elements: elements.to_vec(),
                k,
            });
        }
    }

    /// Builds the result. A failure is replayed through `holds`, evaluated
    /// directly on the structure rather than on any cached copy, and must
    /// reproduce.
    pub(crate) fn finish<F>(self, law_id: &str, holds: F) -> Result<CheckResult>
    where
        F: Fn(&[ElementIndex], Option<Scalar>) -> bool,
    {
        match self.witness {
            None => Ok(CheckResult::pass(law_id, self.checked)),
            Some(w) => {
                if holds(&w.elements, w.k) {
                    return Err(Error::WitnessNotReproduced(law_id.to_string()));
                }
                Ok(CheckResult::fail(law_id, self.checked, w))
            }
        }
    }
}

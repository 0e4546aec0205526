//! Suite execution and the report document.

use std::time::Instant;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use vecgroupoid::{
    check_all, check_morphism, is_transitive, universal_factorization, CheckResult, Error,
    GroupoidMorphism, Scalar, Status, SuiteSelection, VectorGroupoid, Witness,
};

use crate::document::FactorizeInputs;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Ehresmann,
    Vector,
    Derived,
    Subspaces,
    Transitivity,
    Morphism,
    Factorization,
}

impl Suite {
    pub const GROUPOID: [Suite; 5] = [
        Suite::Ehresmann,
        Suite::Vector,
        Suite::Derived,
        Suite::Subspaces,
        Suite::Transitivity,
    ];

    fn is_groupoid_suite(self) -> bool {
        Self::GROUPOID.contains(&self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitivityDoc {
    pub transitive: bool,
    pub anchor_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass_count: usize,
    pub fail_count: usize,
    /// Only filled in when timing is requested, so reports stay reproducible.
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub results: Vec<CheckResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transitivity: Option<TransitivityDoc>,
    /// Matrix of the factorizing morphism, when one was built.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factorization: Option<Vec<Vec<Scalar>>>,
    pub summary: Summary,
}

impl ReportDoc {
    fn new(results: Vec<CheckResult>, started: Option<Instant>) -> Self {
        let pass_count = results.iter().filter(|r| r.passed()).count();
        let fail_count = results.iter().filter(|r| r.status == Status::Fail).count();
        Self {
            results,
            transitivity: None,
            factorization: None,
            summary: Summary {
                pass_count,
                fail_count,
                elapsed_ms: started.map(|t| t.elapsed().as_millis() as u64),
            },
        }
    }

    /// 0 when every result passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.results.iter().all(CheckResult::passed) {
            0
        } else {
            1
        }
    }
}

fn selection(suites: &[Suite]) -> SuiteSelection {
    SuiteSelection {
        ehresmann: suites.contains(&Suite::Ehresmann),
        vector: suites.contains(&Suite::Vector),
        derived: suites.contains(&Suite::Derived),
        subspaces: suites.contains(&Suite::Subspaces),
    }
}

fn reject_suites(
    suites: &[Suite],
    allowed: impl Fn(Suite) -> bool,
    command: &str,
) -> Result<(), CliError> {
    match suites.iter().find(|&&s| !allowed(s)) {
        Some(s) => Err(CliError::Usage(format!(
            "suite {} does not apply to {command}",
            s.to_possible_value()
                .expect("no skipped variants")
                .get_name()
        ))),
        None => Ok(()),
    }
}

/// Transitivity as two laws: the rank and enumeration decisions agree, and
/// for a transitive groupoid every conjugation between isotropy groups is an
/// isomorphism (vacuous otherwise).
fn transitivity_results(
    g: &VectorGroupoid,
) -> Result<(Vec<CheckResult>, Option<TransitivityDoc>), CliError> {
    match is_transitive(g) {
        Ok(t) => {
            let size = g.total().size() as u64;
            let agree = if t.decisions_agree() {
                CheckResult::pass("anchor-rank-agrees", size)
            } else {
                CheckResult::fail("anchor-rank-agrees", size, Witness::new(&[]))
            };
            let iso = CheckResult::pass("P2.1.viii", t.isomorphisms.len() as u64);
            let doc = TransitivityDoc {
                transitive: t.transitive,
                anchor_rank: t.anchor_rank,
            };
            Ok((vec![agree, iso], Some(doc)))
        }
        Err(Error::NotAGroup { witness, .. } | Error::NotAnIsomorphism { witness, .. }) => Ok((
            vec![CheckResult::fail("P2.1.viii", 0, Witness::new(&witness))],
            None,
        )),
        Err(e) => Err(e.into()),
    }
}

fn groupoid_results(
    g: &VectorGroupoid,
    suites: &[Suite],
) -> Result<(Vec<CheckResult>, Option<TransitivityDoc>), CliError> {
    let mut results = check_all(g, selection(suites))?.results;
    let mut transitivity = None;
    if suites.contains(&Suite::Transitivity) {
        let (more, doc) = transitivity_results(g)?;
        results.extend(more);
        transitivity = doc;
    }
    Ok((results, transitivity))
}

fn prefixed(prefix: &str, results: Vec<CheckResult>) -> impl Iterator<Item = CheckResult> + '_ {
    results.into_iter().map(move |mut r| {
        r.law_id = format!("{prefix}:{}", r.law_id);
        r
    })
}

/// Runs groupoid suites; an empty selection means all of them.
pub fn run_report(
    g: &VectorGroupoid,
    suites: &[Suite],
    timing: bool,
) -> Result<ReportDoc, CliError> {
    let started = timing.then(Instant::now);
    let suites = if suites.is_empty() {
        &Suite::GROUPOID[..]
    } else {
        suites
    };
    reject_suites(suites, Suite::is_groupoid_suite, "a groupoid")?;
    let (results, transitivity) = groupoid_results(g, suites)?;
    let mut doc = ReportDoc::new(results, started);
    doc.transitivity = transitivity;
    Ok(doc)
}

/// Runs the morphism laws, plus any groupoid suites on the source and target.
pub fn run_morphism(
    m: &GroupoidMorphism,
    suites: &[Suite],
    timing: bool,
) -> Result<ReportDoc, CliError> {
    let started = timing.then(Instant::now);
    let suites = if suites.is_empty() {
        &[Suite::Morphism][..]
    } else {
        suites
    };
    reject_suites(suites, |s| s != Suite::Factorization, "a morphism")?;
    let mut results = Vec::new();
    let groupoid_suites: Vec<Suite> = suites
        .iter()
        .copied()
        .filter(|s| s.is_groupoid_suite())
        .collect();
    if !groupoid_suites.is_empty() {
        results.extend(prefixed(
            "source",
            groupoid_results(m.source(), &groupoid_suites)?.0,
        ));
        results.extend(prefixed(
            "target",
            groupoid_results(m.target(), &groupoid_suites)?.0,
        ));
    }
    if suites.contains(&Suite::Morphism) {
        results.extend(check_morphism(m)?.results);
    }
    Ok(ReportDoc::new(results, started))
}

/// Factors `(u, h)` through the induced groupoid. An input that is not a
/// morphism is a violation, reported with its witness.
pub fn run_factorize(
    inputs: &FactorizeInputs,
    suites: &[Suite],
    timing: bool,
) -> Result<ReportDoc, CliError> {
    let started = timing.then(Instant::now);
    let suites = if suites.is_empty() {
        &[Suite::Factorization][..]
    } else {
        suites
    };
    reject_suites(suites, |s| s != Suite::Morphism, "a factorization")?;
    let mut results = Vec::new();
    let groupoid_suites: Vec<Suite> = suites
        .iter()
        .copied()
        .filter(|s| s.is_groupoid_suite())
        .collect();
    if !groupoid_suites.is_empty() {
        results.extend(prefixed(
            "induced",
            groupoid_results(&inputs.induced.structure, &groupoid_suites)?.0,
        ));
    }
    let mut v = None;
    if suites.contains(&Suite::Factorization) {
        match universal_factorization(&inputs.source, &inputs.u, &inputs.h, &inputs.induced) {
            Ok(fact) => {
                v = Some(fact.morphism.f().to_rows());
                results.extend(fact.report.results);
            }
            Err(Error::NotAMorphism { law_id, witness }) => {
                results.push(CheckResult::fail(format!("input:{law_id}"), 0, witness));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let mut doc = ReportDoc::new(results, started);
    doc.factorization = v;
    Ok(doc)
}

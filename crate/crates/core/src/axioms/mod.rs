//! Instance-level axiom checks.
//!
//! Each checker evaluates a rule on a problem (and on its transformed
//! counterpart where the axiom involves one) and compares the two sides
//! exactly. A failure carries a [`Witness`] holding everything needed to run
//! the same check again.
//!
//! Symmetry between consortia is checked holder by holder: every general-pass
//! holder must touch both consortia or neither. The aggregate reading (some
//! holder touches each) is available as [`check_symmetry_between_aggregate`].

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::problem::{pass_revenue, ConsortiumId, MuseumId, PassId, Problem, ProblemData, ProblemError, ValidationReport};
use crate::rational::{sum, Rational};
use crate::rules::{allocate, Allocation, RuleError, RuleId};
use crate::transforms::{
    concat, reduce_problem, split_consortium, split_museum, ConsortiumSplitSpec, MuseumSplitSpec, TransformError,
};

pub mod audit;
pub mod independence;
pub(crate) mod shaping;

pub use audit::{audit, AuditConfig, AuditReport, AxiomTally};
pub use independence::{designations, independence_witnesses, Designation, IndependenceConfig, IndependenceReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AxiomId {
    Composition,
    SymWithin,
    SymBetween,
    Dummy,
    SplitMuseums,
    SplitConsortia,
    ConsortiaConsistency,
}

impl AxiomId {
    pub const ALL: [AxiomId; 7] = [
        AxiomId::Composition,
        AxiomId::SymWithin,
        AxiomId::SymBetween,
        AxiomId::Dummy,
        AxiomId::SplitMuseums,
        AxiomId::SplitConsortia,
        AxiomId::ConsortiaConsistency,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            AxiomId::Composition => "composition",
            AxiomId::SymWithin => "sym-within",
            AxiomId::SymBetween => "sym-between",
            AxiomId::Dummy => "dummy",
            AxiomId::SplitMuseums => "split-museums",
            AxiomId::SplitConsortia => "split-consortia",
            AxiomId::ConsortiaConsistency => "consortia-consistency",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown axiom `{0}`")]
pub struct UnknownAxiom(pub String);

impl FromStr for AxiomId {
    type Err = UnknownAxiom;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        let alias = match key.as_str() {
            "cc" => "consortia-consistency",
            "sm" => "split-museums",
            "sc" => "split-consortia",
            other => other,
        };
        AxiomId::ALL
            .into_iter()
            .find(|a| a.tag() == alias)
            .ok_or_else(|| UnknownAxiom(s.to_string()))
    }
}

/// The axiom set characterising a canonical rule.
pub fn theorem_axioms(rule: RuleId) -> Option<&'static [AxiomId]> {
    use AxiomId::*;
    match rule {
        RuleId::Ee => Some(&[Composition, SymWithin, SymBetween, Dummy]),
        RuleId::Pp => Some(&[Composition, Dummy, SplitMuseums, SplitConsortia, ConsortiaConsistency]),
        RuleId::Pe => Some(&[Composition, Dummy, SymWithin, SplitConsortia, ConsortiaConsistency]),
        RuleId::Ep => Some(&[Composition, Dummy, SymBetween, SplitMuseums]),
        _ => None,
    }
}

/// Number of the characterisation result for a canonical rule (2 to 5).
pub fn theorem_of(rule: RuleId) -> Option<u8> {
    match rule {
        RuleId::Ee => Some(2),
        RuleId::Pp => Some(3),
        RuleId::Pe => Some(4),
        RuleId::Ep => Some(5),
        _ => None,
    }
}

pub fn theorem_rule(theorem: u8) -> Option<RuleId> {
    RuleId::CANONICAL.into_iter().find(|&r| theorem_of(r) == Some(theorem))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Passed,
    /// The axiom's hypotheses do not hold on this instance.
    NotApplicable,
    Failed,
}

/// One compared quantity where the two sides of the axiom differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub subject: String,
    #[serde(with = "crate::rational::serde_fraction")]
    pub lhs: Rational,
    #[serde(with = "crate::rational::serde_fraction")]
    pub rhs: Rational,
}

/// Transformation parameters of a check, enough to replay it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheckParams {
    Composition { second: ProblemData },
    SymWithin { i: MuseumId, j: MuseumId },
    SymBetween { r: ConsortiumId, t: ConsortiumId },
    Dummy,
    SplitMuseums(MuseumSplitSpec),
    SplitConsortia(ConsortiumSplitSpec),
    ConsortiaConsistency,
}

impl CheckParams {
    pub fn axiom(&self) -> AxiomId {
        match self {
            CheckParams::Composition { .. } => AxiomId::Composition,
            CheckParams::SymWithin { .. } => AxiomId::SymWithin,
            CheckParams::SymBetween { .. } => AxiomId::SymBetween,
            CheckParams::Dummy => AxiomId::Dummy,
            CheckParams::SplitMuseums(_) => AxiomId::SplitMuseums,
            CheckParams::SplitConsortia(_) => AxiomId::SplitConsortia,
            CheckParams::ConsortiaConsistency => AxiomId::ConsortiaConsistency,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub axiom: AxiomId,
    pub rule: RuleId,
    pub problem: ProblemData,
    pub params: CheckParams,
    /// `lhs` is the value on the original problem (or the pooled problem for
    /// composition), `rhs` the value the axiom demands.
    pub mismatches: Vec<Mismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CheckResult {
    fn passed() -> Self {
        CheckResult { verdict: Verdict::Passed, reason: None, witness: None }
    }

    fn not_applicable(reason: impl Into<String>) -> Self {
        CheckResult { verdict: Verdict::NotApplicable, reason: Some(reason.into()), witness: None }
    }

    pub fn is_passed(&self) -> bool {
        self.verdict == Verdict::Passed
    }

    pub fn is_failed(&self) -> bool {
        self.verdict == Verdict::Failed
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("consortia consistency needs a problem where only the general pass is sold")]
    NotGeneralOnly,
    #[error("witness problem is invalid: {0}")]
    Invalid(ValidationReport),
    #[error("witness is labelled {labelled} but its parameters describe {actual}")]
    AxiomMismatch { labelled: AxiomId, actual: AxiomId },
}

fn museum_label(m: MuseumId) -> String {
    format!("museum {m}")
}

fn consortium_label(k: ConsortiumId) -> String {
    format!("consortium {k}")
}

fn verdict(
    rule: RuleId,
    problem: &Problem,
    params: CheckParams,
    mismatches: Vec<Mismatch>,
) -> CheckResult {
    if mismatches.is_empty() {
        return CheckResult::passed();
    }
    CheckResult {
        verdict: Verdict::Failed,
        reason: None,
        witness: Some(Witness {
            axiom: params.axiom(),
            rule,
            problem: problem.data().clone(),
            params,
            mismatches,
        }),
    }
}

fn compare(pairs: impl IntoIterator<Item = (String, Rational, Rational)>) -> Vec<Mismatch> {
    pairs
        .into_iter()
        .filter(|(_, l, r)| l != r)
        .map(|(subject, lhs, rhs)| Mismatch { subject, lhs, rhs })
        .collect()
}

pub fn check_composition(rule: RuleId, first: &Problem, second: &Problem) -> Result<CheckResult, CheckError> {
    let pooled = concat(first, second)?;
    let whole = allocate(rule, &pooled)?;
    let parts = &allocate(rule, first)? + &allocate(rule, second)?;
    let mismatches = compare(
        whole.iter().zip(parts.payouts()).map(|((m, l), r)| (museum_label(m), l.clone(), r.clone())),
    );
    Ok(verdict(rule, first, CheckParams::Composition { second: second.data().clone() }, mismatches))
}

fn individual_revenue(problem: &Problem, m: MuseumId) -> Rational {
    pass_revenue(problem, PassId::Individual(m))
}

/// Why `i` and `j` fail the hypotheses of symmetry within consortia, if they do.
pub fn symmetry_within_obstacle(problem: &Problem, i: MuseumId, j: MuseumId) -> Option<String> {
    let k = problem.consortium_of(i);
    if k != problem.consortium_of(j) {
        return Some(format!("museums {i} and {j} belong to different consortia"));
    }
    for sigma in [PassId::General, PassId::Consortium(k)] {
        if let Some((n, _)) = problem
            .visit_sets(sigma)
            .iter()
            .enumerate()
            .find(|(_, v)| v.contains(&i) != v.contains(&j))
        {
            let holder = &problem.holders(sigma)[n];
            return Some(format!("holder {holder} of pass {sigma} visits only one of {i} and {j}"));
        }
    }
    if individual_revenue(problem, i) != individual_revenue(problem, j) {
        return Some(format!("individual revenues of {i} and {j} differ"));
    }
    None
}

pub fn check_symmetry_within(rule: RuleId, problem: &Problem, i: MuseumId, j: MuseumId) -> Result<CheckResult, CheckError> {
    problem.require_museum(i)?;
    problem.require_museum(j)?;
    if i == j {
        return Ok(CheckResult::passed());
    }
    if let Some(reason) = symmetry_within_obstacle(problem, i, j) {
        return Ok(CheckResult::not_applicable(reason));
    }
    let a = allocate(rule, problem)?;
    let mismatches = compare([(format!("museums {i} vs {j}"), a.get(i).clone(), a.get(j).clone())]);
    Ok(verdict(rule, problem, CheckParams::SymWithin { i, j }, mismatches))
}

fn touched_general(problem: &Problem, k: ConsortiumId) -> Vec<bool> {
    problem
        .visit_sets(PassId::General)
        .iter()
        .map(|v| v.iter().any(|&m| problem.consortium_of(m) == k))
        .collect()
}

fn revenue_conditions(problem: &Problem, r: ConsortiumId, t: ConsortiumId) -> Option<String> {
    if pass_revenue(problem, PassId::Consortium(r)) != pass_revenue(problem, PassId::Consortium(t)) {
        return Some(format!("consortium pass revenues of {r} and {t} differ"));
    }
    let indiv = |k: ConsortiumId| sum(&problem.consortium(k).iter().map(|&m| individual_revenue(problem, m)).collect::<Vec<_>>());
    if indiv(r) != indiv(t) {
        return Some(format!("individual revenues of {r} and {t} differ"));
    }
    None
}

/// Why `r` and `t` fail the (holder-wise) hypotheses of symmetry between consortia.
pub fn symmetry_between_obstacle(problem: &Problem, r: ConsortiumId, t: ConsortiumId) -> Option<String> {
    let (tr, tt) = (touched_general(problem, r), touched_general(problem, t));
    if let Some(n) = tr.iter().zip(&tt).position(|(a, b)| a != b) {
        let holder = &problem.holders(PassId::General)[n];
        return Some(format!("general-pass holder {holder} visits only one of {r} and {t}"));
    }
    revenue_conditions(problem, r, t)
}

fn between_result(rule: RuleId, problem: &Problem, r: ConsortiumId, t: ConsortiumId) -> Result<CheckResult, CheckError> {
    let a = allocate(rule, problem)?;
    let mismatches = compare([(
        format!("consortia {r} vs {t}"),
        a.total_over(problem.consortium(r)),
        a.total_over(problem.consortium(t)),
    )]);
    Ok(verdict(rule, problem, CheckParams::SymBetween { r, t }, mismatches))
}

pub fn check_symmetry_between(rule: RuleId, problem: &Problem, r: ConsortiumId, t: ConsortiumId) -> Result<CheckResult, CheckError> {
    problem.check_consortium(r)?;
    problem.check_consortium(t)?;
    if r == t {
        return Ok(CheckResult::passed());
    }
    if let Some(reason) = symmetry_between_obstacle(problem, r, t) {
        return Ok(CheckResult::not_applicable(reason));
    }
    between_result(rule, problem, r, t)
}

/// Symmetry between consortia with its first hypothesis read in aggregate:
/// both consortia are visited by some general-pass holder, or neither is.
pub fn check_symmetry_between_aggregate(
    rule: RuleId,
    problem: &Problem,
    r: ConsortiumId,
    t: ConsortiumId,
) -> Result<CheckResult, CheckError> {
    problem.check_consortium(r)?;
    problem.check_consortium(t)?;
    if r == t {
        return Ok(CheckResult::passed());
    }
    let any = |k| touched_general(problem, k).into_iter().any(|b| b);
    if any(r) != any(t) {
        return Ok(CheckResult::not_applicable(format!("only one of {r} and {t} has general-pass visits")));
    }
    if let Some(reason) = revenue_conditions(problem, r, t) {
        return Ok(CheckResult::not_applicable(reason));
    }
    between_result(rule, problem, r, t)
}

pub fn check_dummy(rule: RuleId, problem: &Problem) -> Result<CheckResult, CheckError> {
    let dummies = problem.dummy_set();
    if dummies.is_empty() {
        return Ok(CheckResult::passed());
    }
    let a = allocate(rule, problem)?;
    let mismatches = compare(dummies.into_iter().map(|m| (museum_label(m), a.get(m).clone(), Rational::zero())));
    Ok(verdict(rule, problem, CheckParams::Dummy, mismatches))
}

pub fn check_splitting_museums(rule: RuleId, problem: &Problem, spec: &MuseumSplitSpec) -> Result<CheckResult, CheckError> {
    let split = split_museum(problem, spec)?;
    let before = allocate(rule, problem)?;
    let after = allocate(rule, &split.problem)?;
    let mismatches = compare(
        problem
            .museums()
            .filter(|&m| m != spec.target)
            .map(|m| (museum_label(m), before.get(m).clone(), after.get(m).clone())),
    );
    Ok(verdict(rule, problem, CheckParams::SplitMuseums(spec.clone()), mismatches))
}

pub fn check_splitting_consortia(
    rule: RuleId,
    problem: &Problem,
    spec: &ConsortiumSplitSpec,
) -> Result<CheckResult, CheckError> {
    let split = split_consortium(problem, spec)?;
    let before = allocate(rule, problem)?;
    let after = allocate(rule, &split.problem)?;
    let mismatches = compare(problem.consortium_ids().filter(|&k| k != spec.target).map(|k| {
        let block = problem.consortium(k);
        (consortium_label(k), before.total_over(block), after.total_over(block))
    }));
    Ok(verdict(rule, problem, CheckParams::SplitConsortia(spec.clone()), mismatches))
}

pub fn check_consortia_consistency(rule: RuleId, problem: &Problem) -> Result<CheckResult, CheckError> {
    if !problem.is_general_only() {
        return Err(CheckError::NotGeneralOnly);
    }
    let reduced = reduce_problem(problem)?;
    let whole = allocate(rule, problem)?;
    let small = allocate(rule, &reduced)?;
    let mismatches = compare(problem.consortium_ids().map(|k| {
        (consortium_label(k), whole.total_over(problem.consortium(k)), small.get(MuseumId(k.0)).clone())
    }));
    Ok(verdict(rule, problem, CheckParams::ConsortiaConsistency, mismatches))
}

/// Runs the check described by `params` on `problem`.
pub fn run_check(rule: RuleId, problem: &Problem, params: &CheckParams) -> Result<CheckResult, CheckError> {
    match params {
        CheckParams::Composition { second } => {
            let second = Problem::new(second.clone()).map_err(CheckError::Invalid)?;
            check_composition(rule, problem, &second)
        }
        CheckParams::SymWithin { i, j } => check_symmetry_within(rule, problem, *i, *j),
        CheckParams::SymBetween { r, t } => check_symmetry_between(rule, problem, *r, *t),
        CheckParams::Dummy => check_dummy(rule, problem),
        CheckParams::SplitMuseums(spec) => check_splitting_museums(rule, problem, spec),
        CheckParams::SplitConsortia(spec) => check_splitting_consortia(rule, problem, spec),
        CheckParams::ConsortiaConsistency => check_consortia_consistency(rule, problem),
    }
}

/// Re-runs the check a witness came from.
pub fn replay(witness: &Witness) -> Result<CheckResult, CheckError> {
    if witness.params.axiom() != witness.axiom {
        return Err(CheckError::AxiomMismatch { labelled: witness.axiom, actual: witness.params.axiom() });
    }
    let problem = Problem::new(witness.problem.clone()).map_err(CheckError::Invalid)?;
    run_check(witness.rule, &problem, &witness.params)
}

/// The allocation a witness was judged on, for display.
pub fn witness_allocation(witness: &Witness) -> Result<Allocation, CheckError> {
    let problem = Problem::new(witness.problem.clone()).map_err(CheckError::Invalid)?;
    Ok(allocate(witness.rule, &problem)?)
}

//! Randomised audits of a rule against a set of axioms.
//!
//! Every instance of the generator stream is checked on its own random
//! stream, derived from the generator seed, the instance index and the axiom,
//! so a report depends only on the configuration. Symmetry axioms are
//! checked for every pair on the instance as generated, and once more on a
//! copy edited so that the hypotheses hold for one random pair; dummy is
//! checked as generated and after removing every visit to one museum.

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::shaping::{dummify, random_consortium_split, random_museum_split, symmetrize_between, symmetrize_within};
use super::{
    check_composition, check_consortia_consistency, check_dummy, check_splitting_consortia, check_splitting_museums,
    check_symmetry_between, check_symmetry_within, AxiomId, CheckError, CheckResult, Verdict, Witness,
};
use crate::problem::{ConsortiumId, HolderId, PassId, Problem};
use crate::randgen::{derive_seed, generate_nth, GenConfig};
use crate::rules::RuleId;
use crate::transforms::{restrict, restrict_holders};

type Outcome = Result<CheckResult, CheckError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub instances: usize,
    pub generator: GenConfig,
    /// Witnesses kept per axiom; the failure count is always complete.
    pub max_witnesses: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig { instances: 200, generator: GenConfig::default(), max_witnesses: 3 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomTally {
    pub checked: usize,
    pub passed: usize,
    pub not_applicable: usize,
    pub failed: usize,
    /// Checks that could not be run at all.
    pub errors: Vec<String>,
    pub failures: Vec<Witness>,
}

impl AxiomTally {
    pub fn clean(&self) -> bool {
        self.failed == 0 && self.errors.is_empty()
    }

    fn record(&mut self, outcome: Result<CheckResult, CheckError>, keep: usize) {
        self.checked += 1;
        match outcome {
            Ok(r) => match r.verdict {
                Verdict::Passed => self.passed += 1,
                Verdict::NotApplicable => self.not_applicable += 1,
                Verdict::Failed => {
                    self.failed += 1;
                    if self.failures.len() < keep {
                        self.failures.extend(r.witness);
                    }
                }
            },
            Err(e) => {
                if self.errors.len() < keep {
                    self.errors.push(e.to_string());
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub rule: RuleId,
    pub config: AuditConfig,
    pub axioms: BTreeMap<AxiomId, AxiomTally>,
}

impl AuditReport {
    pub fn clean(&self) -> bool {
        self.axioms.values().all(AxiomTally::clean)
    }

    pub fn failures(&self) -> usize {
        self.axioms.values().map(|t| t.failed).sum()
    }
}

pub(crate) fn check_rng(seed: u64, instance: u64, axiom: AxiomId) -> ChaCha8Rng {
    let tag = AxiomId::ALL.iter().position(|&a| a == axiom).expect("listed") as u64;
    ChaCha8Rng::seed_from_u64(derive_seed(derive_seed(seed ^ 0xA5A5_5A5A_0F0F_F0F0, instance), tag))
}

/// All checks of one axiom on one instance.
pub fn instance_checks(
    rule: RuleId,
    problem: &Problem,
    axiom: AxiomId,
    rng: &mut impl Rng,
) -> Vec<Result<CheckResult, CheckError>> {
    let mut out = Vec::new();
    match axiom {
        AxiomId::Composition => {
            let chosen: HashSet<HolderId> = problem
                .pass_ids()
                .flat_map(|s| problem.holders(s).iter())
                .filter(|_| rng.random_bool(0.5))
                .cloned()
                .collect();
            let first = restrict_holders(problem, |_, h| chosen.contains(h)).expect("subset of a valid problem");
            let second = restrict_holders(problem, |_, h| !chosen.contains(h)).expect("subset of a valid problem");
            out.push(check_composition(rule, &first, &second));
        }
        AxiomId::SymWithin => {
            for k in problem.consortium_ids() {
                let block = problem.consortium(k);
                for (a, &i) in block.iter().enumerate() {
                    for &j in &block[a + 1..] {
                        out.push(check_symmetry_within(rule, problem, i, j));
                    }
                }
            }
            let blocks: Vec<ConsortiumId> = problem.consortium_ids().filter(|&k| problem.consortium(k).len() >= 2).collect();
            if !blocks.is_empty() {
                let block = problem.consortium(blocks[rng.random_range(0..blocks.len())]);
                let a = rng.random_range(0..block.len());
                let mut b = rng.random_range(0..block.len() - 1);
                if b >= a {
                    b += 1;
                }
                let shaped = symmetrize_within(problem, block[a], block[b]);
                out.push(check_symmetry_within(rule, &shaped, block[a], block[b]));
            }
        }
        AxiomId::SymBetween => {
            let s = problem.consortium_count();
            for r in 1..=s {
                for t in r + 1..=s {
                    out.push(check_symmetry_between(rule, problem, ConsortiumId(r), ConsortiumId(t)));
                }
            }
            if s >= 2 {
                let r = rng.random_range(1..=s);
                let mut t = rng.random_range(1..s);
                if t >= r {
                    t += 1;
                }
                let (r, t) = (ConsortiumId(r), ConsortiumId(t));
                let shaped = symmetrize_between(problem, r, t, rng);
                out.push(check_symmetry_between(rule, &shaped, r, t));
            }
        }
        AxiomId::Dummy => {
            out.push(check_dummy(rule, problem));
            let target = crate::problem::MuseumId(rng.random_range(1..=problem.museum_count()));
            out.push(check_dummy(rule, &dummify(problem, target)));
        }
        AxiomId::SplitMuseums => {
            let spec = random_museum_split(problem, rng);
            out.push(check_splitting_museums(rule, problem, &spec));
        }
        AxiomId::SplitConsortia => {
            let spec = random_consortium_split(problem, rng);
            out.push(check_splitting_consortia(rule, problem, &spec));
        }
        AxiomId::ConsortiaConsistency => {
            let general = restrict(problem, PassId::General).expect("general pass exists");
            out.push(check_consortia_consistency(rule, &general));
        }
    }
    out
}

pub fn audit(rule: RuleId, config: &AuditConfig, axioms: &[AxiomId]) -> AuditReport {
    let seed = config.generator.seed;
    let per_instance: Vec<Vec<(AxiomId, Vec<Outcome>)>> = (0..config.instances as u64)
        .into_par_iter()
        .map(|n| {
            let problem = generate_nth(&config.generator, n);
            axioms
                .iter()
                .map(|&axiom| {
                    let mut rng = check_rng(seed, n, axiom);
                    (axiom, instance_checks(rule, &problem, axiom, &mut rng))
                })
                .collect()
        })
        .collect();
    let mut tallies: BTreeMap<AxiomId, AxiomTally> = axioms.iter().map(|&a| (a, AxiomTally::default())).collect();
    for results in per_instance {
        for (axiom, outcomes) in results {
            let tally = tallies.get_mut(&axiom).expect("initialised");
            for outcome in outcomes {
                tally.record(outcome, config.max_witnesses);
            }
        }
    }
    AuditReport { rule, config: config.clone(), axioms: tallies }
}

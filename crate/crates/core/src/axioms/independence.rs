//! Counterexample search showing that no axiom of a characterisation can be
//! dropped.
//!
//! For each rule designated against an axiom, the generator stream is
//! scanned (up to a budget) for an instance where that axiom fails. The
//! remaining axioms of the characterisation are then audited on a fresh
//! stream; any failure there is reported as a discrepancy rather than hidden.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::audit::{audit, check_rng, instance_checks, AuditConfig, AxiomTally};
use super::{theorem_axioms, theorem_rule, AxiomId, Witness};
use crate::randgen::{derive_seed, generate_nth, GenConfig};
use crate::rules::RuleId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Designation {
    pub theorem: u8,
    pub rule: RuleId,
    /// The axiom this rule is expected to violate.
    pub axiom: AxiomId,
}

const TABLE: [(u8, RuleId, AxiomId); 18] = [
    (2, RuleId::R1, AxiomId::Composition),
    (2, RuleId::Ep, AxiomId::SymWithin),
    (2, RuleId::Pe, AxiomId::SymBetween),
    (2, RuleId::R2, AxiomId::Dummy),
    (3, RuleId::R3, AxiomId::Composition),
    (3, RuleId::Ep, AxiomId::SplitConsortia),
    (3, RuleId::Pe, AxiomId::SplitMuseums),
    (3, RuleId::R4, AxiomId::Dummy),
    (3, RuleId::R5, AxiomId::ConsortiaConsistency),
    (4, RuleId::R6, AxiomId::Composition),
    (4, RuleId::Ee, AxiomId::SplitConsortia),
    (4, RuleId::Pp, AxiomId::SymWithin),
    (4, RuleId::R7, AxiomId::Dummy),
    (4, RuleId::R8, AxiomId::ConsortiaConsistency),
    (5, RuleId::R9, AxiomId::Composition),
    (5, RuleId::Ee, AxiomId::SplitMuseums),
    (5, RuleId::Pp, AxiomId::SymBetween),
    (5, RuleId::R10, AxiomId::Dummy),
];

/// Designated (rule, axiom) pairs for a theorem, or all of them for `None`.
pub fn designations(theorem: Option<u8>) -> Vec<Designation> {
    TABLE
        .iter()
        .filter(|(t, _, _)| theorem.is_none_or(|x| x == *t))
        .map(|&(theorem, rule, axiom)| Designation { theorem, rule, axiom })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no characterisation numbered {0} (expected 2, 3, 4 or 5)")]
pub struct UnknownTheorem(pub u8);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceConfig {
    /// Instances scanned per designated rule before giving up.
    pub budget: usize,
    /// Instances audited for the remaining axioms; zero skips confirmation.
    pub confirm_instances: usize,
    pub generator: GenConfig,
}

impl Default for IndependenceConfig {
    fn default() -> Self {
        IndependenceConfig { budget: 500, confirm_instances: 100, generator: GenConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceEntry {
    pub rule: RuleId,
    pub violates: AxiomId,
    /// Instances scanned, including the one that produced the witness.
    pub searched: usize,
    pub witness: Option<Witness>,
    pub confirmation: BTreeMap<AxiomId, AxiomTally>,
    /// Remaining axioms that also failed during confirmation.
    pub discrepancies: Vec<AxiomId>,
}

impl IndependenceEntry {
    pub fn exhausted(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub theorem: u8,
    pub characterised: RuleId,
    pub axioms: Vec<AxiomId>,
    pub config: IndependenceConfig,
    pub entries: Vec<IndependenceEntry>,
}

/// First instance index (below `budget`) on which `rule` violates `axiom`.
pub fn search_witness(rule: RuleId, axiom: AxiomId, generator: &GenConfig, budget: usize) -> (usize, Option<Witness>) {
    let found = (0..budget as u64).into_par_iter().find_map_first(|n| {
        let problem = generate_nth(generator, n);
        let mut rng = check_rng(generator.seed, n, axiom);
        instance_checks(rule, &problem, axiom, &mut rng)
            .into_iter()
            .find_map(|r| r.ok().and_then(|r| r.witness))
            .map(|w| (n as usize + 1, w))
    });
    match found {
        Some((n, w)) => (n, Some(w)),
        None => (budget, None),
    }
}

pub fn independence_witnesses(theorem: u8, config: &IndependenceConfig) -> Result<IndependenceReport, UnknownTheorem> {
    let characterised = theorem_rule(theorem).ok_or(UnknownTheorem(theorem))?;
    let axioms = theorem_axioms(characterised).expect("canonical rule").to_vec();
    let entries = designations(Some(theorem))
        .into_iter()
        .map(|d| {
            let (searched, witness) = search_witness(d.rule, d.axiom, &config.generator, config.budget);
            let others: Vec<AxiomId> = axioms.iter().copied().filter(|&a| a != d.axiom).collect();
            let confirmation = if config.confirm_instances == 0 {
                BTreeMap::new()
            } else {
                let generator = config.generator.with_seed(derive_seed(config.generator.seed, u64::MAX));
                let audit_config = AuditConfig { instances: config.confirm_instances, generator, max_witnesses: 1 };
                audit(d.rule, &audit_config, &others).axioms
            };
            let discrepancies = confirmation.iter().filter(|(_, t)| !t.clean()).map(|(&a, _)| a).collect();
            IndependenceEntry { rule: d.rule, violates: d.axiom, searched, witness, confirmation, discrepancies }
        })
        .collect();
    Ok(IndependenceReport { theorem, characterised, axioms, config: config.clone(), entries })
}

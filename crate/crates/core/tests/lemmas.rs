mod common;

use common::*;
use passalloc_core::RuleId;

const INSTANCES: u64 = 200;

fn run(rules: &[RuleId], check: fn(RuleId, u64) -> Outcome) -> usize {
    rules
        .iter()
        .map(|&rule| suite(INSTANCES, |n| check(rule, n)).unwrap_or_else(|e| panic!("{rule}: {e}")))
        .min()
        .unwrap()
}

#[test]
fn dummy_rules_pay_individual_revenue() {
    let rules: Vec<RuleId> = RuleId::ALL.iter().copied().filter(|r| !matches!(r, RuleId::R2 | RuleId::R4 | RuleId::R7 | RuleId::R10)).collect();
    assert_eq!(run(&rules, lemma_individual), INSTANCES as usize);
}

#[test]
fn canonical_rules_decompose_by_pass() {
    assert_eq!(run(&RuleId::CANONICAL, lemma_decomposition), INSTANCES as usize);
}

#[test]
fn proportional_first_stage_is_monotone_on_reduced_problems() {
    assert_eq!(run(&[RuleId::Pp, RuleId::Pe], lemma_consortium_monotone), INSTANCES as usize);
}

#[test]
fn proportional_second_stage_is_monotone_within_consortia() {
    assert_eq!(run(&[RuleId::Pp, RuleId::Ep], lemma_museum_monotone), INSTANCES as usize);
}

#[test]
fn equal_museums_get_equal_payouts() {
    assert!(run(&RuleId::CANONICAL, lemma_equal_museums) > 50);
}

#[test]
fn equal_consortia_get_equal_aggregates() {
    assert!(run(&[RuleId::Pp, RuleId::Pe], lemma_equal_consortia) > 50);
}

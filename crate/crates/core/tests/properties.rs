mod common;

use std::collections::BTreeMap;

use common::{config, rebuild};
use num_traits::{Signed, Zero};
use passalloc_core::io::{parse_problem, serialize_problem};
use passalloc_core::randgen::{generate, GenConfig, Span};
use passalloc_core::rules::{allocate_ee, allocate_pp};
use passalloc_core::transforms::{concat, restrict_holders, split_museum, MuseumSplitSpec};
use passalloc_core::{allocate, MuseumId, PassId, Problem, Rational, RuleId};
use proptest::prelude::*;

fn wide(seed: u64) -> Problem {
    generate(&GenConfig { museums: Span::new(1, 10), consortia: Span::new(1, 4), ..config(seed) })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn every_rule_is_efficient_and_nonnegative(seed in any::<u64>()) {
        let problem = wide(seed);
        for rule in RuleId::ALL {
            let a = allocate(rule, &problem).unwrap();
            prop_assert_eq!(a.total(), problem.revenue(), "{}", rule);
            prop_assert!(a.payouts().iter().all(|v| !v.is_negative()), "{}", rule);
        }
    }

    #[test]
    fn payouts_cover_individual_revenue(seed in any::<u64>()) {
        let problem = wide(seed);
        // R2 pools all revenue, so it is the one rule without this floor.
        for rule in RuleId::ALL.into_iter().filter(|&r| r != RuleId::R2) {
            let a = allocate(rule, &problem).unwrap();
            for m in problem.museums() {
                let sigma = PassId::Individual(m);
                let own = problem.price(sigma) * Rational::from_integer((problem.holders(sigma).len() as i64).into());
                prop_assert!(a.get(m) >= &own, "{} museum {}", rule, m);
            }
        }
    }

    #[test]
    fn canonical_rules_are_additive_over_concatenation(seed in any::<u64>(), mask in any::<u64>()) {
        let pooled = wide(seed);
        let mut index = 0;
        let mut side = Vec::new();
        for sigma in pooled.pass_ids() {
            for h in pooled.holders(sigma) {
                side.push((h.clone(), mask >> (index % 64) & 1 == 1));
                index += 1;
            }
        }
        let pick = |want: bool| restrict_holders(&pooled, |_, h| side.iter().any(|(x, s)| x == h && *s == want)).unwrap();
        let (first, second) = (pick(true), pick(false));
        prop_assert_eq!(concat(&first, &second).unwrap().revenue(), pooled.revenue());
        for rule in RuleId::CANONICAL {
            let x = allocate(rule, &first).unwrap();
            let y = allocate(rule, &second).unwrap();
            let z = allocate(rule, &pooled).unwrap();
            for m in pooled.museums() {
                prop_assert_eq!(z.get(m), &(x.get(m) + y.get(m)));
            }
        }
    }

    #[test]
    fn serialization_round_trips(seed in any::<u64>()) {
        let problem = wide(seed);
        let text = serialize_problem(problem.data());
        let back = parse_problem(&text).unwrap();
        prop_assert_eq!(back.data(), problem.data());
        prop_assert_eq!(serialize_problem(back.data()), text);
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>()) {
        let (a, b) = (wide(seed), wide(seed));
        prop_assert_eq!(a.data(), b.data());
    }

    #[test]
    fn museum_split_preserves_revenue_and_pp_payouts(seed in any::<u64>(), weights in prop::collection::vec(1i64..5, 2..4)) {
        let problem = wide(seed);
        let target = MuseumId(1);
        let total: i64 = weights.iter().sum();
        let price = problem.individual_price(target).clone();
        let piece_prices = weights.iter().map(|&w| &price * Rational::new(w.into(), total.into())).collect();
        let split = split_museum(&problem, &MuseumSplitSpec { target, piece_prices }).unwrap();
        prop_assert_eq!(split.problem.revenue(), problem.revenue());
        let before = allocate_pp(&problem);
        let after = allocate_pp(&split.problem);
        for m in problem.museums().filter(|&m| m != target) {
            prop_assert_eq!(before.get(m), after.get(m));
        }
        let pieces = &split.relabel.museums[&target];
        prop_assert_eq!(after.total_over(pieces), before.get(target).clone());
    }

    #[test]
    fn dummy_museums_get_nothing_under_ee(seed in any::<u64>()) {
        let problem = wide(seed);
        let a = allocate_ee(&problem);
        for m in problem.dummy_set() {
            prop_assert!(a.get(m).is_zero());
        }
    }

    #[test]
    fn proportional_rules_collapse_to_ee_under_uniform_prices(seed in any::<u64>()) {
        let base = wide(seed);
        let prices: BTreeMap<PassId, Rational> = base
            .pass_ids()
            .filter(|&sigma| sigma != PassId::General)
            .map(|sigma| (sigma, Rational::from_integer(3.into())))
            .collect();
        let problem = rebuild(&base, &prices, &BTreeMap::new());
        let ee = allocate_ee(&problem);
        for rule in [RuleId::Pp, RuleId::Pe, RuleId::Ep] {
            prop_assert_eq!(&allocate(rule, &problem).unwrap(), &ee, "{}", rule);
        }
    }
}

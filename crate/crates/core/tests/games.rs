mod common;

use common::*;
use passalloc_core::games::{build_game, owen, shapley, DEFAULT_BOUND};
use passalloc_core::randgen::{generate_nth, GenConfig, PassMix, Span};
use passalloc_core::rules::allocate_ee;

#[test]
fn owen_matches_permutation_oracle() {
    let config = GenConfig { museums: Span::new(1, 6), consortia: Span::new(1, 4), ..GenConfig::default() };
    for n in 0..60 {
        let problem = generate_nth(&config, n);
        let game = build_game(&problem, DEFAULT_BOUND).unwrap();
        let partition = problem.data().consortia.clone();
        assert_eq!(owen(&game, &partition).unwrap(), owen_by_permutations(&game, &partition), "instance {n}");
    }
}

#[test]
fn shapley_matches_permutation_oracle() {
    let config = GenConfig { museums: Span::new(1, 6), ..GenConfig::default() };
    for n in 0..30 {
        let problem = generate_nth(&config, n);
        let game = build_game(&problem, DEFAULT_BOUND).unwrap();
        let all = vec![problem.museums().collect::<Vec<_>>()];
        assert_eq!(shapley(&game).unwrap(), owen_by_permutations(&game, &all), "instance {n}");
    }
}

#[test]
fn owen_coincides_with_ee() {
    let config = GenConfig { museums: Span::new(1, 8), consortia: Span::new(1, 4), ..GenConfig::default() };
    for n in 0..100 {
        let problem = generate_nth(&config, n);
        let game = build_game(&problem, DEFAULT_BOUND).unwrap();
        let value = owen(&game, &problem.data().consortia).unwrap();
        assert_eq!(value, allocate_ee(&problem).payouts(), "instance {n}");
    }
}

#[test]
fn ee_is_equal_division_on_singleton_partitions() {
    let config = GenConfig {
        museums: Span::new(1, 8),
        sales: PassMix::GENERAL_ONLY,
        singleton_partition: true,
        ..GenConfig::default()
    };
    for n in 0..100 {
        let problem = generate_nth(&config, n);
        let expected = equal_division(&problem);
        assert_eq!(allocate_ee(&problem).payouts(), expected.as_slice(), "instance {n}");
        let game = build_game(&problem, DEFAULT_BOUND).unwrap();
        assert_eq!(shapley(&game).unwrap(), expected, "instance {n}");
    }
}

#[test]
fn permutation_helper_enumerates_all_orders() {
    let perms = permutations(4);
    assert_eq!(perms.len(), 24);
    let mut sorted = perms.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), 24);
}

#![allow(dead_code)]

use std::collections::BTreeMap;

use passalloc_core::games::CharacteristicFunction;
use passalloc_core::randgen::{generate_nth, GenConfig, PassMix, Span};
use passalloc_core::transforms::{reduce_problem, restrict, restrict_holders};
use passalloc_core::{
    allocate, Allocation, ConsortiumId, ConsumptionMatrix, MuseumId, Pass, PassId, Problem, ProblemData, Rational, RuleId,
};

pub fn config(seed: u64) -> GenConfig {
    GenConfig { seed, ..GenConfig::default() }
}

/// General-pass-only problems with exactly one holder.
pub fn single_holder(seed: u64) -> GenConfig {
    GenConfig {
        museums: Span::new(2, 7),
        consortia: Span::new(1, 4),
        holders_per_pass: Span::new(1, 1),
        max_holders: 1,
        sales: PassMix::GENERAL_ONLY,
        seed,
        ..GenConfig::default()
    }
}

/// Problems where only consortium passes are sold, to a single holder.
pub fn single_consortium_holder(seed: u64) -> GenConfig {
    GenConfig {
        sales: PassMix { individual: false, general: false, consortium: true },
        ..single_holder(seed)
    }
}

pub fn nth(config: &GenConfig, n: u64) -> Problem {
    generate_nth(config, n)
}

/// Overrides some pass prices and visit columns, keeping the holders.
pub fn rebuild(
    problem: &Problem,
    prices: &BTreeMap<PassId, Rational>,
    visits: &BTreeMap<PassId, Vec<Vec<MuseumId>>>,
) -> Problem {
    let d = problem.data();
    let passes = d
        .passes
        .iter()
        .map(|(&sigma, pass)| {
            let price = prices.get(&sigma).cloned().unwrap_or_else(|| pass.price.clone());
            let visits = match visits.get(&sigma) {
                Some(cols) => ConsumptionMatrix::from_columns(pass.visits.rows.clone(), cols),
                None => pass.visits.clone(),
            };
            (sigma, Pass { price, holders: pass.holders.clone(), visits })
        })
        .collect();
    Problem::new(ProblemData { museums: d.museums, consortia: d.consortia.clone(), passes }).expect("rebuilt problem")
}

/// Owen value by averaging marginal contributions over every ordering in
/// which the members of each union stay consecutive.
pub fn owen_by_permutations(v: &CharacteristicFunction, partition: &[Vec<MuseumId>]) -> Vec<Rational> {
    let n = v.player_count();
    let mut totals = vec![Rational::from_integer(0.into()); n];
    let mut count = 0u64;
    for union_order in permutations(partition.len()) {
        let blocks: Vec<Vec<Vec<usize>>> = union_order
            .iter()
            .map(|&b| {
                let members: Vec<usize> = partition[b].iter().map(|m| m.0 - 1).collect();
                permutations(members.len()).into_iter().map(|p| p.iter().map(|&i| members[i]).collect()).collect()
            })
            .collect();
        for_each_product(&blocks, &mut Vec::new(), &mut |order| {
            let mut mask = 0usize;
            for &p in order {
                let before = v.value_of_mask(mask).clone();
                mask |= 1 << p;
                totals[p] += v.value_of_mask(mask) - before;
            }
            count += 1;
        });
    }
    totals.into_iter().map(|t| t / Rational::from_integer(count.into())).collect()
}

fn for_each_product(blocks: &[Vec<Vec<usize>>], prefix: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    match blocks.split_first() {
        None => f(prefix),
        Some((first, rest)) => {
            for choice in first {
                let len = prefix.len();
                prefix.extend_from_slice(choice);
                for_each_product(rest, prefix, f);
                prefix.truncate(len);
            }
        }
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Equal division of every pass fee among the museums its holder visited.
pub fn equal_division(problem: &Problem) -> Vec<Rational> {
    let mut out = vec![Rational::from_integer(0.into()); problem.museum_count()];
    for sigma in problem.pass_ids() {
        let price = problem.price(sigma);
        for visits in problem.visit_sets(sigma) {
            let share = price / Rational::from_integer((visits.len() as i64).into());
            for m in visits {
                out[m.0 - 1] += &share;
            }
        }
    }
    out
}

pub type Outcome = Result<bool, String>;

fn same_holders(problem: &Problem, keep: impl Fn(PassId) -> bool) -> Problem {
    restrict_holders(problem, |sigma, _| keep(sigma)).expect("restriction")
}

fn singleton_block(problem: &Problem, sigma: PassId) -> bool {
    matches!(sigma, PassId::Consortium(k) if problem.consortium(k).len() == 1)
}

/// Individual-pass holders only: payouts are the individual pass revenues.
pub fn lemma_individual(rule: RuleId, n: u64) -> Outcome {
    let full = nth(&config(n), n);
    let problem =
        same_holders(&full, |sigma| matches!(sigma, PassId::Individual(_)) || singleton_block(&full, sigma));
    let allocation = allocate(rule, &problem).map_err(|e| e.to_string())?;
    for m in problem.museums() {
        let k = problem.consortium_of(m);
        let sigma =
            if problem.consortium(k).len() == 1 { PassId::Consortium(k) } else { PassId::Individual(m) };
        let expected = problem.price(sigma) * Rational::from_integer((problem.holders(sigma).len() as i64).into());
        if allocation.get(m) != &expected {
            return Err(format!("instance {n}: museum {m} gets {} instead of {expected}", allocation.get(m)));
        }
    }
    Ok(true)
}

/// Allocation equals the sum of allocations of the single-pass restrictions.
pub fn lemma_decomposition(rule: RuleId, n: u64) -> Outcome {
    let problem = nth(&config(n), n);
    let whole = allocate(rule, &problem).map_err(|e| e.to_string())?;
    let mut parts = vec![Rational::from_integer(0.into()); problem.museum_count()];
    for sigma in problem.pass_ids() {
        let piece = allocate(rule, &restrict(&problem, sigma).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        for (p, v) in parts.iter_mut().zip(piece.payouts()) {
            *p += v;
        }
    }
    if whole.payouts() != parts.as_slice() {
        return Err(format!("instance {n}: {:?} vs {:?}", whole.payouts(), parts));
    }
    Ok(true)
}

fn monotone(allocation: &Allocation, price: impl Fn(MuseumId) -> Rational, group: &[MuseumId]) -> Result<(), String> {
    for &a in group {
        for &b in group {
            if price(a) >= price(b) && allocation.get(a) < allocation.get(b) {
                return Err(format!(
                    "museum {a} (price {}) gets {} but museum {b} (price {}) gets {}",
                    price(a),
                    allocation.get(a),
                    price(b),
                    allocation.get(b)
                ));
            }
        }
    }
    Ok(())
}

/// On the reduced single-holder problem, dearer visited consortia get no less.
pub fn lemma_consortium_monotone(rule: RuleId, n: u64) -> Outcome {
    let problem = nth(&single_holder(n), n);
    let reduced = reduce_problem(&problem).map_err(|e| e.to_string())?;
    let allocation = allocate(rule, &reduced).map_err(|e| e.to_string())?;
    let visited = reduced.visit_sets(PassId::General)[0].clone();
    monotone(&allocation, |m| reduced.individual_price(m).clone(), &visited).map_err(|e| format!("instance {n}: {e}"))?;
    Ok(true)
}

/// Within a consortium of a single-holder problem, dearer visited museums
/// get no less. Even instances sell the general pass, odd ones a consortium
/// pass.
pub fn lemma_museum_monotone(rule: RuleId, n: u64) -> Outcome {
    let config = if n.is_multiple_of(2) { single_holder(n) } else { single_consortium_holder(n) };
    let problem = nth(&config, n);
    let allocation = allocate(rule, &problem).map_err(|e| e.to_string())?;
    let sigma = problem.pass_ids().find(|&s| !problem.holders(s).is_empty()).expect("one holder");
    let visited = problem.visit_sets(sigma)[0].clone();
    for k in problem.consortium_ids() {
        let group: Vec<MuseumId> = visited.iter().copied().filter(|&m| problem.consortium_of(m) == k).collect();
        monotone(&allocation, |m| problem.individual_price(m).clone(), &group)
            .map_err(|e| format!("instance {n}: {e}"))?;
    }
    Ok(true)
}

/// Two museums of one consortium with equal prices and equal visits get
/// equal payouts. Not applicable when every consortium is a singleton.
pub fn lemma_equal_museums(rule: RuleId, n: u64) -> Outcome {
    let base = nth(&single_holder(n), n);
    let Some(k) = base.consortium_ids().find(|&k| base.consortium(k).len() >= 2) else {
        return Ok(false);
    };
    let (i, j) = (base.consortium(k)[0], base.consortium(k)[1]);
    let mut visits = base.visit_sets(PassId::General)[0].clone();
    visits.retain(|&m| m != j);
    if visits.is_empty() || visits.contains(&i) {
        visits.extend([i, j]);
    }
    visits.sort();
    visits.dedup();
    let prices = BTreeMap::from([(PassId::Individual(j), base.individual_price(i).clone())]);
    let problem = rebuild(&base, &prices, &BTreeMap::from([(PassId::General, vec![visits])]));
    let allocation = allocate(rule, &problem).map_err(|e| e.to_string())?;
    if allocation.get(i) != allocation.get(j) {
        return Err(format!("instance {n}: museums {i}, {j} get {} and {}", allocation.get(i), allocation.get(j)));
    }
    Ok(true)
}

/// Two consortia with equal pass prices, both visited or both unvisited,
/// get equal aggregates. Not applicable with a single consortium.
pub fn lemma_equal_consortia(rule: RuleId, n: u64) -> Outcome {
    let base = nth(&single_holder(n), n);
    if base.consortium_count() < 2 {
        return Ok(false);
    }
    let (k, r) = (ConsortiumId(1), ConsortiumId(2));
    let mut visits = base.visit_sets(PassId::General)[0].clone();
    let touches = |v: &[MuseumId], c: ConsortiumId| v.iter().any(|&m| base.consortium_of(m) == c);
    for c in [k, r] {
        if !touches(&visits, c) {
            visits.push(base.consortium(c)[0]);
        }
    }
    visits.sort();
    let price = base.consortium_price(k).clone();
    let mut prices = BTreeMap::from([(PassId::Consortium(r), price.clone())]);
    if base.consortium(r).len() == 1 {
        prices.insert(PassId::Individual(base.consortium(r)[0]), price);
    }
    let problem = rebuild(&base, &prices, &BTreeMap::from([(PassId::General, vec![visits])]));
    let allocation = allocate(rule, &problem).map_err(|e| e.to_string())?;
    let (a, b) = (allocation.total_over(problem.consortium(k)), allocation.total_over(problem.consortium(r)));
    if a != b {
        return Err(format!("instance {n}: consortia {k}, {r} get {a} and {b}"));
    }
    Ok(true)
}

/// Runs `check` on instances `0..count` and returns how many applied.
pub fn suite(count: u64, check: impl Fn(u64) -> Outcome) -> Result<usize, String> {
    let mut applied = 0;
    for n in 0..count {
        if check(n)? {
            applied += 1;
        }
    }
    Ok(applied)
}

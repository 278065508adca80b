//! Edits that turn a random instance into one where an axiom's hypotheses
//! hold, and random transformation parameters.

use std::collections::BTreeMap;

use rand::Rng;

use crate::problem::{pass_revenue, ConsortiumId, ConsumptionMatrix, HolderId, MuseumId, Pass, PassId, Problem, ProblemData};
use crate::rational::{sum, Rational};
use crate::transforms::{ConsortiumSplitSpec, MuseumSplitSpec};

/// Rewrites every holder's visit set; `None` drops the holder, as does an
/// empty result.
pub(crate) fn edit(
    problem: &Problem,
    mut f: impl FnMut(PassId, &HolderId, &[MuseumId]) -> Option<Vec<MuseumId>>,
) -> Problem {
    let mut passes = BTreeMap::new();
    for sigma in problem.pass_ids() {
        let pass = problem.pass(sigma);
        let mut holders = Vec::new();
        let mut columns = Vec::new();
        for (h, v) in pass.holders.iter().zip(problem.visit_sets(sigma)) {
            if let Some(mut new) = f(sigma, h, v) {
                new.sort();
                new.dedup();
                if !new.is_empty() {
                    holders.push(h.clone());
                    columns.push(new);
                }
            }
        }
        let visits = ConsumptionMatrix::from_columns(pass.visits.rows.clone(), &columns);
        passes.insert(sigma, Pass { price: pass.price.clone(), holders, visits });
    }
    let d = problem.data();
    Problem::new(ProblemData { museums: d.museums, consortia: d.consortia.clone(), passes })
        .expect("visit edits stay inside each pass's rows")
}

/// Makes `i` and `j` (same consortium) satisfy the hypotheses of symmetry
/// within consortia: anyone visiting one visits both, and individual sales
/// are dropped when their revenues differ.
pub(crate) fn symmetrize_within(problem: &Problem, i: MuseumId, j: MuseumId) -> Problem {
    let k = problem.consortium_of(i);
    let drop_individual =
        pass_revenue(problem, PassId::Individual(i)) != pass_revenue(problem, PassId::Individual(j));
    edit(problem, |sigma, _, v| {
        let mut v = v.to_vec();
        match sigma {
            PassId::Individual(m) if drop_individual && (m == i || m == j) => return None,
            PassId::Individual(_) => {}
            PassId::Consortium(c) if c != k => {}
            _ => {
                if v.contains(&i) || v.contains(&j) {
                    v.extend([i, j]);
                }
            }
        }
        Some(v)
    })
}

/// Makes `r` and `t` satisfy the hypotheses of symmetry between consortia:
/// general-pass holders touching one get a visit in the other, and pass sales
/// are dropped where revenues differ.
pub(crate) fn symmetrize_between(problem: &Problem, r: ConsortiumId, t: ConsortiumId, rng: &mut impl Rng) -> Problem {
    let drop_consortium =
        pass_revenue(problem, PassId::Consortium(r)) != pass_revenue(problem, PassId::Consortium(t));
    let indiv = |k: ConsortiumId| {
        let revenues: Vec<Rational> =
            problem.consortium(k).iter().map(|&m| pass_revenue(problem, PassId::Individual(m))).collect();
        sum(&revenues)
    };
    let drop_individual = indiv(r) != indiv(t);
    edit(problem, |sigma, _, v| match sigma {
        PassId::General => {
            let mut v = v.to_vec();
            let hits = |k: ConsortiumId| v.iter().any(|&m| problem.consortium_of(m) == k);
            let (hr, ht) = (hits(r), hits(t));
            if hr != ht {
                let missing = problem.consortium(if hr { t } else { r });
                v.push(missing[rng.random_range(0..missing.len())]);
            }
            Some(v)
        }
        PassId::Consortium(k) if drop_consortium && (k == r || k == t) => None,
        PassId::Individual(m) if drop_individual && [r, t].contains(&problem.consortium_of(m)) => None,
        _ => Some(v.to_vec()),
    })
}

/// Removes every visit to `target`, leaving it a dummy museum.
pub(crate) fn dummify(problem: &Problem, target: MuseumId) -> Problem {
    edit(problem, |_, _, v| Some(v.iter().copied().filter(|&m| m != target).collect()))
}

/// Splits `total` into `pieces` positive parts with small integer weights.
pub(crate) fn partition_price(total: &Rational, pieces: usize, rng: &mut impl Rng) -> Vec<Rational> {
    let weights: Vec<i64> = (0..pieces).map(|_| rng.random_range(1..=4)).collect();
    let whole: i64 = weights.iter().sum();
    weights.iter().map(|&w| total * Rational::new(w.into(), whole.into())).collect()
}

pub(crate) fn random_museum_split(problem: &Problem, rng: &mut impl Rng) -> MuseumSplitSpec {
    let target = MuseumId(rng.random_range(1..=problem.museum_count()));
    let pieces = rng.random_range(2..=3);
    MuseumSplitSpec { target, piece_prices: partition_price(problem.individual_price(target), pieces, rng) }
}

pub(crate) fn random_consortium_split(problem: &Problem, rng: &mut impl Rng) -> ConsortiumSplitSpec {
    let target = ConsortiumId(rng.random_range(1..=problem.consortium_count()));
    let copies = rng.random_range(2..=3);
    let copy_pass_prices = partition_price(problem.consortium_price(target), copies, rng);
    let block = problem.consortium(target);
    let copy_museum_prices = if block.len() == 1 {
        copy_pass_prices.iter().map(|p| vec![p.clone()]).collect()
    } else {
        let per_member: Vec<Vec<Rational>> =
            block.iter().map(|&m| partition_price(problem.individual_price(m), copies, rng)).collect();
        (0..copies).map(|l| per_member.iter().map(|parts| parts[l].clone()).collect()).collect()
    };
    ConsortiumSplitSpec { target, copy_pass_prices, copy_museum_prices }
}

//! Problem transformations the axioms quantify over: pooling two holder
//! populations, splitting a museum or a consortium, collapsing consortia into
//! single museums, and restricting to the holders of one pass.
//!
//! Split outputs keep every untouched museum and consortium id unchanged. The
//! first piece (or copy) reuses the original id; further pieces get fresh ids
//! appended after the existing ones, and the returned [`Relabeling`] records
//! the mapping. Holder sets that must be duplicated receive fresh holder ids
//! (`"<id>~<copy>"`) so holder sets stay disjoint.

use std::collections::{BTreeMap, HashSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::problem::{
    ConsortiumId, ConsumptionMatrix, HolderId, MuseumId, Pass, PassId, Problem, ProblemData,
    ValidationReport,
};
use crate::rational::{format_rational, sum, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuseumSplitSpec {
    pub target: MuseumId,
    #[serde(with = "price_list")]
    pub piece_prices: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsortiumSplitSpec {
    pub target: ConsortiumId,
    #[serde(with = "price_list")]
    pub copy_pass_prices: Vec<Rational>,
    /// `copy_museum_prices[l][h]`: individual price of the `h`-th member in copy `l`.
    #[serde(with = "price_matrix")]
    pub copy_museum_prices: Vec<Vec<Rational>>,
}

/// Where each original museum and consortium ended up.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Relabeling {
    pub museums: BTreeMap<MuseumId, Vec<MuseumId>>,
    pub consortia: BTreeMap<ConsortiumId, Vec<ConsortiumId>>,
}

impl Relabeling {
    fn identity(problem: &Problem) -> Self {
        Relabeling {
            museums: problem.museums().map(|m| (m, vec![m])).collect(),
            consortia: problem.consortium_ids().map(|k| (k, vec![k])).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transformed {
    pub problem: Problem,
    pub relabel: Relabeling,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("problems differ in museums, consortia or prices and cannot be concatenated")]
    Mismatch,
    #[error("holder {0} appears in both problems")]
    HolderCollision(HolderId),
    #[error("unknown museum {0}")]
    UnknownMuseum(MuseumId),
    #[error("unknown consortium {0}")]
    UnknownConsortium(ConsortiumId),
    #[error("unknown pass sigma {0}")]
    UnknownPass(i64),
    #[error("a split needs at least two pieces, got {0}")]
    TooFewPieces(usize),
    #[error("split prices must be strictly positive")]
    NonPositivePiece,
    #[error("split prices sum to {found}, expected {expected}")]
    PriceSum { expected: String, found: String },
    #[error("consortium split expects {expected} museum prices per copy, got {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("problem is not in the general-pass-only subdomain")]
    NotGeneralOnly,
    #[error("transformed problem is invalid: {0}")]
    Invalid(ValidationReport),
}

fn build(data: ProblemData) -> Result<Problem, TransformError> {
    Problem::new(data).map_err(TransformError::Invalid)
}

fn pass_from_columns(price: Rational, holders: Vec<HolderId>, rows: Vec<MuseumId>, columns: &[Vec<MuseumId>]) -> Pass {
    Pass { price, holders, visits: ConsumptionMatrix::from_columns(rows, columns) }
}

fn check_price_sum(expected: &Rational, parts: &[Rational]) -> Result<(), TransformError> {
    if parts.iter().any(|p| *p <= Rational::zero()) {
        return Err(TransformError::NonPositivePiece);
    }
    let found = sum(parts);
    if &found != expected {
        return Err(TransformError::PriceSum {
            expected: format_rational(expected),
            found: format_rational(&found),
        });
    }
    Ok(())
}

struct FreshHolders {
    taken: HashSet<HolderId>,
}

impl FreshHolders {
    fn new(problem: &Problem) -> Self {
        let taken = problem.pass_ids().flat_map(|s| problem.holders(s).iter().cloned()).collect();
        FreshHolders { taken }
    }

    fn copy_of(&mut self, base: &HolderId, copy: usize) -> HolderId {
        let mut name = format!("{base}~{copy}");
        while self.taken.contains(&HolderId::Str(name.clone())) {
            name.push('\'');
        }
        let id = HolderId::Str(name);
        self.taken.insert(id.clone());
        id
    }

    fn copies(&mut self, holders: &[HolderId], copy: usize) -> Vec<HolderId> {
        if copy == 0 {
            holders.to_vec()
        } else {
            holders.iter().map(|h| self.copy_of(h, copy)).collect()
        }
    }
}

/// Pools the holders of two problems over the same museums, consortia and prices.
pub fn concat(first: &Problem, second: &Problem) -> Result<Problem, TransformError> {
    let (a, b) = (first.data(), second.data());
    if a.museums != b.museums
        || a.consortia != b.consortia
        || a.passes.len() != b.passes.len()
        || a.passes.iter().any(|(s, p)| b.passes.get(s).map(|q| &q.price) != Some(&p.price))
    {
        return Err(TransformError::Mismatch);
    }
    for sigma in second.pass_ids() {
        for h in second.holders(sigma) {
            if first.pass_of(h).is_ok() {
                return Err(TransformError::HolderCollision(h.clone()));
            }
        }
    }
    let mut passes = BTreeMap::new();
    for (&sigma, pass) in &a.passes {
        let mut holders = pass.holders.clone();
        holders.extend(second.holders(sigma).iter().cloned());
        let mut columns = first.visit_sets(sigma).to_vec();
        columns.extend(second.visit_sets(sigma).iter().cloned());
        passes.insert(sigma, pass_from_columns(pass.price.clone(), holders, pass.visits.rows.clone(), &columns));
    }
    build(ProblemData { museums: a.museums, consortia: a.consortia.clone(), passes })
}

/// Replaces museum `target` by several pieces inside its consortium. Every
/// piece inherits the target's visits and a copy of its individual-pass
/// holders; piece prices must sum to the target's individual price.
pub fn split_museum(problem: &Problem, spec: &MuseumSplitSpec) -> Result<Transformed, TransformError> {
    let target = spec.target;
    problem.require_museum(target).map_err(|_| TransformError::UnknownMuseum(target))?;
    let r = spec.piece_prices.len();
    if r < 2 {
        return Err(TransformError::TooFewPieces(r));
    }
    check_price_sum(problem.individual_price(target), &spec.piece_prices)?;

    let m = problem.museum_count();
    let pieces: Vec<MuseumId> =
        std::iter::once(target).chain((m + 1..m + r).map(MuseumId)).collect();
    let expand = |visits: &[MuseumId]| -> Vec<MuseumId> {
        visits
            .iter()
            .flat_map(|&v| if v == target { pieces.clone() } else { vec![v] })
            .collect()
    };
    let home = problem.consortium_of(target);
    let consortia: Vec<Vec<MuseumId>> = problem
        .data()
        .consortia
        .iter()
        .map(|block| block.iter().flat_map(|&v| if v == target { pieces.clone() } else { vec![v] }).collect())
        .collect();

    let mut fresh = FreshHolders::new(problem);
    let mut passes = BTreeMap::new();
    for sigma in problem.pass_ids() {
        let pass = problem.pass(sigma);
        match sigma {
            PassId::Individual(i) if i == target => {
                for (h, (&piece, price)) in pieces.iter().zip(&spec.piece_prices).enumerate() {
                    let holders = fresh.copies(&pass.holders, h);
                    let cols = vec![vec![piece]; holders.len()];
                    passes.insert(
                        PassId::Individual(piece),
                        pass_from_columns(price.clone(), holders, vec![piece], &cols),
                    );
                }
            }
            PassId::Individual(_) => {
                passes.insert(sigma, pass.clone());
            }
            PassId::General => {
                let rows = (1..m + r).map(MuseumId).collect();
                let cols: Vec<_> = problem.visit_sets(sigma).iter().map(|v| expand(v)).collect();
                passes.insert(sigma, pass_from_columns(pass.price.clone(), pass.holders.clone(), rows, &cols));
            }
            PassId::Consortium(k) if k == home => {
                let cols: Vec<_> = problem.visit_sets(sigma).iter().map(|v| expand(v)).collect();
                let rows = consortia[k.index()].clone();
                passes.insert(sigma, pass_from_columns(pass.price.clone(), pass.holders.clone(), rows, &cols));
            }
            PassId::Consortium(_) => {
                passes.insert(sigma, pass.clone());
            }
        }
    }
    let out = build(ProblemData { museums: m + r - 1, consortia, passes })?;
    let mut relabel = Relabeling::identity(problem);
    relabel.museums.insert(target, pieces);
    Ok(Transformed { problem: out, relabel })
}

/// Replaces consortium `target` by several full copies. Every copy carries a
/// duplicate of the consortium-pass holders and of each member's
/// individual-pass holders, and general-pass visits to a member extend to all
/// of its copies.
pub fn split_consortium(problem: &Problem, spec: &ConsortiumSplitSpec) -> Result<Transformed, TransformError> {
    let k = spec.target;
    problem.check_consortium(k).map_err(|_| TransformError::UnknownConsortium(k))?;
    let t = spec.copy_pass_prices.len();
    if t < 2 {
        return Err(TransformError::TooFewPieces(t));
    }
    if spec.copy_museum_prices.len() != t {
        return Err(TransformError::ShapeMismatch { expected: t, found: spec.copy_museum_prices.len() });
    }
    let block = problem.consortium(k).to_vec();
    let r = block.len();
    if let Some(bad) = spec.copy_museum_prices.iter().find(|row| row.len() != r) {
        return Err(TransformError::ShapeMismatch { expected: r, found: bad.len() });
    }
    check_price_sum(problem.consortium_price(k), &spec.copy_pass_prices)?;
    for (h, &museum) in block.iter().enumerate() {
        let parts: Vec<Rational> = spec.copy_museum_prices.iter().map(|row| row[h].clone()).collect();
        check_price_sum(problem.individual_price(museum), &parts)?;
    }

    let m = problem.museum_count();
    let s = problem.consortium_count();
    // copies[l][h]: id of member h in copy l
    let copies: Vec<Vec<MuseumId>> = (0..t)
        .map(|l| {
            if l == 0 {
                block.clone()
            } else {
                (0..r).map(|h| MuseumId(m + (l - 1) * r + h + 1)).collect()
            }
        })
        .collect();
    let copy_ids: Vec<ConsortiumId> =
        std::iter::once(k).chain((s + 1..s + t).map(ConsortiumId)).collect();
    let member = |v: MuseumId| block.iter().position(|&b| b == v);
    let expand_all = |visits: &[MuseumId]| -> Vec<MuseumId> {
        visits
            .iter()
            .flat_map(|&v| match member(v) {
                Some(h) => copies.iter().map(|c| c[h]).collect(),
                None => vec![v],
            })
            .collect()
    };
    let into_copy = |visits: &[MuseumId], l: usize| -> Vec<MuseumId> {
        visits.iter().map(|&v| copies[l][member(v).expect("consortium pass visits its block")]).collect()
    };

    let mut consortia = problem.data().consortia.clone();
    consortia.extend(copies[1..].iter().cloned());

    let mut fresh = FreshHolders::new(problem);
    let mut passes = BTreeMap::new();
    for sigma in problem.pass_ids() {
        let pass = problem.pass(sigma);
        match sigma {
            PassId::Individual(i) => match member(i) {
                Some(h) => {
                    for (l, copy) in copies.iter().enumerate() {
                        let holders = fresh.copies(&pass.holders, l);
                        let cols = vec![vec![copy[h]]; holders.len()];
                        passes.insert(
                            PassId::Individual(copy[h]),
                            pass_from_columns(spec.copy_museum_prices[l][h].clone(), holders, vec![copy[h]], &cols),
                        );
                    }
                }
                None => {
                    passes.insert(sigma, pass.clone());
                }
            },
            PassId::General => {
                let rows = (1..=m + (t - 1) * r).map(MuseumId).collect();
                let cols: Vec<_> = problem.visit_sets(sigma).iter().map(|v| expand_all(v)).collect();
                passes.insert(sigma, pass_from_columns(pass.price.clone(), pass.holders.clone(), rows, &cols));
            }
            PassId::Consortium(c) if c == k => {
                for (l, &cid) in copy_ids.iter().enumerate() {
                    let holders = fresh.copies(&pass.holders, l);
                    let cols: Vec<_> = problem.visit_sets(sigma).iter().map(|v| into_copy(v, l)).collect();
                    passes.insert(
                        PassId::Consortium(cid),
                        pass_from_columns(spec.copy_pass_prices[l].clone(), holders, copies[l].clone(), &cols),
                    );
                }
            }
            PassId::Consortium(_) => {
                passes.insert(sigma, pass.clone());
            }
        }
    }
    let out = build(ProblemData { museums: m + (t - 1) * r, consortia, passes })?;
    let mut relabel = Relabeling::identity(problem);
    for (h, &museum) in block.iter().enumerate() {
        relabel.museums.insert(museum, copies.iter().map(|c| c[h]).collect());
    }
    relabel.consortia.insert(k, copy_ids);
    Ok(Transformed { problem: out, relabel })
}

/// Collapses each consortium of a general-pass-only problem into one museum
/// priced at the consortium pass price. Museum `t` of the result stands for
/// consortium `t` of the input.
pub fn reduce_problem(problem: &Problem) -> Result<Problem, TransformError> {
    if !problem.is_general_only() {
        return Err(TransformError::NotGeneralOnly);
    }
    let s = problem.consortium_count();
    let museums: Vec<MuseumId> = (1..=s).map(MuseumId).collect();
    let mut passes = BTreeMap::new();
    for k in problem.consortium_ids() {
        let price = problem.consortium_price(k).clone();
        passes.insert(PassId::Individual(MuseumId(k.0)), Pass::unsold(price.clone(), vec![MuseumId(k.0)]));
        passes.insert(PassId::Consortium(k), Pass::unsold(price, vec![MuseumId(k.0)]));
    }
    let cols: Vec<Vec<MuseumId>> = problem
        .visit_sets(PassId::General)
        .iter()
        .map(|v| problem.consortia_touched(v).into_iter().map(|k| MuseumId(k.0)).collect())
        .collect();
    let general = problem.pass(PassId::General);
    passes.insert(
        PassId::General,
        pass_from_columns(general.price.clone(), general.holders.clone(), museums.clone(), &cols),
    );
    build(ProblemData { museums: s, consortia: museums.into_iter().map(|m| vec![m]).collect(), passes })
}

/// Keeps only the holders of pass `sigma`; every other pass keeps its price
/// but loses its holders.
pub fn restrict(problem: &Problem, sigma: PassId) -> Result<Problem, TransformError> {
    if !problem.data().passes.contains_key(&sigma) {
        return Err(TransformError::UnknownPass(sigma.sigma()));
    }
    restrict_holders(problem, |s, _| s == sigma)
}

/// Keeps only the holders for which `keep(pass, holder)` is true.
pub fn restrict_holders(problem: &Problem, keep: impl Fn(PassId, &HolderId) -> bool) -> Result<Problem, TransformError> {
    let mut passes = BTreeMap::new();
    for sigma in problem.pass_ids() {
        let pass = problem.pass(sigma);
        let (holders, cols): (Vec<HolderId>, Vec<Vec<MuseumId>>) = pass
            .holders
            .iter()
            .zip(problem.visit_sets(sigma))
            .filter(|(h, _)| keep(sigma, h))
            .map(|(h, v)| (h.clone(), v.clone()))
            .unzip();
        passes.insert(sigma, pass_from_columns(pass.price.clone(), holders, pass.visits.rows.clone(), &cols));
    }
    let d = problem.data();
    build(ProblemData { museums: d.museums, consortia: d.consortia.clone(), passes })
}

mod price_list {
    use crate::rational::{format_rational, parse_rational, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| parse_rational(t).map_err(de::Error::custom))
            .collect()
    }
}

mod price_matrix {
    use crate::rational::{format_rational, parse_rational, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(|row| row.iter().map(format_rational).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        Vec::<Vec<String>>::deserialize(d)?
            .iter()
            .map(|row| row.iter().map(|t| parse_rational(t).map_err(de::Error::custom)).collect())
            .collect()
    }
}

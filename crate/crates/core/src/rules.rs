//! Allocation rules.
//!
//! The four canonical rules and most of the counterexample rules share one
//! two-stage skeleton: each general-pass fee is first split among the visited
//! consortia, then among museums inside each consortium; consortium-pass fees
//! are split among museums of that consortium; individual-pass revenue goes
//! straight to its museum. A [`Scheme`] picks the weighting used at each step.
//! `R2` and `R5` do not fit the skeleton and are evaluated on their own.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::problem::{count, ConsortiumId, MuseumId, PassId, Problem};
use crate::rational::{sum, Rational};

/// Per-museum payouts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    payouts: Vec<Rational>,
}

impl Allocation {
    pub fn zeros(museums: usize) -> Self {
        Allocation { payouts: vec![Rational::zero(); museums] }
    }

    pub fn from_vec(payouts: Vec<Rational>) -> Self {
        Allocation { payouts }
    }

    pub fn get(&self, museum: MuseumId) -> &Rational {
        &self.payouts[museum.index()]
    }

    pub fn payouts(&self) -> &[Rational] {
        &self.payouts
    }

    pub fn len(&self) -> usize {
        self.payouts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payouts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (MuseumId, &Rational)> {
        self.payouts.iter().enumerate().map(|(i, v)| (MuseumId(i + 1), v))
    }

    pub fn total(&self) -> Rational {
        sum(&self.payouts)
    }

    /// Aggregate payout of the museums in `museums`.
    pub fn total_over(&self, museums: &[MuseumId]) -> Rational {
        sum(museums.iter().map(|&m| self.get(m)))
    }

    fn credit(&mut self, museum: MuseumId, amount: Rational) {
        self.payouts[museum.index()] += amount;
    }
}

impl Add for &Allocation {
    type Output = Allocation;

    fn add(self, rhs: &Allocation) -> Allocation {
        assert_eq!(self.len(), rhs.len(), "allocations over different museum sets");
        Allocation {
            payouts: self.payouts.iter().zip(&rhs.payouts).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Serialize for Allocation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        crate::rational::serde_fraction::serialize_vec(&self.payouts, s)
    }
}

/// The fourteen rules: four canonical two-stage rules and ten counterexample
/// rules used to show the axioms are independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleId {
    Ee,
    Pp,
    Pe,
    Ep,
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
}

impl RuleId {
    pub const ALL: [RuleId; 14] = [
        RuleId::Ee,
        RuleId::Pp,
        RuleId::Pe,
        RuleId::Ep,
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7,
        RuleId::R8,
        RuleId::R9,
        RuleId::R10,
    ];

    pub const CANONICAL: [RuleId; 4] = [RuleId::Ee, RuleId::Pp, RuleId::Pe, RuleId::Ep];

    pub fn tag(self) -> &'static str {
        match self {
            RuleId::Ee => "ee",
            RuleId::Pp => "pp",
            RuleId::Pe => "pe",
            RuleId::Ep => "ep",
            RuleId::R1 => "r1",
            RuleId::R2 => "r2",
            RuleId::R3 => "r3",
            RuleId::R4 => "r4",
            RuleId::R5 => "r5",
            RuleId::R6 => "r6",
            RuleId::R7 => "r7",
            RuleId::R8 => "r8",
            RuleId::R9 => "r9",
            RuleId::R10 => "r10",
        }
    }

    pub fn is_canonical(self) -> bool {
        Self::CANONICAL.contains(&self)
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleId::Ee => "egalitarian-egalitarian",
            RuleId::Pp => "proportional-proportional",
            RuleId::Pe => "proportional-egalitarian",
            RuleId::Ep => "egalitarian-proportional",
            _ => "counterexample rule",
        }
    }

    /// Skeleton parameters, or `None` for the rules evaluated separately.
    pub fn scheme(self) -> Option<Scheme> {
        use ConsortiumPassShare as C;
        use ConsortiumShare as F;
        use MuseumShare as S;
        let s = |first, second, consortium_pass| Some(Scheme { first, second, consortium_pass });
        match self {
            RuleId::Ee => s(F::Equal, S::EqualVisited, C::EqualVisited),
            RuleId::Pp => s(F::PassPrice, S::PriceVisited, C::PriceVisited),
            RuleId::Pe => s(F::PassPrice, S::EqualVisited, C::EqualVisited),
            RuleId::Ep => s(F::Equal, S::PriceVisited, C::PriceVisited),
            RuleId::R1 => s(F::Equal, S::EqualVisited, C::VisitCounts),
            RuleId::R3 => s(F::PassPrice, S::PriceVisited, C::VisitIndicators),
            RuleId::R4 => s(F::PassPrice, S::PriceVisited, C::PriceAllHolders),
            RuleId::R6 => s(F::PassPrice, S::EqualVisited, C::VisitCounts),
            RuleId::R7 => s(F::PassPrice, S::EqualVisited, C::EqualAllHolders),
            RuleId::R8 => s(F::MemberPrices, S::EqualVisited, C::PriceVisited),
            RuleId::R9 => s(F::Equal, S::PriceVisited, C::VisitIndicators),
            RuleId::R10 => s(F::Equal, S::PriceWholeConsortium, C::PriceVisited),
            RuleId::R2 | RuleId::R5 => None,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule `{0}` (expected one of ee, pp, pe, ep, r1..r10)")]
pub struct UnknownRule(pub String);

impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        RuleId::ALL
            .into_iter()
            .find(|r| r.tag() == lower)
            .ok_or_else(|| UnknownRule(s.to_string()))
    }
}

/// How a general-pass fee is split among the consortia a holder visited.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConsortiumShare {
    Equal,
    /// Proportional to consortium pass prices.
    PassPrice,
    /// Proportional to the summed individual prices of each consortium's members.
    MemberPrices,
}

/// How a consortium's share of a general-pass fee is split among its museums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuseumShare {
    /// Equally among the visited museums of the consortium.
    EqualVisited,
    /// Proportional to individual prices among the visited museums.
    PriceVisited,
    /// Proportional to individual prices among all museums of the consortium.
    PriceWholeConsortium,
}

/// How consortium-pass revenue is split among the consortium's museums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConsortiumPassShare {
    /// Each holder's fee equally among the museums that holder visited.
    EqualVisited,
    /// Each holder's fee proportional to individual prices of visited museums.
    PriceVisited,
    /// Pooled revenue proportional to each museum's visit count.
    VisitCounts,
    /// Pooled revenue proportional to individual price, over museums with at least one visit.
    VisitIndicators,
    /// Pooled revenue proportional to individual price over the whole consortium.
    PriceAllHolders,
    /// Pooled revenue equally over the whole consortium.
    EqualAllHolders,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scheme {
    pub first: ConsortiumShare,
    pub second: MuseumShare,
    pub consortium_pass: ConsortiumPassShare,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("division guard: consortium {consortium} has sales but a zero weight denominator")]
    ZeroDenominator { consortium: ConsortiumId },
}

pub fn allocate(rule: RuleId, problem: &Problem) -> Result<Allocation, RuleError> {
    match rule {
        RuleId::R2 => Ok(allocate_r2(problem)),
        RuleId::R5 => allocate_r5(problem),
        other => allocate_scheme(other.scheme().expect("skeleton rule"), problem),
    }
}

pub fn allocate_ee(problem: &Problem) -> Allocation {
    allocate(RuleId::Ee, problem).expect("canonical rules have no division guard")
}

pub fn allocate_pp(problem: &Problem) -> Allocation {
    allocate(RuleId::Pp, problem).expect("canonical rules have no division guard")
}

pub fn allocate_pe(problem: &Problem) -> Allocation {
    allocate(RuleId::Pe, problem).expect("canonical rules have no division guard")
}

pub fn allocate_ep(problem: &Problem) -> Allocation {
    allocate(RuleId::Ep, problem).expect("canonical rules have no division guard")
}

/// Evaluates one of the counterexample rules `r1`..`r10`.
pub fn allocate_remark(rule: RuleId, problem: &Problem) -> Result<Allocation, RuleError> {
    assert!(!rule.is_canonical(), "{rule} is a canonical rule");
    allocate(rule, problem)
}

pub fn allocate_scheme(scheme: Scheme, problem: &Problem) -> Result<Allocation, RuleError> {
    let mut out = Allocation::zeros(problem.museum_count());
    let general_price = problem.price(PassId::General);
    for visits in problem.visit_sets(PassId::General) {
        let touched = problem.consortia_touched(visits);
        let first = consortium_weights(scheme.first, problem, &touched);
        for (k, w1) in touched.iter().zip(first) {
            let share = general_price * w1;
            let visited: Vec<MuseumId> =
                visits.iter().copied().filter(|&m| problem.consortium_of(m) == *k).collect();
            match scheme.second {
                MuseumShare::EqualVisited => split_equal(&mut out, &visited, &share),
                MuseumShare::PriceVisited => split_by_price(&mut out, problem, &visited, &share),
                MuseumShare::PriceWholeConsortium => {
                    split_by_price(&mut out, problem, problem.consortium(*k), &share)
                }
            }
        }
    }
    for k in problem.consortium_ids() {
        consortium_pass_term(scheme.consortium_pass, problem, k, &mut out)?;
    }
    individual_terms(problem, &mut out);
    Ok(out)
}

fn consortium_weights(kind: ConsortiumShare, problem: &Problem, touched: &[ConsortiumId]) -> Vec<Rational> {
    let raw: Vec<Rational> = match kind {
        ConsortiumShare::Equal => return vec![Rational::new(1.into(), touched.len().into()); touched.len()],
        ConsortiumShare::PassPrice => touched.iter().map(|&k| problem.consortium_price(k).clone()).collect(),
        ConsortiumShare::MemberPrices => touched
            .iter()
            .map(|&k| sum(problem.consortium(k).iter().map(|&m| problem.individual_price(m))))
            .collect(),
    };
    let total = sum(&raw);
    raw.into_iter().map(|w| w / &total).collect()
}

fn split_equal(out: &mut Allocation, museums: &[MuseumId], amount: &Rational) {
    let each = amount / count(museums.len());
    for &m in museums {
        out.credit(m, each.clone());
    }
}

fn split_by_price(out: &mut Allocation, problem: &Problem, museums: &[MuseumId], amount: &Rational) {
    let total = sum(museums.iter().map(|&m| problem.individual_price(m)));
    for &m in museums {
        out.credit(m, amount * problem.individual_price(m) / &total);
    }
}

fn consortium_pass_term(
    kind: ConsortiumPassShare,
    problem: &Problem,
    k: ConsortiumId,
    out: &mut Allocation,
) -> Result<(), RuleError> {
    let sigma = PassId::Consortium(k);
    let holders = problem.holders(sigma).len();
    if holders == 0 {
        return Ok(());
    }
    let price = problem.price(sigma);
    let pooled = price * count(holders);
    let block = problem.consortium(k);
    let visits = problem.visit_sets(sigma);
    match kind {
        ConsortiumPassShare::EqualVisited => {
            for v in visits {
                split_equal(out, v, price);
            }
        }
        ConsortiumPassShare::PriceVisited => {
            for v in visits {
                split_by_price(out, problem, v, price);
            }
        }
        ConsortiumPassShare::VisitCounts => {
            let tallies: Vec<usize> =
                block.iter().map(|m| visits.iter().filter(|v| v.contains(m)).count()).collect();
            let total: usize = tallies.iter().sum();
            if total == 0 {
                return Err(RuleError::ZeroDenominator { consortium: k });
            }
            for (&m, &n) in block.iter().zip(&tallies) {
                out.credit(m, &pooled * count(n) / count(total));
            }
        }
        ConsortiumPassShare::VisitIndicators => {
            let visited: Vec<MuseumId> =
                block.iter().copied().filter(|m| visits.iter().any(|v| v.contains(m))).collect();
            if visited.is_empty() {
                return Err(RuleError::ZeroDenominator { consortium: k });
            }
            split_by_price(out, problem, &visited, &pooled);
        }
        ConsortiumPassShare::PriceAllHolders => split_by_price(out, problem, block, &pooled),
        ConsortiumPassShare::EqualAllHolders => split_equal(out, block, &pooled),
    }
    Ok(())
}

fn individual_terms(problem: &Problem, out: &mut Allocation) {
    for m in problem.museums() {
        let sigma = PassId::Individual(m);
        let sold = problem.holders(sigma).len();
        if sold > 0 {
            out.credit(m, problem.price(sigma) * count(sold));
        }
    }
}

/// Total revenue split equally among consortia, then equally among members.
fn allocate_r2(problem: &Problem) -> Allocation {
    let revenue = problem.revenue();
    let s = count(problem.consortium_count());
    Allocation::from_vec(
        problem
            .museums()
            .map(|m| &revenue / (&s * count(problem.consortium(problem.consortium_of(m)).len())))
            .collect(),
    )
}

/// General-pass fees split proportionally to individual prices over every
/// visited museum, ignoring the consortium structure.
fn allocate_r5(problem: &Problem) -> Result<Allocation, RuleError> {
    let mut out = Allocation::zeros(problem.museum_count());
    let price = problem.price(PassId::General);
    for v in problem.visit_sets(PassId::General) {
        split_by_price(&mut out, problem, v, price);
    }
    for k in problem.consortium_ids() {
        consortium_pass_term(ConsortiumPassShare::PriceVisited, problem, k, &mut out)?;
    }
    individual_terms(problem, &mut out);
    Ok(out)
}

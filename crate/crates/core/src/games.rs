//! The transferable-utility game of a problem and its Shapley and Owen values.
//!
//! `v(S)` is the revenue from holders whose visits all fall inside `S`. The
//! game is stored as a dense table indexed by bitmask, bit `i - 1` standing
//! for museum `i`, so the museum count is capped (12 by default).

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::problem::{MuseumId, Problem};
use crate::rational::{sum, Rational};

pub const DEFAULT_BOUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("{players} players exceed the enumeration bound of {bound}")]
    TooManyPlayers { players: usize, bound: usize },
    #[error("the partition does not cover players 1..={players} exactly once")]
    BadPartition { players: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicFunction {
    players: usize,
    values: Vec<Rational>,
}

fn mask_of(museums: &[MuseumId]) -> usize {
    museums.iter().fold(0, |acc, m| acc | 1 << (m.0 - 1))
}

fn members(mask: usize) -> Vec<MuseumId> {
    (0..usize::BITS as usize).filter(|b| mask >> b & 1 == 1).map(|b| MuseumId(b + 1)).collect()
}

fn check_bound(players: usize, bound: usize) -> Result<(), GameError> {
    if players > bound {
        Err(GameError::TooManyPlayers { players, bound })
    } else {
        Ok(())
    }
}

impl CharacteristicFunction {
    /// Game from explicit values, `values[mask]` for every subset mask.
    pub fn from_table(players: usize, values: Vec<Rational>) -> Self {
        assert_eq!(values.len(), 1 << players, "table must list every subset");
        CharacteristicFunction { players, values }
    }

    pub fn player_count(&self) -> usize {
        self.players
    }

    pub fn value(&self, coalition: &[MuseumId]) -> &Rational {
        &self.values[mask_of(coalition)]
    }

    pub fn value_of_mask(&self, mask: usize) -> &Rational {
        &self.values[mask]
    }

    pub fn grand_value(&self) -> &Rational {
        &self.values[(1 << self.players) - 1]
    }

    /// `(coalition, value)` pairs in mask order.
    pub fn table(&self) -> impl Iterator<Item = (Vec<MuseumId>, &Rational)> {
        self.values.iter().enumerate().map(|(mask, v)| (members(mask), v))
    }
}

#[derive(Serialize)]
struct Entry<'a> {
    coalition: Vec<MuseumId>,
    #[serde(serialize_with = "crate::rational::serde_fraction::serialize")]
    value: &'a Rational,
}

impl Serialize for CharacteristicFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.table().map(|(coalition, value)| Entry { coalition, value }))
    }
}

pub fn build_game(problem: &Problem, bound: usize) -> Result<CharacteristicFunction, GameError> {
    let m = problem.museum_count();
    check_bound(m, bound)?;
    let mut values = vec![Rational::zero(); 1 << m];
    for sigma in problem.pass_ids() {
        let price = problem.price(sigma);
        for visits in problem.visit_sets(sigma) {
            values[mask_of(visits)] += price;
        }
    }
    // sum over submasks
    for bit in 0..m {
        for mask in 0..values.len() {
            if mask >> bit & 1 == 1 {
                let lower = values[mask ^ 1 << bit].clone();
                values[mask] += lower;
            }
        }
    }
    Ok(CharacteristicFunction { players: m, values })
}

fn factorials(n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for k in 1..=n {
        let next = &out[k - 1] * BigInt::from(k);
        out.push(next);
    }
    out
}

/// `|S|! (n - |S| - 1)! / n!` for every coalition size `|S| < n`.
fn weights(n: usize) -> Vec<Rational> {
    let f = factorials(n);
    (0..n).map(|k| Rational::new(&f[k] * &f[n - k - 1], f[n].clone())).collect()
}

pub fn shapley(v: &CharacteristicFunction) -> Result<Vec<Rational>, GameError> {
    let all: Vec<MuseumId> = (1..=v.players).map(MuseumId).collect();
    owen(v, std::slice::from_ref(&all))
}

/// Owen value for the coalition structure `partition`.
pub fn owen(v: &CharacteristicFunction, partition: &[Vec<MuseumId>]) -> Result<Vec<Rational>, GameError> {
    let n = v.players;
    let mut seen = 0usize;
    for block in partition {
        for m in block {
            if m.0 == 0 || m.0 > n || seen >> (m.0 - 1) & 1 == 1 {
                return Err(GameError::BadPartition { players: n });
            }
            seen |= 1 << (m.0 - 1);
        }
    }
    if seen != (1 << n) - 1 || partition.iter().any(Vec::is_empty) {
        return Err(GameError::BadPartition { players: n });
    }
    let unions: Vec<usize> = partition.iter().map(|b| mask_of(b)).collect();
    let outer = weights(unions.len());
    let mut out = vec![Rational::zero(); n];
    for (k, block) in partition.iter().enumerate() {
        let others: Vec<usize> = (0..unions.len()).filter(|&l| l != k).collect();
        let inner = weights(block.len());
        for &player in block {
            let rest: Vec<MuseumId> = block.iter().copied().filter(|&p| p != player).collect();
            let bit = 1 << (player.0 - 1);
            let mut value = Rational::zero();
            for r in 0..1usize << others.len() {
                let chosen = r.count_ones() as usize;
                let q = others.iter().enumerate().filter(|(b, _)| r >> b & 1 == 1).fold(0, |acc, (_, &l)| acc | unions[l]);
                let mut within = Rational::zero();
                for t in 0..1usize << rest.len() {
                    let size = t.count_ones() as usize;
                    let tm = rest.iter().enumerate().filter(|(b, _)| t >> b & 1 == 1).fold(0, |acc, (_, p)| acc | 1 << (p.0 - 1));
                    let coalition = q | tm;
                    within += &inner[size] * (&v.values[coalition | bit] - &v.values[coalition]);
                }
                value += &outer[chosen] * within;
            }
            out[player.0 - 1] = value;
        }
    }
    debug_assert_eq!(sum(&out), *v.grand_value());
    Ok(out)
}

//! Seeded random problems.
//!
//! Every instance is drawn from a ChaCha8 stream seeded with the configured
//! 64-bit seed, so the same configuration yields the same problem on every
//! platform. Batches derive one seed per instance index with SplitMix64,
//! which keeps instance `n` independent of how many instances come before it
//! and lets batches be generated in parallel.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::problem::{ConsortiumId, ConsumptionMatrix, HolderId, MuseumId, Pass, PassId, Problem, ProblemData};
use crate::rational::{frac, Rational};

/// Inclusive range, written `[min, max]` in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Span {
    pub min: usize,
    pub max: usize,
}

impl Span {
    pub const fn new(min: usize, max: usize) -> Self {
        Span { min, max }
    }

    fn draw(self, rng: &mut impl Rng) -> usize {
        rng.random_range(self.min..=self.max)
    }
}

impl From<[usize; 2]> for Span {
    fn from([min, max]: [usize; 2]) -> Self {
        Span { min, max }
    }
}

impl From<Span> for [usize; 2] {
    fn from(s: Span) -> Self {
        [s.min, s.max]
    }
}

/// Which kinds of pass may be sold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassMix {
    pub individual: bool,
    pub general: bool,
    pub consortium: bool,
}

impl PassMix {
    pub const ALL: PassMix = PassMix { individual: true, general: true, consortium: true };
    pub const GENERAL_ONLY: PassMix = PassMix { individual: false, general: true, consortium: false };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub museums: Span,
    /// Clamped to the drawn museum count.
    pub consortia: Span,
    pub holders_per_pass: Span,
    /// Cap on the total number of holders across all passes.
    pub max_holders: usize,
    pub price_numerator_max: u32,
    pub price_denominator_max: u32,
    /// Probability that a holder visits each museum their pass covers.
    pub density: f64,
    pub sales: PassMix,
    /// Force every consortium to be a single museum.
    pub singleton_partition: bool,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            museums: Span::new(1, 6),
            consortia: Span::new(1, 3),
            holders_per_pass: Span::new(0, 3),
            max_holders: 12,
            price_numerator_max: 12,
            price_denominator_max: 4,
            density: 0.5,
            sales: PassMix::ALL,
            singleton_partition: false,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{0} range is empty or starts at zero")]
    BadRange(&'static str),
    #[error("visit density must lie in (0, 1], got {0}")]
    Density(f64),
    #[error("price bounds must be at least 1")]
    PriceBounds,
}

impl GenConfig {
    pub fn check(&self) -> Result<(), ConfigError> {
        if self.museums.min == 0 || self.museums.min > self.museums.max {
            return Err(ConfigError::BadRange("museum"));
        }
        if self.consortia.min == 0 || self.consortia.min > self.consortia.max {
            return Err(ConfigError::BadRange("consortium"));
        }
        if self.holders_per_pass.min > self.holders_per_pass.max {
            return Err(ConfigError::BadRange("holder"));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(ConfigError::Density(self.density));
        }
        if self.price_numerator_max == 0 || self.price_denominator_max == 0 {
            return Err(ConfigError::PriceBounds);
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GenConfig { seed, ..self.clone() }
    }
}

/// SplitMix64 finaliser applied to `seed + index * golden gamma`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn random_price(rng: &mut impl Rng, numerator_max: u32, denominator_max: u32) -> Rational {
    let n = rng.random_range(1..=numerator_max as i64);
    let d = rng.random_range(1..=denominator_max as i64);
    frac(n, d)
}

/// Draws one problem. Panics if the configuration fails [`GenConfig::check`].
pub fn generate(config: &GenConfig) -> Problem {
    if let Err(e) = config.check() {
        panic!("invalid generator configuration: {e}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let m = config.museums.draw(&mut rng);
    let s = if config.singleton_partition {
        m
    } else {
        let hi = config.consortia.max.min(m);
        rng.random_range(config.consortia.min.min(hi)..=hi)
    };
    let consortia = random_partition(&mut rng, m, s);
    let price = |rng: &mut ChaCha8Rng| random_price(rng, config.price_numerator_max, config.price_denominator_max);

    let mut data = ProblemData { museums: m, consortia: consortia.clone(), passes: BTreeMap::new() };
    let mut next_holder = 1u64;
    let mut budget = config.max_holders;
    let mut sell = |rng: &mut ChaCha8Rng, enabled: bool, rows: &[MuseumId]| -> (Vec<HolderId>, ConsumptionMatrix) {
        let count = if enabled { config.holders_per_pass.draw(rng).min(budget) } else { 0 };
        budget -= count;
        let mut columns = Vec::with_capacity(count);
        for _ in 0..count {
            let mut col: Vec<MuseumId> = rows.iter().copied().filter(|_| rng.random_bool(config.density)).collect();
            if col.is_empty() {
                col.push(rows[rng.random_range(0..rows.len())]);
                col.sort();
            }
            columns.push(col);
        }
        let holders = (0..count)
            .map(|_| {
                next_holder += 1;
                HolderId::Int(next_holder - 1)
            })
            .collect();
        (holders, ConsumptionMatrix::from_columns(rows.to_vec(), &columns))
    };

    let consortium_prices: Vec<Rational> = (0..s).map(|_| price(&mut rng)).collect();
    for i in (1..=m).rev() {
        let museum = MuseumId(i);
        let k = consortia.iter().position(|b| b.contains(&museum)).expect("partition covers");
        let pass = if consortia[k].len() == 1 {
            Pass::unsold(consortium_prices[k].clone(), vec![museum])
        } else {
            let p = price(&mut rng);
            let (holders, visits) = sell(&mut rng, config.sales.individual, &[museum]);
            Pass { price: p, holders, visits }
        };
        data.passes.insert(PassId::Individual(museum), pass);
    }
    let general_price = price(&mut rng);
    let rows: Vec<MuseumId> = (1..=m).map(MuseumId).collect();
    let (holders, visits) = sell(&mut rng, config.sales.general, &rows);
    data.passes.insert(PassId::General, Pass { price: general_price, holders, visits });
    for (k, block) in consortia.iter().enumerate() {
        let (holders, visits) = sell(&mut rng, config.sales.consortium, block);
        data.passes.insert(
            PassId::Consortium(ConsortiumId(k + 1)),
            Pass { price: consortium_prices[k].clone(), holders, visits },
        );
    }
    Problem::new(data).expect("generator output is valid by construction")
}

fn random_partition(rng: &mut impl Rng, m: usize, s: usize) -> Vec<Vec<MuseumId>> {
    let mut museums: Vec<MuseumId> = (1..=m).map(MuseumId).collect();
    museums.shuffle(rng);
    let mut cuts: Vec<usize> = (1..m).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(s - 1).collect();
    cuts.sort();
    let mut blocks = Vec::with_capacity(s);
    let mut start = 0;
    for end in cuts.into_iter().chain(std::iter::once(m)) {
        let mut block = museums[start..end].to_vec();
        block.sort();
        blocks.push(block);
        start = end;
    }
    blocks.sort();
    blocks
}

/// Instance `index` of the stream defined by `config.seed`.
pub fn generate_nth(config: &GenConfig, index: u64) -> Problem {
    generate(&config.with_seed(derive_seed(config.seed, index)))
}

/// `count` instances, generated in parallel and returned in index order.
pub fn generate_batch(config: &GenConfig, count: usize) -> Vec<Problem> {
    (0..count as u64).into_par_iter().map(|n| generate_nth(config, n)).collect()
}

//! The museum pass problem: museums, the consortium partition, pass holders,
//! pass prices and consumption matrices, plus the invariants that make an
//! instance well formed.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MuseumId(pub usize);

impl MuseumId {
    pub(crate) fn index(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for MuseumId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// 1-based index of a block of the partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConsortiumId(pub usize);

impl ConsortiumId {
    pub(crate) fn index(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for ConsortiumId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.0)
    }
}

/// Which pass a holder bought. Encoded on the wire as a signed integer:
/// `-i` for the individual pass of museum `i`, `0` for the general pass and
/// `t` for the pass of consortium `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PassId {
    Individual(MuseumId),
    General,
    Consortium(ConsortiumId),
}

impl PassId {
    pub fn sigma(self) -> i64 {
        match self {
            PassId::Individual(m) => -(m.0 as i64),
            PassId::General => 0,
            PassId::Consortium(k) => k.0 as i64,
        }
    }

    pub fn from_sigma(sigma: i64) -> Self {
        match sigma {
            0 => PassId::General,
            s if s < 0 => PassId::Individual(MuseumId(s.unsigned_abs() as usize)),
            s => PassId::Consortium(ConsortiumId(s as usize)),
        }
    }
}

impl PartialOrd for PassId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PassId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sigma().cmp(&other.sigma())
    }
}

impl fmt::Display for PassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PassId::Individual(m) => write!(f, "individual pass of museum {m} (sigma -{m})"),
            PassId::General => write!(f, "general pass (sigma 0)"),
            PassId::Consortium(k) => write!(f, "consortium pass {k} (sigma {})", k.0),
        }
    }
}

impl Serialize for PassId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.sigma())
    }
}

impl<'de> Deserialize<'de> for PassId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        i64::deserialize(d).map(PassId::from_sigma)
    }
}

/// Opaque pass-holder identifier; JSON integers and strings are both accepted
/// and written back in the form they were read.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HolderId {
    Int(u64),
    Str(String),
}

impl fmt::Display for HolderId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HolderId::Int(v) => write!(f, "{v}"),
            HolderId::Str(v) => f.write_str(v),
        }
    }
}

impl From<u64> for HolderId {
    fn from(v: u64) -> Self {
        HolderId::Int(v)
    }
}

impl From<&str> for HolderId {
    fn from(v: &str) -> Self {
        HolderId::Str(v.to_string())
    }
}

/// Binary museum-by-holder matrix. `cells[r][c]` is 1 when the museum labelled
/// `rows[r]` was visited by the `c`-th holder of the pass.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConsumptionMatrix {
    pub rows: Vec<MuseumId>,
    #[serde(rename = "matrix")]
    pub cells: Vec<Vec<u8>>,
}

impl ConsumptionMatrix {
    /// Zero-column matrix over the given rows.
    pub fn empty(rows: Vec<MuseumId>) -> Self {
        let cells = vec![Vec::new(); rows.len()];
        ConsumptionMatrix { rows, cells }
    }

    pub fn from_columns(rows: Vec<MuseumId>, columns: &[Vec<MuseumId>]) -> Self {
        let cells = rows
            .iter()
            .map(|r| columns.iter().map(|col| u8::from(col.contains(r))).collect())
            .collect();
        ConsumptionMatrix { rows, cells }
    }

    pub fn column_count(&self) -> usize {
        self.cells.first().map_or(0, Vec::len)
    }

    /// Museums with a 1 in column `c`, in row order.
    pub fn column(&self, c: usize) -> Vec<MuseumId> {
        self.rows
            .iter()
            .zip(&self.cells)
            .filter(|(_, row)| row.get(c).copied() == Some(1))
            .map(|(m, _)| *m)
            .collect()
    }

    pub fn columns(&self) -> Vec<Vec<MuseumId>> {
        (0..self.column_count()).map(|c| self.column(c)).collect()
    }

    pub fn cell(&self, museum: MuseumId, c: usize) -> bool {
        self.rows
            .iter()
            .position(|&m| m == museum)
            .is_some_and(|r| self.cells[r].get(c).copied() == Some(1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pass {
    #[serde(with = "crate::rational::serde_string")]
    pub price: Rational,
    pub holders: Vec<HolderId>,
    pub visits: ConsumptionMatrix,
}

impl Pass {
    pub fn unsold(price: Rational, rows: Vec<MuseumId>) -> Self {
        Pass { price, holders: Vec::new(), visits: ConsumptionMatrix::empty(rows) }
    }
}

/// Unvalidated problem description. Anything can be put in here; use
/// [`validate`] or [`Problem::new`] to check it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemData {
    pub museums: usize,
    pub consortia: Vec<Vec<MuseumId>>,
    pub passes: BTreeMap<PassId, Pass>,
}

impl ProblemData {
    /// Every pass identifier the problem must price, in sigma order.
    pub fn expected_passes(&self) -> Vec<PassId> {
        let individual = (1..=self.museums).rev().map(|i| PassId::Individual(MuseumId(i)));
        let consortia = (1..=self.consortia.len()).map(|k| PassId::Consortium(ConsortiumId(k)));
        individual.chain(std::iter::once(PassId::General)).chain(consortia).collect()
    }

    /// Row labels the consumption matrix of `pass` must carry.
    pub fn expected_rows(&self, pass: PassId) -> Option<Vec<MuseumId>> {
        match pass {
            PassId::Individual(m) if (1..=self.museums).contains(&m.0) => Some(vec![m]),
            PassId::General if self.museums > 0 => Some((1..=self.museums).map(MuseumId).collect()),
            PassId::Consortium(k) if (1..=self.consortia.len()).contains(&k.0) => {
                Some(self.consortia[k.index()].clone())
            }
            _ => None,
        }
    }

    /// Rewrites singleton consortia to follow the convention: the individual
    /// pass of the lone museum carries the consortium price, and any holders of
    /// that individual pass are moved to the consortium pass.
    pub fn normalize_singleton_convention(&mut self) {
        for (k, block) in self.consortia.iter().enumerate() {
            let [museum] = block.as_slice() else { continue };
            let cons = PassId::Consortium(ConsortiumId(k + 1));
            let indiv = PassId::Individual(*museum);
            let Some(cons_price) = self.passes.get(&cons).map(|p| p.price.clone()) else {
                continue;
            };
            let moved = match self.passes.get_mut(&indiv) {
                Some(pass) => {
                    pass.price = cons_price.clone();
                    let holders = std::mem::take(&mut pass.holders);
                    pass.visits = ConsumptionMatrix::empty(vec![*museum]);
                    holders
                }
                None => {
                    self.passes.insert(indiv, Pass::unsold(cons_price, vec![*museum]));
                    Vec::new()
                }
            };
            if moved.is_empty() {
                continue;
            }
            let pass = self.passes.get_mut(&cons).expect("checked above");
            let mut columns = pass.visits.columns();
            columns.extend(moved.iter().map(|_| vec![*museum]));
            pass.holders.extend(moved);
            pass.visits = ConsumptionMatrix::from_columns(pass.visits.rows.clone(), &columns);
        }
    }
}

/// A single broken invariant, naming the offending element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoMuseums,
    NoConsortia,
    EmptyConsortium { consortium: usize },
    UnknownMuseumInPartition { consortium: usize, museum: usize },
    MuseumInSeveralConsortia { museum: usize },
    MuseumNotCovered { museum: usize },
    UnknownPass { sigma: i64 },
    MissingPass { sigma: i64 },
    NonPositivePrice { sigma: i64, price: String },
    RowLabels { sigma: i64, expected: Vec<usize>, found: Vec<usize> },
    RaggedMatrix { sigma: i64, row: usize },
    ColumnCount { sigma: i64, holders: usize, columns: usize },
    NonBinaryCell { sigma: i64, museum: usize, column: usize, value: u8 },
    EmptyVisitColumn { sigma: i64, holder: String },
    IndividualVisitMissing { sigma: i64, holder: String },
    DuplicateHolder { holder: String, first_sigma: i64, second_sigma: i64 },
    SingletonIndividualSales { museum: usize, consortium: usize },
    SingletonPriceConvention { museum: usize, consortium: usize },
}

impl Violation {
    /// Short name of the invariant that failed.
    pub fn invariant(&self) -> &'static str {
        match self {
            Violation::NoMuseums => "at least one museum",
            Violation::NoConsortia => "at least one consortium",
            Violation::EmptyConsortium { .. } => "consortia are nonempty",
            Violation::UnknownMuseumInPartition { .. } => "partition references known museums",
            Violation::MuseumInSeveralConsortia { .. } => "consortia are pairwise disjoint",
            Violation::MuseumNotCovered { .. } => "consortia cover every museum",
            Violation::UnknownPass { .. } => "pass references a known museum or consortium",
            Violation::MissingPass { .. } => "every pass has a price",
            Violation::NonPositivePrice { .. } => "prices are strictly positive",
            Violation::RowLabels { .. } => "matrix rows match the pass coverage",
            Violation::RaggedMatrix { .. } => "matrix rows have equal length",
            Violation::ColumnCount { .. } => "one matrix column per holder",
            Violation::NonBinaryCell { .. } => "matrix cells are binary",
            Violation::EmptyVisitColumn { .. } => "empty visit column",
            Violation::IndividualVisitMissing { .. } => "individual-pass holders visit their museum",
            Violation::DuplicateHolder { .. } => "holder sets must be disjoint",
            Violation::SingletonIndividualSales { .. } => "singleton individual sales",
            Violation::SingletonPriceConvention { .. } => "singleton price convention",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.invariant();
        match self {
            Violation::NoMuseums | Violation::NoConsortia => f.write_str(name),
            Violation::EmptyConsortium { consortium } => write!(f, "{name}: consortium {consortium} is empty"),
            Violation::UnknownMuseumInPartition { consortium, museum } => {
                write!(f, "{name}: consortium {consortium} lists unknown museum {museum}")
            }
            Violation::MuseumInSeveralConsortia { museum } => {
                write!(f, "{name}: museum {museum} appears more than once")
            }
            Violation::MuseumNotCovered { museum } => write!(f, "{name}: museum {museum} is in no consortium"),
            Violation::UnknownPass { sigma } => write!(f, "{name}: sigma {sigma}"),
            Violation::MissingPass { sigma } => write!(f, "{name}: no entry for sigma {sigma}"),
            Violation::NonPositivePrice { sigma, price } => write!(f, "{name}: sigma {sigma} has price {price}"),
            Violation::RowLabels { sigma, expected, found } => {
                write!(f, "{name}: sigma {sigma} expects rows {expected:?}, found {found:?}")
            }
            Violation::RaggedMatrix { sigma, row } => write!(f, "{name}: sigma {sigma}, row {row}"),
            Violation::ColumnCount { sigma, holders, columns } => {
                write!(f, "{name}: sigma {sigma} has {holders} holders but {columns} columns")
            }
            Violation::NonBinaryCell { sigma, museum, column, value } => {
                write!(f, "{name}: sigma {sigma}, museum {museum}, column {column} holds {value}")
            }
            Violation::EmptyVisitColumn { sigma, holder } => {
                write!(f, "{name}: holder {holder} of sigma {sigma} visits no museum")
            }
            Violation::IndividualVisitMissing { sigma, holder } => {
                write!(f, "{name}: holder {holder} of sigma {sigma}")
            }
            Violation::DuplicateHolder { holder, first_sigma, second_sigma } => {
                write!(f, "{name}: holder {holder} appears under sigma {first_sigma} and sigma {second_sigma}")
            }
            Violation::SingletonIndividualSales { museum, consortium } => write!(
                f,
                "{name}: museum {museum} forms consortium {consortium} alone, so its individual pass must have no holders"
            ),
            Violation::SingletonPriceConvention { museum, consortium } => write!(
                f,
                "{name}: museum {museum} forms consortium {consortium} alone, so its individual price must equal the consortium price"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, invariant: &str) -> bool {
        self.violations.iter().any(|v| v.invariant() == invariant)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (n, v) in self.violations.iter().enumerate() {
            if n > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

/// Checks every structural invariant of a candidate problem. Violations are
/// collected rather than short-circuited.
pub fn validate(data: &ProblemData) -> ValidationReport {
    let mut out = Vec::new();
    if data.museums == 0 {
        out.push(Violation::NoMuseums);
    }
    if data.consortia.is_empty() {
        out.push(Violation::NoConsortia);
    }

    let mut seen = vec![0usize; data.museums];
    let mut partition_ok = !data.consortia.is_empty();
    for (k, block) in data.consortia.iter().enumerate() {
        if block.is_empty() {
            out.push(Violation::EmptyConsortium { consortium: k + 1 });
            partition_ok = false;
        }
        for m in block {
            if m.0 == 0 || m.0 > data.museums {
                out.push(Violation::UnknownMuseumInPartition { consortium: k + 1, museum: m.0 });
                partition_ok = false;
            } else {
                seen[m.index()] += 1;
            }
        }
    }
    for (i, &count) in seen.iter().enumerate() {
        if count > 1 {
            out.push(Violation::MuseumInSeveralConsortia { museum: i + 1 });
            partition_ok = false;
        } else if count == 0 {
            out.push(Violation::MuseumNotCovered { museum: i + 1 });
            partition_ok = false;
        }
    }

    for &sigma in data.passes.keys() {
        if data.expected_rows(sigma).is_none() {
            out.push(Violation::UnknownPass { sigma: sigma.sigma() });
        }
    }

    let mut owner: HashMap<&HolderId, i64> = HashMap::new();
    for sigma in data.expected_passes() {
        let Some(pass) = data.passes.get(&sigma) else {
            out.push(Violation::MissingPass { sigma: sigma.sigma() });
            continue;
        };
        let s = sigma.sigma();
        if pass.price <= Rational::zero() {
            out.push(Violation::NonPositivePrice { sigma: s, price: format_rational(&pass.price) });
        }
        for holder in &pass.holders {
            if let Some(first) = owner.insert(holder, s) {
                out.push(Violation::DuplicateHolder {
                    holder: holder.to_string(),
                    first_sigma: first,
                    second_sigma: s,
                });
            }
        }
        if matches!(sigma, PassId::Consortium(_)) && !partition_ok {
            continue;
        }
        let expected = data.expected_rows(sigma).expect("expected pass");
        check_matrix(sigma, &expected, pass, &mut out);
    }

    if partition_ok {
        for (k, block) in data.consortia.iter().enumerate() {
            let [museum] = block.as_slice() else { continue };
            let indiv = data.passes.get(&PassId::Individual(*museum));
            let cons = data.passes.get(&PassId::Consortium(ConsortiumId(k + 1)));
            if let Some(indiv) = indiv {
                if !indiv.holders.is_empty() {
                    out.push(Violation::SingletonIndividualSales { museum: museum.0, consortium: k + 1 });
                }
                if let Some(cons) = cons {
                    if indiv.price != cons.price {
                        out.push(Violation::SingletonPriceConvention { museum: museum.0, consortium: k + 1 });
                    }
                }
            }
        }
    }

    ValidationReport { violations: out }
}

fn check_matrix(sigma: PassId, expected: &[MuseumId], pass: &Pass, out: &mut Vec<Violation>) {
    let s = sigma.sigma();
    let m = &pass.visits;
    let mut found: Vec<usize> = m.rows.iter().map(|r| r.0).collect();
    let mut want: Vec<usize> = expected.iter().map(|r| r.0).collect();
    found.sort_unstable();
    want.sort_unstable();
    if found != want || m.cells.len() != m.rows.len() {
        out.push(Violation::RowLabels {
            sigma: s,
            expected: want,
            found: m.rows.iter().map(|r| r.0).collect(),
        });
        return;
    }
    let width = pass.holders.len();
    let mut shape_ok = true;
    for (r, row) in m.cells.iter().enumerate() {
        if row.len() != width {
            shape_ok = false;
            if m.cells.iter().any(|other| other.len() != row.len()) {
                out.push(Violation::RaggedMatrix { sigma: s, row: r });
            } else {
                out.push(Violation::ColumnCount { sigma: s, holders: width, columns: row.len() });
            }
            break;
        }
    }
    if !shape_ok {
        return;
    }
    for (r, row) in m.cells.iter().enumerate() {
        for (c, &value) in row.iter().enumerate() {
            if value > 1 {
                out.push(Violation::NonBinaryCell { sigma: s, museum: m.rows[r].0, column: c, value });
            }
        }
    }
    for (c, holder) in pass.holders.iter().enumerate() {
        let ones = m.cells.iter().filter(|row| row[c] == 1).count();
        if ones == 0 {
            out.push(Violation::EmptyVisitColumn { sigma: s, holder: holder.to_string() });
        } else if matches!(sigma, PassId::Individual(_)) && ones != m.rows.len() {
            out.push(Violation::IndividualVisitMissing { sigma: s, holder: holder.to_string() });
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("invalid problem: {0}")]
    Invalid(ValidationReport),
    #[error("unknown museum {0}")]
    UnknownMuseum(MuseumId),
    #[error("unknown consortium {0}")]
    UnknownConsortium(ConsortiumId),
    #[error("unknown pass holder {0}")]
    UnknownHolder(HolderId),
    #[error("holder {0} did not buy the general pass")]
    NotGeneralHolder(HolderId),
}

/// Coarse classification of which passes were sold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Subdomain {
    /// Only general passes (or nothing at all) were sold.
    GeneralOnly,
    /// Only the pass of this consortium was sold.
    ConsortiumOnly(ConsortiumId),
    /// Only the individual pass of this museum was sold.
    IndividualOnly(MuseumId),
    Mixed,
}

/// A validated, immutable problem with its derived indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    data: ProblemData,
    consortium_of: Vec<ConsortiumId>,
    visits: BTreeMap<PassId, Vec<Vec<MuseumId>>>,
    holder_index: HashMap<HolderId, (PassId, usize)>,
}

impl Problem {
    pub fn new(data: ProblemData) -> Result<Self, ValidationReport> {
        let report = validate(&data);
        if !report.is_ok() {
            return Err(report);
        }
        let mut consortium_of = vec![ConsortiumId(0); data.museums];
        for (k, block) in data.consortia.iter().enumerate() {
            for m in block {
                consortium_of[m.index()] = ConsortiumId(k + 1);
            }
        }
        let mut visits = BTreeMap::new();
        let mut holder_index = HashMap::new();
        for (&sigma, pass) in &data.passes {
            let mut cols = pass.visits.columns();
            for col in &mut cols {
                col.sort_unstable();
            }
            for (c, h) in pass.holders.iter().enumerate() {
                holder_index.insert(h.clone(), (sigma, c));
            }
            visits.insert(sigma, cols);
        }
        Ok(Problem { data, consortium_of, visits, holder_index })
    }

    pub fn data(&self) -> &ProblemData {
        &self.data
    }

    pub fn into_data(self) -> ProblemData {
        self.data
    }

    pub fn museum_count(&self) -> usize {
        self.data.museums
    }

    pub fn museums(&self) -> impl Iterator<Item = MuseumId> {
        (1..=self.data.museums).map(MuseumId)
    }

    pub fn consortium_count(&self) -> usize {
        self.data.consortia.len()
    }

    pub fn consortium_ids(&self) -> impl Iterator<Item = ConsortiumId> {
        (1..=self.data.consortia.len()).map(ConsortiumId)
    }

    pub fn consortium(&self, k: ConsortiumId) -> &[MuseumId] {
        &self.data.consortia[k.index()]
    }

    /// `P^(i)`: the consortium museum `i` belongs to.
    pub fn consortium_of(&self, museum: MuseumId) -> ConsortiumId {
        self.consortium_of[museum.index()]
    }

    pub fn pass_ids(&self) -> impl Iterator<Item = PassId> + '_ {
        self.data.passes.keys().copied()
    }

    pub fn pass(&self, sigma: PassId) -> &Pass {
        &self.data.passes[&sigma]
    }

    pub fn price(&self, sigma: PassId) -> &Rational {
        &self.pass(sigma).price
    }

    pub fn individual_price(&self, museum: MuseumId) -> &Rational {
        self.price(PassId::Individual(museum))
    }

    pub fn consortium_price(&self, k: ConsortiumId) -> &Rational {
        self.price(PassId::Consortium(k))
    }

    pub fn holders(&self, sigma: PassId) -> &[HolderId] {
        &self.pass(sigma).holders
    }

    /// Visited museums of each holder of `sigma`, sorted, in holder order.
    pub fn visit_sets(&self, sigma: PassId) -> &[Vec<MuseumId>] {
        &self.visits[&sigma]
    }

    pub fn holder_count(&self) -> usize {
        self.holder_index.len()
    }

    /// `E`: total revenue from every pass sold.
    pub fn revenue(&self) -> Rational {
        self.data
            .passes
            .values()
            .map(|p| &p.price * Rational::from_integer(p.holders.len().into()))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// `N^sigma_i`: holders of `sigma` who visited `museum`.
    pub fn visitors(&self, museum: MuseumId, sigma: PassId) -> Result<Vec<&HolderId>, ProblemError> {
        self.check_museum(museum)?;
        Ok(self
            .holders(sigma)
            .iter()
            .zip(self.visit_sets(sigma))
            .filter(|(_, v)| v.contains(&museum))
            .map(|(h, _)| h)
            .collect())
    }

    /// `M_a`: museums visited by `holder`.
    pub fn visited_museums(&self, holder: &HolderId) -> Result<&[MuseumId], ProblemError> {
        let (sigma, c) = self
            .holder_index
            .get(holder)
            .ok_or_else(|| ProblemError::UnknownHolder(holder.clone()))?;
        Ok(&self.visit_sets(*sigma)[*c])
    }

    pub fn pass_of(&self, holder: &HolderId) -> Result<PassId, ProblemError> {
        self.holder_index
            .get(holder)
            .map(|(s, _)| *s)
            .ok_or_else(|| ProblemError::UnknownHolder(holder.clone()))
    }

    /// `K^0_a`: consortia visited by a general-pass holder.
    pub fn visited_consortia(&self, holder: &HolderId) -> Result<Vec<ConsortiumId>, ProblemError> {
        if self.pass_of(holder)? != PassId::General {
            return Err(ProblemError::NotGeneralHolder(holder.clone()));
        }
        Ok(self.consortia_touched(self.visited_museums(holder)?))
    }

    pub(crate) fn consortia_touched(&self, visits: &[MuseumId]) -> Vec<ConsortiumId> {
        let set: BTreeSet<ConsortiumId> = visits.iter().map(|&m| self.consortium_of(m)).collect();
        set.into_iter().collect()
    }

    /// `NM(D)`: museums no holder visited under any pass that covers them.
    pub fn dummy_set(&self) -> BTreeSet<MuseumId> {
        let mut visited = vec![false; self.museum_count()];
        for cols in self.visits.values() {
            for m in cols.iter().flatten() {
                visited[m.index()] = true;
            }
        }
        self.museums().filter(|m| !visited[m.index()]).collect()
    }

    pub fn subdomain(&self) -> Subdomain {
        let sold: Vec<PassId> = self
            .data
            .passes
            .iter()
            .filter(|(_, p)| !p.holders.is_empty())
            .map(|(s, _)| *s)
            .collect();
        match sold.as_slice() {
            [] | [PassId::General] => Subdomain::GeneralOnly,
            [PassId::Consortium(k)] => Subdomain::ConsortiumOnly(*k),
            [PassId::Individual(m)] => Subdomain::IndividualOnly(*m),
            _ => Subdomain::Mixed,
        }
    }

    pub fn is_general_only(&self) -> bool {
        self.subdomain() == Subdomain::GeneralOnly
    }

    fn check_museum(&self, museum: MuseumId) -> Result<(), ProblemError> {
        if museum.0 == 0 || museum.0 > self.museum_count() {
            Err(ProblemError::UnknownMuseum(museum))
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_consortium(&self, k: ConsortiumId) -> Result<(), ProblemError> {
        if k.0 == 0 || k.0 > self.consortium_count() {
            Err(ProblemError::UnknownConsortium(k))
        } else {
            Ok(())
        }
    }

    pub(crate) fn require_museum(&self, museum: MuseumId) -> Result<(), ProblemError> {
        self.check_museum(museum)
    }
}

impl TryFrom<ProblemData> for Problem {
    type Error = ValidationReport;

    fn try_from(data: ProblemData) -> Result<Self, Self::Error> {
        Problem::new(data)
    }
}

/// Revenue of `pass` alone: `|N^sigma| * pi^sigma`.
pub fn pass_revenue(problem: &Problem, sigma: PassId) -> Rational {
    problem.price(sigma) * Rational::from_integer(problem.holders(sigma).len().into())
}

pub(crate) fn count(n: usize) -> Rational {
    Rational::from_integer(n.into())
}

/// The worked three-museum instance used across docs and tests.
pub fn example_one() -> Problem {
    use crate::rational::int;
    let mut passes = BTreeMap::new();
    let ind = |i: usize| PassId::Individual(MuseumId(i));
    passes.insert(ind(3), Pass::unsold(int(3), vec![MuseumId(3)]));
    passes.insert(
        ind(2),
        Pass {
            price: int(2),
            holders: vec![1.into(), 2.into(), 3.into()],
            visits: ConsumptionMatrix { rows: vec![MuseumId(2)], cells: vec![vec![1, 1, 1]] },
        },
    );
    passes.insert(
        ind(1),
        Pass {
            price: int(1),
            holders: vec![4.into()],
            visits: ConsumptionMatrix { rows: vec![MuseumId(1)], cells: vec![vec![1]] },
        },
    );
    passes.insert(
        PassId::General,
        Pass {
            price: int(4),
            holders: vec![5.into(), 6.into()],
            visits: ConsumptionMatrix {
                rows: vec![MuseumId(1), MuseumId(2), MuseumId(3)],
                cells: vec![vec![1, 0], vec![1, 0], vec![1, 1]],
            },
        },
    );
    passes.insert(
        PassId::Consortium(ConsortiumId(1)),
        Pass {
            price: int(2),
            holders: vec![7.into(), 8.into()],
            visits: ConsumptionMatrix {
                rows: vec![MuseumId(1), MuseumId(2)],
                cells: vec![vec![1, 1], vec![0, 1]],
            },
        },
    );
    passes.insert(
        PassId::Consortium(ConsortiumId(2)),
        Pass {
            price: int(3),
            holders: vec![9.into(), 10.into()],
            visits: ConsumptionMatrix { rows: vec![MuseumId(3)], cells: vec![vec![1, 1]] },
        },
    );
    let data = ProblemData {
        museums: 3,
        consortia: vec![vec![MuseumId(1), MuseumId(2)], vec![MuseumId(3)]],
        passes,
    };
    Problem::new(data).expect("worked example is valid")
}

//! Revenue sharing for museum passes sold by consortia of museums.
//!
//! A [`Problem`] describes which passes were sold at what price and which
//! museums every holder visited. Rules in [`rules`] split the revenue among
//! the museums, [`axioms`] checks rules against the fairness properties, and
//! [`games`] relates the general-pass part to Shapley and Owen values.

pub mod rational;
pub mod problem;
pub mod rules;
pub mod transforms;
pub mod io;
pub mod games;
pub mod randgen;
pub mod axioms;

pub use problem::{
    ConsortiumId, ConsumptionMatrix, HolderId, MuseumId, Pass, PassId, Problem, ProblemData, ProblemError,
    Subdomain, ValidationReport, Violation,
};
pub use rational::{format_rational, parse_rational, Rational};
pub use rules::{allocate, Allocation, RuleError, RuleId};

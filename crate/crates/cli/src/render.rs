//! Plain-text tables. Values are shown as exact fractions followed by a
//! six-significant-digit approximation.

use std::fmt::Write;

use passalloc_core::axioms::{AuditReport, CheckResult, IndependenceReport, Verdict, Witness};
use passalloc_core::games::CharacteristicFunction;
use passalloc_core::rational::{format_fraction, format_with_approx};
use passalloc_core::{Allocation, Problem, Rational, RuleId};

pub fn fraction(value: &Rational) -> String {
    format_fraction(value)
}

pub fn with_approx(value: &Rational) -> String {
    format_with_approx(value)
}

pub fn allocation_table(rule: RuleId, problem: &Problem, allocation: &Allocation) -> String {
    let mut out = String::new();
    writeln!(out, "rule {rule} ({})", rule.name()).unwrap();
    writeln!(out, "{:<8} {:<11} payout", "museum", "consortium").unwrap();
    for (m, v) in allocation.iter() {
        writeln!(out, "{:<8} {:<11} {}", m.to_string(), problem.consortium_of(m).to_string(), with_approx(v)).unwrap();
    }
    writeln!(out, "{:<20} {}", "total", with_approx(&allocation.total())).unwrap();
    out
}

pub fn audit_table(report: &AuditReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "audit of {} on {} instances (seed {})",
        report.rule, report.config.instances, report.config.generator.seed
    )
    .unwrap();
    writeln!(out, "{:<22} {:>8} {:>8} {:>8} {:>8}", "axiom", "checked", "passed", "n/a", "failed").unwrap();
    for (axiom, t) in &report.axioms {
        writeln!(out, "{:<22} {:>8} {:>8} {:>8} {:>8}", axiom.to_string(), t.checked, t.passed, t.not_applicable, t.failed)
            .unwrap();
        for e in &t.errors {
            writeln!(out, "    error: {e}").unwrap();
        }
        for w in &t.failures {
            for m in &w.mismatches {
                writeln!(out, "    {}: {} vs {}", m.subject, with_approx(&m.lhs), with_approx(&m.rhs)).unwrap();
            }
        }
    }
    writeln!(out, "{}", if report.clean() { "result: all checks passed" } else { "result: FAILURES" }).unwrap();
    out
}

pub fn independence_table(report: &IndependenceReport) -> String {
    let mut out = String::new();
    let axioms: Vec<String> = report.axioms.iter().map(|a| a.to_string()).collect();
    writeln!(out, "theorem {}: {} characterised by {}", report.theorem, report.characterised, axioms.join(", ")).unwrap();
    writeln!(out, "{:<6} {:<22} {:>9}  {:<10} discrepancies", "rule", "violates", "searched", "witness").unwrap();
    for e in &report.entries {
        let found = if e.exhausted() { "EXHAUSTED" } else { "found" };
        let disc: Vec<String> = e.discrepancies.iter().map(|a| a.to_string()).collect();
        writeln!(
            out,
            "{:<6} {:<22} {:>9}  {:<10} {}",
            e.rule.to_string(),
            e.violates.to_string(),
            e.searched,
            found,
            if disc.is_empty() { "none".to_string() } else { disc.join(", ") }
        )
        .unwrap();
    }
    out
}

pub fn owen_table(
    problem: &Problem,
    game: &CharacteristicFunction,
    owen: &[Rational],
    ee: &Allocation,
    verdict: &str,
) -> String {
    let mut out = String::new();
    writeln!(out, "characteristic function").unwrap();
    for (coalition, value) in game.table() {
        let names: Vec<String> = coalition.iter().map(|m| m.to_string()).collect();
        writeln!(out, "  {{{}}} {}", names.join(","), with_approx(value)).unwrap();
    }
    writeln!(out, "{:<8} {:<24} ee", "museum", "owen").unwrap();
    for m in problem.museums() {
        writeln!(out, "{:<8} {:<24} {}", m.to_string(), with_approx(&owen[m.0 - 1]), with_approx(ee.get(m))).unwrap();
    }
    writeln!(out, "verdict: {verdict}").unwrap();
    out
}

pub fn replay_table(witness: &Witness, result: &CheckResult, allocation: &Allocation) -> String {
    let mut out = String::new();
    writeln!(out, "rule {} against {}", witness.rule, witness.axiom).unwrap();
    let payouts: Vec<String> = allocation.payouts().iter().map(with_approx).collect();
    writeln!(out, "payouts on the witness problem: {}", payouts.join(", ")).unwrap();
    match result.verdict {
        Verdict::Failed => {
            writeln!(out, "verdict: FAILED (violation reproduced)").unwrap();
            for m in result.witness.iter().flat_map(|w| &w.mismatches) {
                writeln!(out, "  {}: {} vs {}", m.subject, with_approx(&m.lhs), with_approx(&m.rhs)).unwrap();
            }
        }
        Verdict::Passed => writeln!(out, "verdict: passed").unwrap(),
        Verdict::NotApplicable => {
            writeln!(out, "verdict: not applicable ({})", result.reason.as_deref().unwrap_or("")).unwrap()
        }
    }
    out
}

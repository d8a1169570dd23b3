//! Acceptance gate: one test per criterion. Each writes a single
//! `criterion N ...: PASS|FAIL` line to stderr, uncaptured so it shows in a
//! plain `cargo test` run; per-check details go to the captured stdout.

use std::io::Write;

use lastiter::verify::{
    doubling_checks, estimator_unbiasedness, explore_exploit_checks, kl_contraction_checks, last_iterate_checks,
    lower_bound_checks, property_checks, scheduler_checks, second_order_bound, Check, VerifyOptions,
};

fn gate(number: u32, title: &str, checks: Vec<Check>) {
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed()).collect();
    let status = if failed.is_empty() { "PASS" } else { "FAIL" };
    let line = format!(
        "\ncriterion {number} [PRIMARY] {title}: {status} ({}/{} checks)\n",
        checks.len() - failed.len(),
        checks.len()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    for c in &checks {
        println!("    {c}");
    }
    assert!(failed.is_empty(), "criterion {number} failed: {failed:?}");
}

fn opts() -> VerifyOptions {
    VerifyOptions::default()
}

#[test]
fn criterion_1_estimator_unbiasedness() {
    gate(1, "exact-oracle estimator unbiasedness", estimator_unbiasedness(opts().master_seed));
}

#[test]
fn criterion_2_second_order_bound() {
    gate(2, "exact-oracle second-order bound", second_order_bound(opts().master_seed));
}

#[test]
fn criterion_3_scheduler() {
    gate(3, "shared-seed scheduler inequality and grid mean", scheduler_checks());
}

#[test]
fn criterion_4_kl_contraction() {
    gate(4, "regularized EXP3 KL contraction", kl_contraction_checks(&opts()).expect("suite runs"));
}

#[test]
fn criterion_5_regexp3_last_iterate() {
    gate(5, "regularized EXP3 last-iterate bound and slope", last_iterate_checks(&opts()).expect("suite runs"));
}

#[test]
fn criterion_6_explore_or_exploit() {
    gate(
        6,
        "explore-or-exploit bound and averaged EXP3-IX slope",
        explore_exploit_checks(&opts()).expect("suite runs"),
    );
}

#[test]
fn criterion_7_doubling() {
    gate(7, "doubling meta-procedure anytime bound", doubling_checks(&opts()).expect("suite runs"));
}

#[test]
fn criterion_8_lower_bound_constructions() {
    gate(8, "hard-instance constructions and KL budget", lower_bound_checks(&opts()).expect("suite runs"));
}

#[test]
fn criterion_9_properties() {
    gate(9, "property suite", property_checks(&opts()).expect("suite runs"));
}

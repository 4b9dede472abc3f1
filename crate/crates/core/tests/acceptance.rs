//! Exit criteria, one test each. Every test prints its PASS/FAIL line and
//! supporting log (visible with `--nocapture`) and fails on FAIL.

use crs_core::verify::run_check;

fn criterion(id: &str) {
    let o = run_check(id).expect("known criterion");
    println!("{o}");
    for line in &o.log {
        println!("    {line}");
    }
    assert!(o.passed, "{o}");
}

#[test]
fn criterion_01_oracle_equivalence() {
    criterion("1");
}

#[test]
fn criterion_02_exact_identities() {
    criterion("2");
}

#[test]
fn criterion_03_divisor_ratio_expansion() {
    criterion("3");
}

#[test]
fn criterion_04_jordan_ratio_expansion() {
    criterion("4");
}

#[test]
fn criterion_05_coefficient_extraction() {
    criterion("5");
}

#[test]
fn criterion_06_shifted_divisor_ratio_correlation() {
    criterion("6");
}

#[test]
fn criterion_07_diagonal_divisor_ratio_correlation() {
    criterion("7");
}

#[test]
fn criterion_08_jordan_ratio_correlation() {
    criterion("8");
}

#[test]
fn criterion_09_shifted_function_coefficients() {
    criterion("9");
}

#[test]
fn criterion_10_lemma_grids() {
    criterion("10");
}

//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail summary line. Run with `--nocapture` to see the lines on
//! success as well.

use fracheat::selftest::{self, CriterionResult};

fn gate(r: CriterionResult) {
    println!("{}", r.summary_line());
    assert!(r.pass, "{}", r.summary_line());
}

#[test]
fn criterion_1_symbol_suite() {
    gate(selftest::criterion_symbol_suite());
}

#[test]
fn criterion_2_kernel_inequality() {
    gate(selftest::criterion_kernel_inequality(0));
}

#[test]
fn criterion_3_round_trip() {
    gate(selftest::criterion_round_trip());
}

#[test]
fn criterion_4_caloric() {
    gate(selftest::criterion_caloric(0));
}

#[test]
fn criterion_5_theorem_ratio() {
    gate(selftest::criterion_theorem_ratio());
}

#[test]
fn criterion_6_homogeneous() {
    gate(selftest::criterion_homogeneous());
}

#[test]
fn criterion_7_rescale() {
    gate(selftest::criterion_rescale());
}

#[test]
fn criterion_8_marchaud() {
    gate(selftest::criterion_marchaud());
}

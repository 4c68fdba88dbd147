//! The oracle suites at moderate size; the acceptance target runs them at
//! full size.

use lta_core::oracle::suites::{self, SuiteReport};
use lta_core::oracle::EnumBounds;

fn assert_passed(r: SuiteReport) {
    assert!(r.passed(), "{r}: {:?}", r.violations);
    assert!(r.checks > 0, "{r}");
}

#[test]
fn solver() {
    assert_passed(suites::solver_soundness(200, 20));
}

#[test]
fn completion_one_step() {
    assert_passed(suites::completion_soundness(100));
}

#[test]
fn phases_never_shrink_languages() {
    assert_passed(suites::phase_soundness(60));
}

#[test]
fn boolean_operations() {
    assert_passed(suites::boolean_equivalence(40, &EnumBounds::new(4, -10, 10).with_max_terms(20_000)));
}

#[test]
fn reduction_and_emptiness() {
    assert_passed(suites::reduce_and_emptiness(50, &EnumBounds::new(3, -6, 6).with_max_terms(20_000)));
}

#[test]
fn membership() {
    assert_passed(suites::membership_agreement(50, &EnumBounds::new(3, -10, 10)));
}

#[test]
fn widening() {
    assert_passed(suites::widening_termination(100, 3, 10));
}

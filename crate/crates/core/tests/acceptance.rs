//! Acceptance suite: one test per criterion, each printing its pass/fail
//! table. Two clauses fail by design of the underlying mathematics and
//! are isolated in their own tests with the analysis in the message: the
//! alpha = 0 second-order slope (the stated remainder exponent -5 is not
//! attained there; the residual decays like n^-6) and the nonempty
//! branch-point set inside Delta_2 (the first collision sits at
//! |z| ~ 1.73, far outside R_2 = 0.25).

use trispec::verify::{self, CriterionResult};
use trispec::Result;

const SEED: u64 = 0xC0FFEE;

fn run(result: Result<CriterionResult>) {
    let r = result.expect("criterion harness errored");
    let table = verify::render_table(std::slice::from_ref(&r));
    println!("{table}");
    assert!(r.passed, "criterion {} failed:\n{table}", r.id);
}

#[test]
fn criterion_01_exact_fixtures() {
    run(verify::criterion_1());
}

#[test]
fn criterion_02_oracle_equivalence() {
    run(verify::criterion_2());
}

#[test]
fn criterion_03_eigensolver_series_crosscheck() {
    run(verify::criterion_3());
}

#[test]
fn criterion_04_trace_formula_desk_scale() {
    run(verify::criterion_4());
}

#[test]
fn criterion_05_asymptotic_slopes_as_stated() {
    // The Theorem-4 clause passes; the alpha = 0 Theorem-2 clause demands
    // a slope near -5 where the true decay is n^-6. Honest failure.
    run(verify::criterion_5());
}

#[test]
fn criterion_06_pk_recovery() {
    run(verify::criterion_6());
}

#[test]
fn criterion_07_localization_properties() {
    run(verify::criterion_7(SEED));
}

#[test]
fn criterion_08_branch_points_in_delta2_as_stated() {
    // Sigma_2 does not meet Delta_2 for the Mathieu family. Honest failure.
    run(verify::criterion_8_as_stated());
}

#[test]
fn criterion_08_surface_properties() {
    run(verify::criterion_8_properties(SEED));
}

#[test]
fn criterion_09_irreducibility_certificates() {
    run(verify::criterion_9());
}

#[test]
fn criterion_10_coefficient_bounds() {
    run(verify::criterion_10());
}

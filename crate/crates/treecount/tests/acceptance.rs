//! Acceptance gate: one test per verification criterion. Each prints its
//! pass/fail line (visible with `--nocapture` or on failure) and asserts
//! the outcome.

use treecount::verify::{self, CriterionOutcome, DEFAULT_BUDGET};

fn gate(outcome: CriterionOutcome) {
    println!("{}", outcome.line());
    assert!(outcome.passed, "{}", outcome.line());
}

#[test]
fn criterion_01_sphere_law() {
    gate(verify::criterion_sphere_law());
}

#[test]
fn criterion_02_displacement_identity() {
    gate(verify::criterion_displacement_identity());
}

#[test]
fn criterion_03_oracle_equivalence() {
    gate(verify::criterion_oracle_equivalence());
}

#[test]
fn criterion_04_spectral_cross_validation() {
    gate(verify::criterion_spectral_cross_validation(DEFAULT_BUDGET));
}

#[test]
fn criterion_05_spherical_functions() {
    gate(verify::criterion_spherical_functions());
}

#[test]
fn criterion_06_u_system_identity() {
    gate(verify::criterion_u_system());
}

#[test]
fn criterion_07_growth_at_scale() {
    gate(verify::criterion_growth_at_scale(DEFAULT_BUDGET));
}

#[test]
fn criterion_08_basepoint_independence() {
    gate(verify::criterion_basepoint_independence(DEFAULT_BUDGET));
}

#[test]
fn criterion_09_orbit_equidistribution() {
    gate(verify::criterion_orbit_equidistribution(DEFAULT_BUDGET));
}

#[test]
fn criterion_10_bipartite_bracket() {
    gate(verify::criterion_bipartite_bracket(DEFAULT_BUDGET));
}

#[test]
fn criterion_11_parity_step_structure() {
    gate(verify::criterion_parity_structure());
}

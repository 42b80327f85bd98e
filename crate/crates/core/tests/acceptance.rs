//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line. Run with `cargo test --test acceptance -- --nocapture` to see the
//! lines for passing criteria too.

use momap_core::suite::{self, SUITE_SEED};
use std::time::Instant;

fn run(name: &str, limit_secs: Option<f64>, f: impl FnOnce() -> suite::SuiteResult) {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed().as_secs_f64();
    match result {
        Ok(summary) => {
            println!("ACCEPTANCE {name}: PASS ({elapsed:.2}s) - {summary}");
            if let Some(limit) = limit_secs {
                assert!(
                    elapsed < limit,
                    "ACCEPTANCE {name}: runtime {elapsed:.2}s exceeds {limit}s budget"
                );
            }
        }
        Err(detail) => {
            println!("ACCEPTANCE {name}: FAIL - {detail}");
            panic!("ACCEPTANCE {name} failed: {detail}");
        }
    }
}

#[test]
fn criterion_01_differential_inequalities() {
    run("1 differential inequalities", Some(5.0), || {
        suite::differential_inequalities(SUITE_SEED)
    });
}

#[test]
fn criterion_02_dexp_finite_differences() {
    run("2 dexp vs finite differences", Some(5.0), || {
        suite::dexp_vs_finite_difference(SUITE_SEED)
    });
}

#[test]
fn criterion_03_moment_equivariance() {
    run("3 moment equivariance", None, || suite::moment_equivariance(SUITE_SEED));
}

#[test]
fn criterion_04_ray_monotonicity() {
    run("4 ray monotonicity", None, || suite::ray_monotonicity(SUITE_SEED));
}

#[test]
fn criterion_05_triple_oracle_agreement() {
    run("5 triple-oracle stability agreement", Some(60.0), || {
        suite::triple_oracle_agreement(SUITE_SEED)
    });
}

#[test]
fn criterion_06_solver_closed_forms() {
    run("6 solver closed forms", None, suite::solver_closed_forms);
}

#[test]
fn criterion_07_vortex_threshold() {
    run("7 vortex threshold", Some(120.0), suite::vortex_threshold);
}

#[test]
fn criterion_08_vortex_grid_convergence() {
    run("8 vortex grid convergence", None, suite::vortex_grid_convergence);
}

#[test]
fn criterion_09_split_pair_classifiers() {
    run("9 split-pair classifiers", None, suite::split_pair_exhaustive);
}

#[test]
fn criterion_10_scalar_and_monotony_suites() {
    run("10 scalar and monotony suites", None, || {
        suite::scalar_and_monotony_suites(SUITE_SEED)
    });
}

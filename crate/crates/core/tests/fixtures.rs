mod common;

use clqr::oracle;
use clqr::pipeline::{solve, SolveOptions};
use clqr::problem::{primal_residuals, Status, ToleranceConfig};
use common::{fixtures, rel_gap};

fn expected_status(name: &str) -> Status {
    if name.starts_with("infeasible") {
        Status::Infeasible
    } else {
        Status::Optimal
    }
}

#[test]
fn every_fixture_has_the_status_its_name_says() {
    for (name, p) in fixtures() {
        let out = solve(&p, &SolveOptions::default()).unwrap().outcome;
        assert_eq!(out.status, expected_status(&name), "{name}");
        if out.status == Status::Infeasible {
            assert!(out.witness.is_some(), "{name}");
        }
    }
}

#[test]
fn fixtures_agree_with_the_oracle() {
    let tol = ToleranceConfig::default();
    for (name, p) in fixtures() {
        let ours = solve(&p, &SolveOptions::default()).unwrap().outcome;
        let reference = oracle::solve(&p, &tol).unwrap().outcome;
        assert_eq!(ours.status, reference.status, "{name}");
        if ours.is_optimal() {
            assert!(rel_gap(ours.objective, reference.objective) <= 1e-9, "{name}: {} vs {}", ours.objective, reference.objective);
            assert!(primal_residuals(&p, &ours.x, &ours.u).unwrap().max_primal() <= 1e-10, "{name}");
        }
    }
}

#[test]
fn hand_computed_optimal_values() {
    let expected = [
        ("unconstrained_scalar", 0.25),
        ("mixed_square", 1.0),
        ("state_square", 0.75),
        ("terminal_pin", 0.25),
        ("initial_pin", 4.75),
        ("state_rect", 1.4375),
        ("mixed_dependent_rows", 1.75),
    ];
    let all = fixtures();
    for (name, value) in expected {
        let (_, p) = all.iter().find(|(n, _)| n == name).unwrap_or_else(|| panic!("missing fixture {name}"));
        let out = solve(p, &SolveOptions::default()).unwrap().outcome;
        assert!((out.objective - value).abs() <= 1e-12, "{name}: {}", out.objective);
    }
}

#[test]
fn parallel_mode_matches_on_fixtures() {
    let parallel = SolveOptions { mode: clqr::lqr::SolveMode::Parallel, ..Default::default() };
    for (name, p) in fixtures().into_iter().filter(|(n, _)| !n.starts_with("infeasible")) {
        let a = solve(&p, &SolveOptions::default()).unwrap().outcome;
        let b = solve(&p, &parallel).unwrap().outcome;
        assert!((a.objective - b.objective).abs() <= 1e-12, "{name}");
        for (x, y) in a.x.iter().zip(&b.x).chain(a.u.iter().zip(&b.u)) {
            assert!((x - y).amax() <= 1e-12, "{name}");
        }
    }
}

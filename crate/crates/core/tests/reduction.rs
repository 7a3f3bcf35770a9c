mod common;

use clqr::generate::{generate, uniform_chain, GeneratorConfig, InfeasibleKind};
use clqr::oracle;
use clqr::problem::{primal_residuals, ToleranceConfig, WitnessKind};
use clqr::reduction::{reduce, Reducer, Step};
use clqr::ClqrError;
use common::{fixtures, rel_gap, small_config};

fn fixture(name: &str) -> clqr::problem::ClqrProblem {
    fixtures().into_iter().find(|(n, _)| n == name).map(|(_, p)| p).expect("fixture exists")
}

#[test]
fn unconstrained_input_passes_through() {
    let p = uniform_chain(3, 6, 3, 2);
    let r = reduce(p.clone(), &ToleranceConfig::default()).unwrap();
    assert_eq!(r.trace.iterations, 0);
    assert!(r.ledger.is_empty());
    for t in 0..=p.num_stages() {
        assert!(r.ledger.composed(t).is_identity());
    }
    assert_eq!(r.problem, p);
}

#[test]
fn terminal_pin_hands_a_mixed_row_to_the_last_stage() {
    let p = fixture("terminal_pin");
    let horizon = p.num_stages();
    let r = reduce(p, &ToleranceConfig::default()).unwrap();
    assert_eq!(r.trace.eliminated_states[horizon], 1);
    assert_eq!(r.trace.eliminated_controls[horizon - 1], 1);
    assert_eq!(r.problem.state_dim(horizon), 0);
    assert!(r.problem.is_unconstrained());
    let spawned_then_eliminated = r
        .trace
        .steps
        .iter()
        .any(|s| s.step == Step::EliminateMixed && s.touched.iter().any(|&(t, _)| t == horizon - 1));
    assert!(spawned_then_eliminated);
}

#[test]
fn contradictory_duplicate_rows_are_infeasible() {
    let cfg = GeneratorConfig { infeasible: Some(InfeasibleKind::DuplicatedRow), ..Default::default() };
    for seed in 0..10 {
        match reduce(generate(seed, &cfg).problem, &ToleranceConfig::default()) {
            Err(ClqrError::Infeasible(w)) => {
                assert!(matches!(w.kind, WitnessKind::DependentStateRows | WitnessKind::InitialStateMismatch));
                assert!(w.residual.abs() > 1e-9);
            }
            other => panic!("seed {seed}: expected infeasible, got {other:?}"),
        }
    }
}

#[test]
fn iterations_stay_within_limit() {
    for seed in 0..100 {
        let p = generate(seed, &small_config(seed)).problem;
        let limit = p.total_state_dim() + 1;
        let r = reduce(p, &ToleranceConfig::default()).unwrap();
        assert_eq!(r.trace.iteration_limit, limit);
        assert!(r.trace.iterations <= limit);
        assert!(r.trace.bounds.iter().all(|b| b.holds()));
    }
}

#[test]
fn ledger_maps_reduced_witness_back_to_a_feasible_point() {
    // Any reduced trajectory recovers to a point satisfying the original
    // constraints, not just the optimal one.
    for seed in 0..30 {
        let p = generate(seed, &small_config(seed)).problem;
        let r = reduce(p.clone(), &ToleranceConfig::default()).unwrap();
        let q = &r.problem;
        let mut x = vec![q.initial_state.clone()];
        let mut u = Vec::new();
        for (i, stage) in q.stages.iter().enumerate() {
            let ui = clqr::Vector::from_element(q.control_dim(i), 0.3);
            let next = &stage.dynamics.state * &x[i] + &stage.dynamics.control * &ui + &stage.dynamics.offset;
            u.push(ui);
            x.push(next);
        }
        let (mut xo, uo) = r.recover(&x, &u).unwrap();
        xo[0] = p.initial_state.clone();
        let res = primal_residuals(&p, &xo, &uo).unwrap();
        assert!(res.max_primal() <= 1e-9, "seed {seed}: {res:?}");
    }
}

#[test]
fn stepwise_reduction_keeps_the_optimal_value() {
    let tol = ToleranceConfig::default();
    for seed in 0..12 {
        let p = generate(seed, &small_config(seed)).problem;
        let reference = oracle::optimal_value(&p, &tol).unwrap().unwrap();
        let mut reducer = Reducer::new(p, tol).unwrap();
        while !reducer.problem().is_unconstrained() {
            for step in Step::ALL {
                if reducer.apply(step).unwrap().touched.is_empty() {
                    continue;
                }
                let v = oracle::optimal_value(reducer.problem(), &tol).unwrap().unwrap();
                assert!(rel_gap(v, reference) <= 1e-8, "seed {seed} after {step}: {v} vs {reference}");
            }
        }
    }
}

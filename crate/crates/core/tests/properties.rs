mod common;

use clqr::generate::{generate, uniform_chain, GeneratorConfig};
use clqr::linalg::{echelon_factor, row_rank_normalize, symmetric_part};
use clqr::lqr::{solve_parallel, solve_sequential, ScanElement};
use clqr::oracle;
use clqr::pipeline::{solve, SolveOptions};
use clqr::problem::{objective_value, validate, ClqrProblem, ToleranceConfig};
use clqr::reduction::{reduce, Reducer, Step};
use clqr::{Matrix, Vector};
use common::{rel_gap, small_config};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-2.0..2.0f64, rows * cols).prop_map(move |v| Matrix::from_row_slice(rows, cols, &v))
}

/// `k` rows spanning at most `rank` directions in `m` columns.
fn low_rank(k: usize, m: usize, rank: usize) -> impl Strategy<Value = Matrix> {
    (matrix(k, rank), matrix(rank, m)).prop_map(|(a, b)| a * b)
}

fn rollout(p: &ClqrProblem, u: &[Vector]) -> Vec<Vector> {
    let mut x = vec![p.initial_state.clone()];
    for (i, stage) in p.stages.iter().enumerate() {
        let next = &stage.dynamics.state * &x[i] + &stage.dynamics.control * &u[i] + &stage.dynamics.offset;
        x.push(next);
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_step_preserves_the_optimal_value(seed in 0u64..100_000) {
        let tol = ToleranceConfig::default();
        let p = generate(seed, &small_config(seed)).problem;
        let before = oracle::optimal_value(&p, &tol).unwrap().unwrap();
        let mut reducer = Reducer::new(p, tol).unwrap();
        while !reducer.problem().is_unconstrained() {
            for step in Step::ALL {
                if reducer.apply(step).unwrap().touched.is_empty() {
                    continue;
                }
                let q = reducer.problem();
                let after = oracle::optimal_value(q, &tol).unwrap().unwrap();
                prop_assert!(rel_gap(after, before) <= 1e-7, "{step}: {after} vs {before}");
                prop_assert!(validate(q, &tol).is_empty(), "{step}: {:?}", validate(q, &tol));
            }
        }
    }

    #[test]
    fn optimal_controls_beat_perturbed_ones(seed in 0u64..100_000, dir_seed in any::<u64>(), scale in 1e-3..1.0f64) {
        let cfg = GeneratorConfig { stages: 1 + (seed % 6) as usize, ..Default::default() };
        let reduced = reduce(generate(seed, &cfg).problem, &ToleranceConfig::default()).unwrap().problem;
        let sol = solve_sequential(&reduced).unwrap();
        let best = objective_value(&reduced, &sol.x, &sol.u).unwrap();
        let mut state = dir_seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let u: Vec<Vector> = sol.u.iter().map(|ui| ui + Vector::from_fn(ui.len(), |_, _| scale * next())).collect();
        let x = rollout(&reduced, &u);
        let perturbed = objective_value(&reduced, &x, &u).unwrap();
        prop_assert!(perturbed >= best - 1e-9 * (1.0 + best.abs()), "{perturbed} < {best}");
    }

    #[test]
    fn parallel_and_sequential_agree(seed in 0u64..100_000, stages in 1usize..40) {
        let p = uniform_chain(seed, stages, 1 + (seed % 4) as usize, 1 + (seed % 3) as usize);
        let seq = solve_sequential(&p).unwrap();
        let (par, _) = solve_parallel(&p).unwrap();
        let scale = 1.0 + seq.x.iter().chain(&seq.u).map(|v| v.amax()).fold(0.0, f64::max);
        for (a, b) in seq.x.iter().zip(&par.x).chain(seq.u.iter().zip(&par.u)) {
            prop_assert!((a - b).amax() <= 1e-9 * scale);
        }
        prop_assert!(rel_gap(par.objective, seq.objective) <= 1e-9);
    }

    #[test]
    fn recovered_solution_is_feasible(seed in 0u64..100_000) {
        let p = generate(seed, &small_config(seed)).problem;
        let out = solve(&p, &SolveOptions::default()).unwrap().outcome;
        prop_assert!(out.residuals.max_primal() <= 1e-9, "{:?}", out.residuals);
    }

    #[test]
    fn rank_normalization_keeps_independent_rows(
        (d, side) in (1usize..5, 1usize..4, 0usize..4).prop_flat_map(|(m, n, r)| {
            let k = r + 1 + m;
            (low_rank(k, m, r.min(m)), matrix(k, n))
        }),
        rhs_seed in prop::collection::vec(-1.0..1.0f64, 8),
    ) {
        let rhs = Vector::from_iterator(d.nrows(), rhs_seed.iter().copied().cycle().take(d.nrows()));
        let norm = row_rank_normalize(&d, &side, &rhs, 1e-10).unwrap();
        prop_assert!(norm.kept_rows.len() <= d.ncols());
        prop_assert_eq!(norm.kept_rows.len() + norm.spawned.len(), d.nrows());
        let kept = norm.select_rows(&d);
        if kept.nrows() > 0 {
            prop_assert_eq!(kept.clone().rank(1e-9), kept.nrows());
        }
        for s in &norm.spawned {
            let lhs = d.tr_mul(&s.coefficients);
            prop_assert!(lhs.amax() <= 1e-9 * (1.0 + s.coefficients.amax()));
            prop_assert!((side.tr_mul(&s.coefficients) - &s.side).amax() <= 1e-9 * (1.0 + s.coefficients.amax()));
            prop_assert!((s.coefficients.dot(&rhs) - s.rhs).abs() <= 1e-9 * (1.0 + s.rhs_scale));
        }
    }

    #[test]
    fn echelon_form_reproduces_the_block(d in (1usize..4, 0usize..3).prop_flat_map(|(k, extra)| matrix(k, k + extra))) {
        prop_assume!(d.clone().rank(1e-6) == d.nrows());
        let f = echelon_factor(&d, 1e-10).unwrap();
        prop_assert!(f.defect(&d) <= 1e-9 * (1.0 + f.left.amax()));
    }

    #[test]
    fn scan_combination_is_associative(dims in prop::collection::vec(1usize..4, 4), entries in prop::collection::vec(-1.0..1.0f64, 200)) {
        let mut it = entries.iter().copied().cycle();
        let mut element = |n_in: usize, n_out: usize| {
            let mut take = |r: usize, c: usize| Matrix::from_fn(r, c, |_, _| it.next().unwrap());
            let a = take(n_out, n_in);
            let g = take(n_out, n_out);
            let h = take(n_in, n_in);
            let b = take(n_out, 1).column(0).into_owned();
            let eta = take(n_in, 1).column(0).into_owned();
            ScanElement { a, b, c: symmetric_part(&(&g * g.transpose())), eta, j: symmetric_part(&(h.transpose() * &h)) }
        };
        let x = element(dims[0], dims[1]);
        let y = element(dims[1], dims[2]);
        let z = element(dims[2], dims[3]);
        let left = x.combine(&y).unwrap().combine(&z).unwrap();
        let right = x.combine(&y.combine(&z).unwrap()).unwrap();
        for (l, r) in [(&left.a, &right.a), (&left.c, &right.c), (&left.j, &right.j)] {
            prop_assert!((l - r).amax() <= 1e-9 * (1.0 + l.amax()));
        }
        prop_assert!((&left.b - &right.b).amax() <= 1e-9 * (1.0 + left.b.amax()));
        prop_assert!((&left.eta - &right.eta).amax() <= 1e-9 * (1.0 + left.eta.amax()));
    }
}

//! Seeded random problem instances.
//!
//! Feasible instances are built around a sampled witness trajectory: every
//! offset (`s₀`, `c`, `d`, `e`) is chosen so that the witness satisfies the
//! constraints exactly, and costs are Gram matrices plus a positive shift on
//! the control block, so every instance is regular. Constraint row counts go
//! up to one more than the dimension they act on, which makes dependent rows
//! common.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::symmetric_part;
use crate::problem::{
    ClqrProblem, Dynamics, MixedConstraint, StageCost, StageData, StateConstraint, TerminalData,
};
use crate::{Matrix, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InfeasibleKind {
    /// A state-only row repeated with a shifted offset.
    DuplicatedRow,
    /// State-only rows at time 0 that `s₀` violates.
    InitialPin,
    /// A state-only row with zero coefficients and a nonzero offset.
    ZeroRow,
}

impl InfeasibleKind {
    pub const ALL: [InfeasibleKind; 3] = [InfeasibleKind::DuplicatedRow, InfeasibleKind::InitialPin, InfeasibleKind::ZeroRow];
}

impl std::str::FromStr for InfeasibleKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "duplicate" | "duplicated-row" => Ok(InfeasibleKind::DuplicatedRow),
            "initial" | "initial-pin" => Ok(InfeasibleKind::InitialPin),
            "zero" | "zero-row" => Ok(InfeasibleKind::ZeroRow),
            other => Err(format!("unknown infeasibility kind `{other}` (expected duplicate, initial or zero)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub stages: usize,
    /// Inclusive range of state dimensions.
    pub state_range: (usize, usize),
    /// Inclusive range of control dimensions.
    pub control_range: (usize, usize),
    /// Chance of each candidate mixed row (`m + 1` candidates per stage).
    pub mixed_density: f64,
    /// Chance of each candidate state-only row (`n + 1` candidates per time).
    pub state_density: f64,
    pub infeasible: Option<InfeasibleKind>,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self { stages: 5, state_range: (1, 4), control_range: (1, 3), mixed_density: 0.3, state_density: 0.3, infeasible: None }
    }
}

/// A generated problem and, for feasible ones, a trajectory satisfying all of
/// its constraints.
#[derive(Clone, Debug)]
pub struct Generated {
    pub problem: ClqrProblem,
    pub witness_x: Vec<Vector>,
    pub witness_u: Vec<Vector>,
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| normal(rng))
}

fn random_vector(rng: &mut ChaCha8Rng, len: usize) -> Vector {
    Vector::from_fn(len, |_, _| normal(rng))
}

fn dim(rng: &mut ChaCha8Rng, range: (usize, usize)) -> usize {
    let (lo, hi) = range;
    if hi <= lo {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

fn row_count(rng: &mut ChaCha8Rng, candidates: usize, density: f64) -> usize {
    (0..candidates).filter(|_| rng.random::<f64>() < density).count()
}

/// Joint cost `WᵀW / (n+m) + diag(0, εI)` with a random number of rows in
/// `W`, so `Q` is often singular while `R` stays definite.
fn stage_cost(rng: &mut ChaCha8Rng, n: usize, m: usize) -> StageCost {
    let k = n + m;
    let rows = if k == 0 { 0 } else { rng.random_range(1..=k) };
    let w = random_matrix(rng, rows, k);
    let mut h = w.transpose() * &w / (k.max(1) as f64);
    for j in n..k {
        h[(j, j)] += 0.1;
    }
    let h = symmetric_part(&h);
    StageCost {
        state: h.view((0, 0), (n, n)).into_owned(),
        control: h.view((n, n), (m, m)).into_owned(),
        cross: h.view((0, n), (n, m)).into_owned(),
        state_linear: random_vector(rng, n),
        control_linear: random_vector(rng, m),
        constant: 0.0,
    }
}

/// State matrix with entries scaled by `1/√n`, keeping the spectral radius
/// near one.
fn dynamics_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    random_matrix(rng, rows, cols) / (cols.max(1) as f64).sqrt()
}

/// Random constraint rows; about one in five has its control part zeroed.
fn mixed_block(rng: &mut ChaCha8Rng, rows: usize, n: usize, m: usize, x: &Vector, u: &Vector) -> MixedConstraint {
    let state = random_matrix(rng, rows, n);
    let mut control = random_matrix(rng, rows, m);
    for r in 0..rows {
        if rng.random::<f64>() < 0.2 {
            control.row_mut(r).fill(0.0);
        }
    }
    let offset = -(&state * x + &control * u);
    MixedConstraint { state, control, offset }
}

fn state_block(rng: &mut ChaCha8Rng, rows: usize, n: usize, x: &Vector) -> StateConstraint {
    let state = random_matrix(rng, rows, n);
    let offset = -(&state * x);
    StateConstraint { state, offset }
}

pub fn generate(seed: u64, cfg: &GeneratorConfig) -> Generated {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let horizon = cfg.stages;
    let n: Vec<usize> = (0..=horizon).map(|_| dim(&mut rng, cfg.state_range)).collect();
    let m: Vec<usize> = (0..horizon).map(|_| dim(&mut rng, cfg.control_range)).collect();
    let witness_x: Vec<Vector> = n.iter().map(|&k| random_vector(&mut rng, k)).collect();
    let witness_u: Vec<Vector> = m.iter().map(|&k| random_vector(&mut rng, k)).collect();

    let mut stages = Vec::with_capacity(horizon);
    for i in 0..horizon {
        let cost = stage_cost(&mut rng, n[i], m[i]);
        let a = dynamics_matrix(&mut rng, n[i + 1], n[i]);
        let b = random_matrix(&mut rng, n[i + 1], m[i]);
        let c = &witness_x[i + 1] - &a * &witness_x[i] - &b * &witness_u[i];
        let mut stage = StageData::unconstrained(cost, Dynamics { state: a, control: b, offset: c });
        let t = row_count(&mut rng, m[i] + 1, cfg.mixed_density);
        stage.mixed = mixed_block(&mut rng, t, n[i], m[i], &witness_x[i], &witness_u[i]);
        let s = row_count(&mut rng, n[i] + 1, cfg.state_density);
        stage.state_only = state_block(&mut rng, s, n[i], &witness_x[i]);
        stages.push(stage);
    }
    let v = random_matrix(&mut rng, n[horizon], n[horizon]);
    let s = row_count(&mut rng, n[horizon] + 1, cfg.state_density);
    let terminal = TerminalData {
        state: symmetric_part(&(v.transpose() * &v / (n[horizon].max(1) as f64))),
        state_linear: random_vector(&mut rng, n[horizon]),
        constant: 0.0,
        state_only: state_block(&mut rng, s, n[horizon], &witness_x[horizon]),
    };
    let mut problem = ClqrProblem { initial_state: witness_x[0].clone(), stages, terminal };

    if let Some(kind) = cfg.infeasible {
        break_feasibility(&mut rng, &mut problem, kind);
    }
    Generated { problem, witness_x, witness_u }
}

/// Adds one contradictory row. The offset shift is at least one in size.
fn break_feasibility(rng: &mut ChaCha8Rng, p: &mut ClqrProblem, kind: InfeasibleKind) {
    let shift = if rng.random::<bool>() { 1.0 } else { -1.0 } * rng.random_range(1.0..2.0);
    match kind {
        InfeasibleKind::DuplicatedRow => {
            let candidates: Vec<usize> = (0..=p.num_stages()).filter(|&t| !p.state_constraint(t).is_empty()).collect();
            let time = if candidates.is_empty() {
                let time = rng.random_range(0..=p.num_stages());
                let n = p.state_dim(time);
                let row = random_matrix(rng, 1, n);
                let offset = Vector::from_element(1, normal(rng));
                p.state_constraint_mut(time).append(&row, &offset);
                time
            } else {
                candidates[rng.random_range(0..candidates.len())]
            };
            let block = p.state_constraint_mut(time);
            let r = rng.random_range(0..block.rows());
            let row = block.state.rows(r, 1).into_owned();
            let offset = Vector::from_element(1, block.offset[r] + shift);
            block.append(&row, &offset);
        }
        InfeasibleKind::InitialPin => {
            let n = p.state_dim(0);
            let rows = rng.random_range(1..=n.max(1));
            let e = random_matrix(rng, rows, n);
            let mut offset = -(&e * &p.initial_state);
            offset[0] += shift;
            p.state_constraint_mut(0).append(&e, &offset);
        }
        InfeasibleKind::ZeroRow => {
            let time = rng.random_range(0..=p.num_stages());
            let n = p.state_dim(time);
            p.state_constraint_mut(time).append(&Matrix::zeros(1, n), &Vector::from_element(1, shift));
        }
    }
}

/// `N` copies of one random stage with `n` states and `m` controls, no
/// constraints besides the dynamics.
pub fn uniform_chain(seed: u64, stages: usize, n: usize, m: usize) -> ClqrProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cost = stage_cost(&mut rng, n, m);
    let dynamics = Dynamics {
        state: dynamics_matrix(&mut rng, n, n),
        control: random_matrix(&mut rng, n, m),
        offset: random_vector(&mut rng, n) * 0.1,
    };
    let stage = StageData::unconstrained(cost, dynamics);
    let v = random_matrix(&mut rng, n, n);
    ClqrProblem {
        initial_state: random_vector(&mut rng, n),
        stages: vec![stage; stages],
        terminal: TerminalData {
            state: symmetric_part(&(v.transpose() * &v / (n.max(1) as f64))) + Matrix::identity(n, n),
            state_linear: random_vector(&mut rng, n),
            constant: 0.0,
            state_only: StateConstraint::empty(n),
        },
    }
}

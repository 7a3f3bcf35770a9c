//! Unconstrained LQR: a cross-term Riccati recursion and an associative
//! parallel scan with the same contract.

mod scan;

pub use scan::{combine_all, prefix_scan, solve_parallel, thread_pool, ScanDiagnostics, ScanElement};

use crate::error::{ClqrError, Result};
use crate::problem::{objective_value, ClqrProblem, Multipliers, StageData};
use crate::{Matrix, Vector};

use nalgebra::Cholesky;

/// Cost-to-go `½ xᵀ P x + pᵀ x + offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueQuadratic {
    pub hessian: Matrix,
    pub gradient: Vector,
    pub offset: f64,
}

impl ValueQuadratic {
    pub fn evaluate(&self, x: &Vector) -> f64 {
        0.5 * x.dot(&(&self.hessian * x)) + self.gradient.dot(x) + self.offset
    }

    pub fn slope(&self, x: &Vector) -> Vector {
        &self.hessian * x + &self.gradient
    }
}

/// `u = K x + k`.
#[derive(Clone, Debug, PartialEq)]
pub struct FeedbackPolicy {
    pub gain: Matrix,
    pub feedforward: Vector,
}

impl FeedbackPolicy {
    pub fn apply(&self, x: &Vector) -> Vector {
        &self.gain * x + &self.feedforward
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SolveMode {
    #[default]
    Sequential,
    Parallel,
}

impl std::str::FromStr for SolveMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "sequential" | "seq" => Ok(SolveMode::Sequential),
            "parallel" | "par" => Ok(SolveMode::Parallel),
            other => Err(format!("unknown mode `{other}` (expected sequential or parallel)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LqrSolution {
    pub x: Vec<Vector>,
    pub u: Vec<Vector>,
    pub policies: Vec<FeedbackPolicy>,
    /// `N + 1` value functions, the last one being the terminal cost.
    pub values: Vec<ValueQuadratic>,
    pub objective: f64,
}

impl LqrSolution {
    /// Multipliers of the dynamics and the initial condition. The costate of
    /// `x_{i+1} = Aᵢxᵢ + Bᵢuᵢ + cᵢ` is the slope of the next value function.
    pub fn multipliers(&self, p: &ClqrProblem) -> Multipliers {
        let mut out = Multipliers::zeros(p);
        out.initial = -self.values[0].slope(&self.x[0]);
        for i in 0..p.num_stages() {
            out.dynamics[i] = self.values[i + 1].slope(&self.x[i + 1]);
        }
        out
    }
}

pub fn solve(p: &ClqrProblem, mode: SolveMode) -> Result<LqrSolution> {
    match mode {
        SolveMode::Sequential => solve_sequential(p),
        SolveMode::Parallel => solve_parallel(p).map(|(sol, _)| sol),
    }
}

pub(crate) fn require_unconstrained(p: &ClqrProblem) -> Result<()> {
    p.check_dimensions()?;
    if p.is_unconstrained() {
        Ok(())
    } else {
        Err(ClqrError::Precondition(format!(
            "LQR solve needs an unconstrained problem ({} mixed and {} state-only rows remain)",
            p.mixed_rows(),
            p.state_only_rows()
        )))
    }
}

pub(crate) fn terminal_value(p: &ClqrProblem) -> ValueQuadratic {
    ValueQuadratic {
        hessian: p.terminal.state.clone(),
        gradient: p.terminal.state_linear.clone(),
        offset: p.terminal.constant,
    }
}

/// One Riccati step: the policy at `stage` and its value function, given the
/// value function one step later.
pub(crate) fn backup(stage: &StageData, index: usize, next: &ValueQuadratic) -> Result<(FeedbackPolicy, ValueQuadratic)> {
    let (a, b, c) = (&stage.dynamics.state, &stage.dynamics.control, &stage.dynamics.offset);
    let cost = &stage.cost;
    let pa = &next.hessian * a;
    let pc_p = &next.hessian * c + &next.gradient;
    let h_uu = &cost.control + b.transpose() * &next.hessian * b;
    let h_ux = cost.cross.transpose() + b.transpose() * &pa;
    let h_u = &cost.control_linear + b.tr_mul(&pc_p);

    let m = stage.control_dim();
    let (gain, feedforward) = if m == 0 {
        (Matrix::zeros(0, stage.state_dim()), Vector::zeros(0))
    } else {
        let chol = Cholesky::new(h_uu).ok_or(ClqrError::NumericalBreakdown { stage: index })?;
        (-chol.solve(&h_ux), -chol.solve(&h_u))
    };

    let hessian = &cost.state + a.transpose() * &pa + h_ux.transpose() * &gain;
    let hessian = (&hessian + hessian.transpose()) * 0.5;
    let gradient = &cost.state_linear + a.tr_mul(&pc_p) + h_ux.tr_mul(&feedforward);
    let offset = cost.constant + next.offset + 0.5 * c.dot(&(&next.hessian * c)) + next.gradient.dot(c)
        + 0.5 * h_u.dot(&feedforward);
    Ok((FeedbackPolicy { gain, feedforward }, ValueQuadratic { hessian, gradient, offset }))
}

/// Forward rollout from `x₀ = s₀`.
pub(crate) fn rollout(p: &ClqrProblem, policies: &[FeedbackPolicy]) -> (Vec<Vector>, Vec<Vector>) {
    let mut x = Vec::with_capacity(p.num_stages() + 1);
    let mut u = Vec::with_capacity(p.num_stages());
    x.push(p.initial_state.clone());
    for (stage, policy) in p.stages.iter().zip(policies) {
        let xi = x.last().expect("nonempty");
        let ui = policy.apply(xi);
        let d = &stage.dynamics;
        let next = &d.state * xi + &d.control * &ui + &d.offset;
        u.push(ui);
        x.push(next);
    }
    (x, u)
}

/// Backward Riccati pass with cross terms, then a forward rollout.
pub fn solve_sequential(p: &ClqrProblem) -> Result<LqrSolution> {
    require_unconstrained(p)?;
    let horizon = p.num_stages();
    let mut values = vec![terminal_value(p)];
    let mut policies = Vec::with_capacity(horizon);
    for i in (0..horizon).rev() {
        let (policy, value) = backup(&p.stages[i], i, values.last().expect("nonempty"))?;
        policies.push(policy);
        values.push(value);
    }
    policies.reverse();
    values.reverse();
    let (x, u) = rollout(p, &policies);
    let objective = objective_value(p, &x, &u)?;
    Ok(LqrSolution { x, u, policies, values, objective })
}

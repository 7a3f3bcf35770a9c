//! Elimination followed by an unconstrained solve and recovery.

use crate::error::{ClqrError, Result};
use crate::lqr::{self, LqrSolution, ScanDiagnostics, SolveMode};
use crate::problem::{kkt_residuals, objective_value, primal_residuals, ClqrProblem, SolveOutcome, Status, ToleranceConfig};
use crate::reduction::{reduce, ReducedLqr, ReductionTrace};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SolveOptions {
    pub mode: SolveMode,
    pub tol: ToleranceConfig,
}

#[derive(Clone, Debug)]
pub struct PipelineSolution {
    pub outcome: SolveOutcome,
    /// Absent when infeasibility was detected during reduction.
    pub trace: Option<ReductionTrace>,
    /// Only filled in parallel mode.
    pub diagnostics: Option<ScanDiagnostics>,
}

/// Solves a constrained problem by elimination.
///
/// Infeasibility is a normal outcome, not an error. Primal residuals are
/// measured on the original problem; stationarity is measured on the reduced
/// problem, whose multipliers the LQR solve provides directly.
pub fn solve(problem: &ClqrProblem, options: &SolveOptions) -> Result<PipelineSolution> {
    problem.check_dimensions()?;
    let reduced = match reduce(problem.clone(), &options.tol) {
        Ok(r) => r,
        Err(ClqrError::Infeasible(witness)) => {
            return Ok(PipelineSolution { outcome: SolveOutcome::infeasible(*witness), trace: None, diagnostics: None })
        }
        Err(e) => return Err(e),
    };
    let (solution, diagnostics) = match options.mode {
        SolveMode::Sequential => (lqr::solve_sequential(&reduced.problem)?, None),
        SolveMode::Parallel => {
            let (s, d) = lqr::solve_parallel(&reduced.problem)?;
            (s, Some(d))
        }
    };
    let outcome = recover_outcome(problem, &reduced, &solution)?;
    Ok(PipelineSolution { outcome, trace: Some(reduced.trace), diagnostics })
}

fn recover_outcome(problem: &ClqrProblem, reduced: &ReducedLqr, solution: &LqrSolution) -> Result<SolveOutcome> {
    let (mut x, u) = reduced.recover(&solution.x, &solution.u)?;
    x[0] = problem.initial_state.clone();
    let objective = objective_value(problem, &x, &u)?;
    let mut residuals = primal_residuals(problem, &x, &u)?;
    let multipliers = solution.multipliers(&reduced.problem);
    residuals.stationarity = kkt_residuals(&reduced.problem, &solution.x, &solution.u, &multipliers)?.stationarity;
    Ok(SolveOutcome { status: Status::Optimal, x, u, objective, residuals, witness: None })
}

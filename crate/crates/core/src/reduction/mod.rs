//! Constraint elimination: turns a constrained problem into an unconstrained
//! one plus a ledger of affine maps back to the original variables.
//!
//! One outer iteration runs the three mixed-constraint steps over every stage
//! and then the three state-only steps over every time index. State
//! elimination can hand new mixed rows to the previous stage, which the next
//! iteration picks up. Every iteration that leaves constraints
//! behind has removed at least one state, so the loop ends after at most
//! `Σ nᵢ + 1` iterations.

pub mod ledger;
pub mod steps;

use std::fmt;

use crate::error::{ClqrError, Result};
use crate::problem::{ClqrProblem, ToleranceConfig};
use crate::Vector;

pub use ledger::{AffineMap, LedgerEntry, RecoveryLedger};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    NormalizeMixed,
    FactorMixed,
    EliminateMixed,
    NormalizeState,
    FactorState,
    EliminateState,
}

impl Step {
    pub const ALL: [Step; 6] = [
        Step::NormalizeMixed,
        Step::FactorMixed,
        Step::EliminateMixed,
        Step::NormalizeState,
        Step::FactorState,
        Step::EliminateState,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Step::NormalizeMixed => "normalize-mixed",
            Step::FactorMixed => "factor-mixed",
            Step::EliminateMixed => "eliminate-mixed",
            Step::NormalizeState => "normalize-state",
            Step::FactorState => "factor-state",
            Step::EliminateState => "eliminate-state",
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What one step did across the horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepReport {
    pub step: Step,
    /// `(time, rows)` for every time index the step changed; rows are the
    /// constraint rows moved, dropped, factored or eliminated there.
    pub touched: Vec<(usize, usize)>,
}

impl StepReport {
    pub fn rows(&self) -> usize {
        self.touched.iter().map(|(_, r)| r).sum()
    }
}

/// Row counts right after a normalization step, paired with the dimension
/// that bounds them: `(rows of D, m)` per stage after mixed normalization,
/// `(rows of E, n)` per time index after state normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowBounds {
    pub iteration: usize,
    pub step: Step,
    pub rows: Vec<(usize, usize)>,
}

impl RowBounds {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|(rows, dim)| rows <= dim)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReductionTrace {
    pub iterations: usize,
    pub iteration_limit: usize,
    pub steps: Vec<StepReport>,
    pub bounds: Vec<RowBounds>,
    /// States removed per time index.
    pub eliminated_states: Vec<usize>,
    /// Controls fixed by mixed rows per stage.
    pub eliminated_controls: Vec<usize>,
}

/// Applies reduction steps one at a time, keeping the ledger in sync.
#[derive(Clone, Debug)]
pub struct Reducer {
    problem: ClqrProblem,
    ledger: RecoveryLedger,
    tol: ToleranceConfig,
}

impl Reducer {
    pub fn new(problem: ClqrProblem, tol: ToleranceConfig) -> Result<Self> {
        problem.check_dimensions()?;
        let ledger = RecoveryLedger::new(problem.state_dims(), problem.control_dims());
        Ok(Self { problem, ledger, tol })
    }

    pub fn problem(&self) -> &ClqrProblem {
        &self.problem
    }

    pub fn ledger(&self) -> &RecoveryLedger {
        &self.ledger
    }

    pub fn into_parts(self) -> (ClqrProblem, RecoveryLedger) {
        (self.problem, self.ledger)
    }

    /// Runs `step` at every time index it applies to.
    pub fn apply(&mut self, step: Step) -> Result<StepReport> {
        let mut report = StepReport { step, touched: Vec::new() };
        let horizon = self.problem.num_stages();
        let tol = self.tol;
        match step {
            Step::NormalizeMixed => {
                for i in 0..horizon {
                    let moved = steps::normalize_mixed_rank(&mut self.problem.stages[i], &tol)?;
                    if moved > 0 {
                        report.touched.push((i, moved));
                    }
                }
            }
            Step::FactorMixed => {
                for i in 0..horizon {
                    let stage = &mut self.problem.stages[i];
                    if stage.mixed.is_empty() {
                        continue;
                    }
                    let (n, m) = (stage.state_dim(), stage.control_dim());
                    report.touched.push((i, stage.mixed.rows()));
                    if let Some(map) = steps::factor_mixed(stage, &tol)? {
                        self.ledger.record(i, map, n, m);
                    }
                }
            }
            Step::EliminateMixed => {
                for i in 0..horizon {
                    let stage = &mut self.problem.stages[i];
                    let rows = stage.mixed.rows();
                    if rows == 0 {
                        continue;
                    }
                    let n = stage.state_dim();
                    let map = if rows == stage.control_dim() {
                        steps::eliminate_mixed_square(stage)?
                    } else {
                        steps::eliminate_mixed_rect(stage)?
                    };
                    self.ledger.record(i, map, n, stage.control_dim());
                    report.touched.push((i, rows));
                }
            }
            Step::NormalizeState => {
                for t in 0..=horizon {
                    let dropped = steps::normalize_state_rank(&mut self.problem, t, &tol)?;
                    if dropped > 0 {
                        report.touched.push((t, dropped));
                    }
                }
            }
            Step::FactorState => {
                for t in 0..=horizon {
                    let rows = self.problem.state_constraint(t).rows();
                    if rows == 0 {
                        continue;
                    }
                    let n = self.problem.state_dim(t);
                    report.touched.push((t, rows));
                    if let Some(map) = steps::factor_state(&mut self.problem, t, &tol)? {
                        let m = control_dim_at(&self.problem, t);
                        self.ledger.record(t, map, n, m);
                    }
                }
            }
            Step::EliminateState => {
                for t in 0..=horizon {
                    let rows = self.problem.state_constraint(t).rows();
                    if rows == 0 {
                        continue;
                    }
                    let map = if rows == self.problem.state_dim(t) {
                        steps::eliminate_state_square(&mut self.problem, t, &tol)?
                    } else {
                        steps::eliminate_state_rect(&mut self.problem, t, &tol)?
                    };
                    let m = control_dim_at(&self.problem, t);
                    self.ledger.record(t, map, self.problem.state_dim(t), m);
                    report.touched.push((t, rows));
                }
            }
        }
        Ok(report)
    }

    fn row_bounds(&self, iteration: usize, step: Step) -> RowBounds {
        let p = &self.problem;
        let rows = if step == Step::NormalizeMixed {
            p.stages.iter().map(|s| (s.mixed.rows(), s.control_dim())).collect()
        } else {
            (0..=p.num_stages()).map(|t| (p.state_constraint(t).rows(), p.state_dim(t))).collect()
        };
        RowBounds { iteration, step, rows }
    }
}

fn control_dim_at(p: &ClqrProblem, time: usize) -> usize {
    if time < p.num_stages() {
        p.control_dim(time)
    } else {
        0
    }
}

/// An unconstrained problem together with the way back.
#[derive(Clone, Debug)]
pub struct ReducedLqr {
    pub problem: ClqrProblem,
    pub ledger: RecoveryLedger,
    pub trace: ReductionTrace,
}

impl ReducedLqr {
    pub fn recover(&self, x: &[Vector], u: &[Vector]) -> Result<(Vec<Vector>, Vec<Vector>)> {
        self.ledger.recover(x, u)
    }
}

/// Eliminates every mixed and state-only constraint.
pub fn reduce(problem: ClqrProblem, tol: &ToleranceConfig) -> Result<ReducedLqr> {
    let original_states = problem.state_dims();
    let original_controls = problem.control_dims();
    let limit = problem.total_state_dim() + 1;
    let mut reducer = Reducer::new(problem, *tol)?;
    let mut trace = ReductionTrace { iteration_limit: limit, ..ReductionTrace::default() };
    let mut eliminated_controls = vec![0; original_controls.len()];

    while !reducer.problem().is_unconstrained() {
        trace.iterations += 1;
        if trace.iterations > limit {
            return Err(ClqrError::NonTermination { limit });
        }
        for step in Step::ALL {
            let report = reducer.apply(step)?;
            match step {
                Step::NormalizeMixed | Step::NormalizeState => trace.bounds.push(reducer.row_bounds(trace.iterations, step)),
                Step::EliminateMixed => {
                    for &(i, rows) in &report.touched {
                        eliminated_controls[i] += rows;
                    }
                }
                _ => {}
            }
            trace.steps.push(report);
        }
    }

    let (problem, ledger) = reducer.into_parts();
    trace.eliminated_states = original_states.iter().zip(problem.state_dims()).map(|(a, b)| a - b).collect();
    trace.eliminated_controls = eliminated_controls;
    Ok(ReducedLqr { problem, ledger, trace })
}

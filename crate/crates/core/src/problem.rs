//! Problem data model for stagewise equality-constrained LQR.
//!
//! A problem with `N` stages minimizes
//!
//! ```text
//! Σ_{i<N} ( ½ xᵢᵀQᵢxᵢ + ½ uᵢᵀRᵢuᵢ + xᵢᵀMᵢuᵢ + qᵢᵀxᵢ + rᵢᵀuᵢ + κᵢ ) + ½ x_NᵀQ_N x_N + q_Nᵀx_N + κ_N
//! ```
//!
//! subject to `x₀ = s₀`, `x_{i+1} = Aᵢxᵢ + Bᵢuᵢ + cᵢ`, `Cᵢxᵢ + Dᵢuᵢ + dᵢ = 0` and
//! `Eᵢxᵢ + eᵢ = 0` (the last one also at `i = N`). The constants `κ` are zero
//! for user problems; eliminations accumulate into them so that optimal
//! values are comparable across reduction steps.
//!
//! Constraint blocks with zero rows mean "absent".

use std::fmt;

use crate::error::{ClqrError, Result};
use crate::linalg::{asymmetry, max_abs, max_abs_vec, min_eigenvalue, symmetric_part};
use crate::{Matrix, Vector};

/// Numerical thresholds shared by validation, the reductions and the oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceConfig {
    /// Relative threshold under which an eliminated row counts as dependent.
    pub rank: f64,
    /// Relative threshold for declaring a constant constraint violated.
    pub feas: f64,
    /// Relative slack for positive semi-definiteness checks.
    pub psd: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { rank: 1e-10, feas: 1e-9, psd: 1e-9 }
    }
}

impl ToleranceConfig {
    /// `τ_psd · (1 + max|entry|)`.
    pub fn psd_threshold(&self, m: &Matrix) -> f64 {
        self.psd * (1.0 + max_abs(m))
    }
}

/// Quadratic stage cost `½xᵀQx + ½uᵀRu + xᵀMu + qᵀx + rᵀu + κ`.
#[derive(Clone, Debug, PartialEq)]
pub struct StageCost {
    pub state: Matrix,
    pub control: Matrix,
    pub cross: Matrix,
    pub state_linear: Vector,
    pub control_linear: Vector,
    pub constant: f64,
}

/// `x_{i+1} = A x + B u + c`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dynamics {
    pub state: Matrix,
    pub control: Matrix,
    pub offset: Vector,
}

/// `C x + D u + d = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedConstraint {
    pub state: Matrix,
    pub control: Matrix,
    pub offset: Vector,
}

impl MixedConstraint {
    pub fn empty(n: usize, m: usize) -> Self {
        Self { state: Matrix::zeros(0, n), control: Matrix::zeros(0, m), offset: Vector::zeros(0) }
    }

    pub fn rows(&self) -> usize {
        self.offset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows() == 0
    }
}

/// `E x + e = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateConstraint {
    pub state: Matrix,
    pub offset: Vector,
}

impl StateConstraint {
    pub fn empty(n: usize) -> Self {
        Self { state: Matrix::zeros(0, n), offset: Vector::zeros(0) }
    }

    pub fn rows(&self) -> usize {
        self.offset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows() == 0
    }

    /// Appends rows below the existing ones.
    pub fn append(&mut self, state: &Matrix, offset: &Vector) {
        self.state = vstack(&self.state, state);
        self.offset = vstack_vec(&self.offset, offset);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StageData {
    pub cost: StageCost,
    pub dynamics: Dynamics,
    pub mixed: MixedConstraint,
    pub state_only: StateConstraint,
}

impl StageData {
    /// A stage with no equality constraints besides the dynamics.
    pub fn unconstrained(cost: StageCost, dynamics: Dynamics) -> Self {
        let n = cost.state.nrows();
        let m = cost.control.nrows();
        Self { cost, dynamics, mixed: MixedConstraint::empty(n, m), state_only: StateConstraint::empty(n) }
    }

    pub fn state_dim(&self) -> usize {
        self.cost.state.nrows()
    }

    pub fn control_dim(&self) -> usize {
        self.cost.control.nrows()
    }

    pub fn next_state_dim(&self) -> usize {
        self.dynamics.offset.len()
    }

    /// `[[Q, M], [Mᵀ, R]]`.
    pub fn joint_cost(&self) -> Matrix {
        let n = self.state_dim();
        let m = self.control_dim();
        let mut h = Matrix::zeros(n + m, n + m);
        h.view_mut((0, 0), (n, n)).copy_from(&self.cost.state);
        h.view_mut((0, n), (n, m)).copy_from(&self.cost.cross);
        h.view_mut((n, 0), (m, n)).copy_from(&self.cost.cross.transpose());
        h.view_mut((n, n), (m, m)).copy_from(&self.cost.control);
        h
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TerminalData {
    pub state: Matrix,
    pub state_linear: Vector,
    pub constant: f64,
    pub state_only: StateConstraint,
}

impl TerminalData {
    pub fn state_dim(&self) -> usize {
        self.state.nrows()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClqrProblem {
    pub initial_state: Vector,
    pub stages: Vec<StageData>,
    pub terminal: TerminalData,
}

impl ClqrProblem {
    pub fn num_stages(&self) -> usize {
        self.stages.len()
    }

    /// State dimension at time `i ∈ 0..=N`.
    pub fn state_dim(&self, i: usize) -> usize {
        if i < self.stages.len() {
            self.stages[i].state_dim()
        } else {
            self.terminal.state_dim()
        }
    }

    pub fn control_dim(&self, i: usize) -> usize {
        self.stages[i].control_dim()
    }

    pub fn state_dims(&self) -> Vec<usize> {
        (0..=self.num_stages()).map(|i| self.state_dim(i)).collect()
    }

    pub fn control_dims(&self) -> Vec<usize> {
        self.stages.iter().map(StageData::control_dim).collect()
    }

    pub fn total_state_dim(&self) -> usize {
        self.state_dims().iter().sum()
    }

    /// State-only block at time `i ∈ 0..=N`.
    pub fn state_constraint(&self, i: usize) -> &StateConstraint {
        if i < self.stages.len() {
            &self.stages[i].state_only
        } else {
            &self.terminal.state_only
        }
    }

    pub fn state_constraint_mut(&mut self, i: usize) -> &mut StateConstraint {
        if i < self.stages.len() {
            &mut self.stages[i].state_only
        } else {
            &mut self.terminal.state_only
        }
    }

    pub fn mixed_rows(&self) -> usize {
        self.stages.iter().map(|s| s.mixed.rows()).sum()
    }

    pub fn state_only_rows(&self) -> usize {
        (0..=self.num_stages()).map(|i| self.state_constraint(i).rows()).sum()
    }

    /// True when only the dynamics and the initial condition constrain the problem.
    pub fn is_unconstrained(&self) -> bool {
        self.mixed_rows() == 0 && self.state_only_rows() == 0
    }

    /// Replaces `Q`, `R` (and `Q_N`) by their symmetric parts, returning the
    /// largest relative asymmetry seen.
    pub fn symmetrize(&mut self) -> f64 {
        let mut worst = 0.0_f64;
        let mut fix = |m: &mut Matrix| {
            let rel = asymmetry(m) / (1.0 + max_abs(m));
            worst = worst.max(rel);
            *m = symmetric_part(m);
        };
        for s in &mut self.stages {
            fix(&mut s.cost.state);
            fix(&mut s.cost.control);
        }
        fix(&mut self.terminal.state);
        worst
    }

    /// Checks every block against the declared dimensions.
    pub fn check_dimensions(&self) -> Result<()> {
        let violations: Vec<_> = self.dimension_violations();
        match violations.first() {
            None => Ok(()),
            Some(v) => Err(ClqrError::Dimension(v.to_string())),
        }
    }

    fn dimension_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut check = |loc: Location, what: &str, got: (usize, usize), want: (usize, usize)| {
            if got != want {
                out.push(Violation {
                    location: loc,
                    kind: ViolationKind::Dimension,
                    measured: f64::NAN,
                    message: format!("{what} is {}x{}, expected {}x{}", got.0, got.1, want.0, want.1),
                });
            }
        };
        let n0 = self.state_dim(0);
        check(Location::Initial, "s0", (self.initial_state.len(), 1), (n0, 1));
        for (i, s) in self.stages.iter().enumerate() {
            let loc = Location::Stage(i);
            let n = s.cost.state.nrows();
            let m = s.cost.control.nrows();
            let next = self.state_dim(i + 1);
            let t = s.mixed.offset.len();
            let r = s.state_only.offset.len();
            check(loc, "Q", s.cost.state.shape(), (n, n));
            check(loc, "R", s.cost.control.shape(), (m, m));
            check(loc, "M", s.cost.cross.shape(), (n, m));
            check(loc, "q", (s.cost.state_linear.len(), 1), (n, 1));
            check(loc, "r", (s.cost.control_linear.len(), 1), (m, 1));
            check(loc, "A", s.dynamics.state.shape(), (next, n));
            check(loc, "B", s.dynamics.control.shape(), (next, m));
            check(loc, "c", (s.dynamics.offset.len(), 1), (next, 1));
            check(loc, "C", s.mixed.state.shape(), (t, n));
            check(loc, "D", s.mixed.control.shape(), (t, m));
            check(loc, "E", s.state_only.state.shape(), (r, n));
        }
        let n = self.terminal.state.nrows();
        let r = self.terminal.state_only.offset.len();
        check(Location::Terminal, "Q", self.terminal.state.shape(), (n, n));
        check(Location::Terminal, "q", (self.terminal.state_linear.len(), 1), (n, 1));
        check(Location::Terminal, "E", self.terminal.state_only.state.shape(), (r, n));
        out
    }

    fn all_finite(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut check = |loc: Location, what: &str, vals: &[f64]| {
            if vals.iter().any(|v| !v.is_finite()) {
                out.push(Violation {
                    location: loc,
                    kind: ViolationKind::NonFinite,
                    measured: f64::NAN,
                    message: format!("{what} has non-finite entries"),
                });
            }
        };
        check(Location::Initial, "s0", self.initial_state.as_slice());
        for (i, s) in self.stages.iter().enumerate() {
            let loc = Location::Stage(i);
            check(loc, "Q", s.cost.state.as_slice());
            check(loc, "R", s.cost.control.as_slice());
            check(loc, "M", s.cost.cross.as_slice());
            check(loc, "q", s.cost.state_linear.as_slice());
            check(loc, "r", s.cost.control_linear.as_slice());
            check(loc, "A", s.dynamics.state.as_slice());
            check(loc, "B", s.dynamics.control.as_slice());
            check(loc, "c", s.dynamics.offset.as_slice());
            check(loc, "C", s.mixed.state.as_slice());
            check(loc, "D", s.mixed.control.as_slice());
            check(loc, "d", s.mixed.offset.as_slice());
            check(loc, "E", s.state_only.state.as_slice());
            check(loc, "e", s.state_only.offset.as_slice());
        }
        let t = &self.terminal;
        check(Location::Terminal, "Q", t.state.as_slice());
        check(Location::Terminal, "q", t.state_linear.as_slice());
        check(Location::Terminal, "E", t.state_only.state.as_slice());
        check(Location::Terminal, "e", t.state_only.offset.as_slice());
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Initial,
    Stage(usize),
    Terminal,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Initial => write!(f, "initial state"),
            Location::Stage(i) => write!(f, "stage {i}"),
            Location::Terminal => write!(f, "terminal"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    Dimension,
    NonFinite,
    Asymmetric,
    ControlCostNotPositiveDefinite,
    JointCostNotPsd,
    TerminalCostNotPsd,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub location: Location,
    pub kind: ViolationKind,
    /// Minimum eigenvalue or asymmetry, `NaN` for structural violations.
    pub measured: f64,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Lists every dimension, finiteness, symmetry and regularity violation.
///
/// Regularity means `R ≻ 0` and `[[Q, M], [Mᵀ, R]] ⪰ 0` at every stage and
/// `Q_N ⪰ 0`, each up to the relative PSD tolerance.
pub fn validate(p: &ClqrProblem, tol: &ToleranceConfig) -> Vec<Violation> {
    let mut out = p.dimension_violations();
    if !out.is_empty() {
        return out;
    }
    out.extend(p.all_finite());
    if !out.is_empty() {
        return out;
    }

    let mut sym = |loc: Location, what: &str, m: &Matrix| -> bool {
        let rel = asymmetry(m) / (1.0 + max_abs(m));
        if rel > 1e-9 {
            out.push(Violation {
                location: loc,
                kind: ViolationKind::Asymmetric,
                measured: rel,
                message: format!("{what} is not symmetric (relative asymmetry {rel:e})"),
            });
            false
        } else {
            true
        }
    };
    let mut symmetric = true;
    for (i, s) in p.stages.iter().enumerate() {
        symmetric &= sym(Location::Stage(i), "Q", &s.cost.state);
        symmetric &= sym(Location::Stage(i), "R", &s.cost.control);
    }
    symmetric &= sym(Location::Terminal, "Q", &p.terminal.state);
    if !symmetric {
        return out;
    }

    for (i, s) in p.stages.iter().enumerate() {
        let loc = Location::Stage(i);
        let r = symmetric_part(&s.cost.control);
        let r_min = min_eigenvalue(&r).unwrap_or(f64::NAN);
        if r_min.is_nan() || r_min <= 0.0 {
            out.push(Violation {
                location: loc,
                kind: ViolationKind::ControlCostNotPositiveDefinite,
                measured: r_min,
                message: format!("R not positive definite, min eig {r_min}"),
            });
        }
        let joint = symmetric_part(&s.joint_cost());
        let j_min = min_eigenvalue(&joint).unwrap_or(f64::NAN);
        if j_min < -tol.psd_threshold(&joint) || j_min.is_nan() {
            out.push(Violation {
                location: loc,
                kind: ViolationKind::JointCostNotPsd,
                measured: j_min,
                message: format!("joint cost [[Q, M], [Mᵀ, R]] not positive semi-definite, min eig {j_min}"),
            });
        }
    }
    let q = symmetric_part(&p.terminal.state);
    let q_min = min_eigenvalue(&q).unwrap_or(f64::NAN);
    if q_min < -tol.psd_threshold(&q) || q_min.is_nan() {
        out.push(Violation {
            location: Location::Terminal,
            kind: ViolationKind::TerminalCostNotPsd,
            measured: q_min,
            message: format!("terminal Q not positive semi-definite, min eig {q_min}"),
        });
    }
    out
}

fn check_trajectory(p: &ClqrProblem, x: &[Vector], u: &[Vector]) -> Result<()> {
    let n = p.num_stages();
    if x.len() != n + 1 || u.len() != n {
        return Err(ClqrError::Dimension(format!(
            "trajectory has {} states and {} controls for {n} stages",
            x.len(),
            u.len()
        )));
    }
    for (i, xi) in x.iter().enumerate() {
        if xi.len() != p.state_dim(i) {
            return Err(ClqrError::Dimension(format!("x[{i}] has length {}, expected {}", xi.len(), p.state_dim(i))));
        }
    }
    for (i, ui) in u.iter().enumerate() {
        if ui.len() != p.control_dim(i) {
            return Err(ClqrError::Dimension(format!("u[{i}] has length {}, expected {}", ui.len(), p.control_dim(i))));
        }
    }
    Ok(())
}

pub fn stage_cost(s: &StageData, x: &Vector, u: &Vector) -> f64 {
    let c = &s.cost;
    0.5 * x.dot(&(&c.state * x)) + 0.5 * u.dot(&(&c.control * u)) + x.dot(&(&c.cross * u))
        + c.state_linear.dot(x)
        + c.control_linear.dot(u)
        + c.constant
}

pub fn terminal_cost(t: &TerminalData, x: &Vector) -> f64 {
    0.5 * x.dot(&(&t.state * x)) + t.state_linear.dot(x) + t.constant
}

/// Full objective of a trajectory, constants included.
pub fn objective_value(p: &ClqrProblem, x: &[Vector], u: &[Vector]) -> Result<f64> {
    check_trajectory(p, x, u)?;
    let running: f64 = p.stages.iter().enumerate().map(|(i, s)| stage_cost(s, &x[i], &u[i])).sum();
    Ok(running + terminal_cost(&p.terminal, &x[p.num_stages()]))
}

/// Lagrange multipliers, one block per constraint family and stage.
///
/// The Lagrangian is `f + λ₀ᵀ(x₀ − s₀) + Σ λᵢᵀ(Aᵢxᵢ + Bᵢuᵢ + cᵢ − x_{i+1})
/// + Σ μᵢᵀ(Cᵢxᵢ + Dᵢuᵢ + dᵢ) + Σ νᵢᵀ(Eᵢxᵢ + eᵢ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Multipliers {
    pub initial: Vector,
    pub dynamics: Vec<Vector>,
    pub mixed: Vec<Vector>,
    pub state_only: Vec<Vector>,
}

impl Multipliers {
    pub fn zeros(p: &ClqrProblem) -> Self {
        Self {
            initial: Vector::zeros(p.state_dim(0)),
            dynamics: p.stages.iter().map(|s| Vector::zeros(s.next_state_dim())).collect(),
            mixed: p.stages.iter().map(|s| Vector::zeros(s.mixed.rows())).collect(),
            state_only: (0..=p.num_stages()).map(|i| Vector::zeros(p.state_constraint(i).rows())).collect(),
        }
    }
}

/// Infinity norms of constraint violations and of the Lagrangian gradient.
/// `dynamics` includes the initial condition.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ResidualReport {
    pub dynamics: f64,
    pub mixed: f64,
    pub state_only: f64,
    pub stationarity: f64,
}

impl ResidualReport {
    pub fn max_primal(&self) -> f64 {
        self.dynamics.max(self.mixed).max(self.state_only)
    }

    pub fn max(&self) -> f64 {
        self.max_primal().max(self.stationarity)
    }
}

/// Constraint violations only; `stationarity` is left at zero.
pub fn primal_residuals(p: &ClqrProblem, x: &[Vector], u: &[Vector]) -> Result<ResidualReport> {
    check_trajectory(p, x, u)?;
    let mut rep = ResidualReport { dynamics: max_abs_vec(&(&x[0] - &p.initial_state)), ..Default::default() };
    for (i, s) in p.stages.iter().enumerate() {
        let dynamics = &s.dynamics.state * &x[i] + &s.dynamics.control * &u[i] + &s.dynamics.offset - &x[i + 1];
        rep.dynamics = rep.dynamics.max(max_abs_vec(&dynamics));
        let mixed = &s.mixed.state * &x[i] + &s.mixed.control * &u[i] + &s.mixed.offset;
        rep.mixed = rep.mixed.max(max_abs_vec(&mixed));
    }
    for (i, xi) in x.iter().enumerate() {
        let e = p.state_constraint(i);
        rep.state_only = rep.state_only.max(max_abs_vec(&(&e.state * xi + &e.offset)));
    }
    Ok(rep)
}

pub fn kkt_residuals(p: &ClqrProblem, x: &[Vector], u: &[Vector], lambda: &Multipliers) -> Result<ResidualReport> {
    let mut rep = primal_residuals(p, x, u)?;
    let n = p.num_stages();
    let sized = lambda.initial.len() == p.state_dim(0)
        && lambda.dynamics.len() == n
        && lambda.mixed.len() == n
        && lambda.state_only.len() == n + 1
        && p.stages.iter().enumerate().all(|(i, s)| {
            lambda.dynamics[i].len() == s.next_state_dim() && lambda.mixed[i].len() == s.mixed.rows()
        })
        && (0..=n).all(|i| lambda.state_only[i].len() == p.state_constraint(i).rows());
    if !sized {
        return Err(ClqrError::Dimension("multiplier blocks do not match the constraint rows".into()));
    }

    let mut worst = 0.0_f64;
    for (i, s) in p.stages.iter().enumerate() {
        let c = &s.cost;
        let mut gx = &c.state * &x[i] + &c.cross * &u[i] + &c.state_linear
            + s.dynamics.state.tr_mul(&lambda.dynamics[i])
            + s.mixed.state.tr_mul(&lambda.mixed[i])
            + s.state_only.state.tr_mul(&lambda.state_only[i]);
        if i == 0 {
            gx += &lambda.initial;
        } else {
            gx -= &lambda.dynamics[i - 1];
        }
        let gu = c.cross.tr_mul(&x[i]) + &c.control * &u[i] + &c.control_linear
            + s.dynamics.control.tr_mul(&lambda.dynamics[i])
            + s.mixed.control.tr_mul(&lambda.mixed[i]);
        worst = worst.max(max_abs_vec(&gx)).max(max_abs_vec(&gu));
    }
    let t = &p.terminal;
    let mut gx = &t.state * &x[n] + &t.state_linear + t.state_only.state.tr_mul(&lambda.state_only[n]);
    if n == 0 {
        gx += &lambda.initial;
    } else {
        gx -= &lambda.dynamics[n - 1];
    }
    rep.stationarity = worst.max(max_abs_vec(&gx));
    Ok(rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// `vᵀE ≈ 0` while `vᵀe ≠ 0` for the state-only rows at `stage`.
    DependentStateRows,
    /// The state-only rows at stage 0 disagree with `s₀`.
    InitialStateMismatch,
    /// A combination of stacked constraint rows with zero left-hand side.
    StackedRows,
}

/// Certificate of infeasibility.
#[derive(Clone, Debug, PartialEq)]
pub struct InfeasibilityWitness {
    pub stage: usize,
    pub kind: WitnessKind,
    /// Row combination `v` (for stacked rows: over all equality rows).
    pub coefficients: Vector,
    /// The nonzero constant `vᵀe` the combination leaves behind.
    pub residual: f64,
}

impl fmt::Display for InfeasibilityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            WitnessKind::DependentStateRows => "dependent state-only rows",
            WitnessKind::InitialStateMismatch => "state-only rows contradict the initial state",
            WitnessKind::StackedRows => "dependent stacked constraint rows",
        };
        write!(f, "stage {}: {kind}, residual {:e}", self.stage, self.residual)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    pub status: Status,
    /// `N + 1` states; empty when infeasible.
    pub x: Vec<Vector>,
    /// `N` controls; empty when infeasible.
    pub u: Vec<Vector>,
    /// `NaN` when infeasible.
    pub objective: f64,
    pub residuals: ResidualReport,
    pub witness: Option<InfeasibilityWitness>,
}

impl SolveOutcome {
    pub fn infeasible(witness: InfeasibilityWitness) -> Self {
        Self {
            status: Status::Infeasible,
            x: Vec::new(),
            u: Vec::new(),
            objective: f64::NAN,
            residuals: ResidualReport::default(),
            witness: Some(witness),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

pub(crate) fn vstack(top: &Matrix, bottom: &Matrix) -> Matrix {
    debug_assert_eq!(top.ncols(), bottom.ncols());
    let mut out = Matrix::zeros(top.nrows() + bottom.nrows(), top.ncols());
    out.view_mut((0, 0), top.shape()).copy_from(top);
    out.view_mut((top.nrows(), 0), bottom.shape()).copy_from(bottom);
    out
}

pub(crate) fn vstack_vec(top: &Vector, bottom: &Vector) -> Vector {
    let mut out = Vector::zeros(top.len() + bottom.len());
    out.rows_mut(0, top.len()).copy_from(top);
    out.rows_mut(top.len(), bottom.len()).copy_from(bottom);
    out
}

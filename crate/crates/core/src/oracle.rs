//! Dense reference solver.
//!
//! Stacks the whole problem into one equality-constrained QP over
//! `z = (x₀, u₀, x₁, …, x_N)` and solves it with the nullspace method on a
//! complete orthogonal decomposition of the constraint matrix. Redundant rows are
//! harmless; inconsistent rows are reported with a left-nullspace witness.
//!
//! Nothing here depends on the reduction code. Cost is cubic in the stacked
//! dimension, so this is meant for problems up to a few thousand variables.

use nalgebra::{Cholesky, ColPivQR, QR};

use crate::error::{ClqrError, Result};
use crate::linalg::{max_abs_vec, min_eigenvalue, symmetric_part};
use crate::problem::{
    kkt_residuals, objective_value, ClqrProblem, InfeasibilityWitness, Multipliers, SolveOutcome, Status,
    ToleranceConfig, WitnessKind,
};
use crate::{Matrix, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowFamily {
    Initial,
    Dynamics,
    Mixed,
    StateOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RowTag {
    pub family: RowFamily,
    pub stage: usize,
}

/// `min ½zᵀHz + gᵀz + κ  s.t.  A z + b = 0`.
#[derive(Clone, Debug)]
pub struct StackedQp {
    pub hessian: Matrix,
    pub gradient: Vector,
    pub constant: f64,
    pub constraints: Matrix,
    pub constraint_offset: Vector,
    /// Column offset of `xᵢ` for `i ∈ 0..=N`.
    pub state_offsets: Vec<usize>,
    /// Column offset of `uᵢ` for `i < N`.
    pub control_offsets: Vec<usize>,
    pub rows: Vec<RowTag>,
}

impl StackedQp {
    pub fn num_vars(&self) -> usize {
        self.hessian.nrows()
    }

    pub fn num_rows(&self) -> usize {
        self.constraints.nrows()
    }

    pub fn objective(&self, z: &Vector) -> f64 {
        0.5 * z.dot(&(&self.hessian * z)) + self.gradient.dot(z) + self.constant
    }

    pub fn stack_trajectory(&self, x: &[Vector], u: &[Vector]) -> Vector {
        let mut z = Vector::zeros(self.num_vars());
        for (xi, &o) in x.iter().zip(&self.state_offsets) {
            z.rows_mut(o, xi.len()).copy_from(xi);
        }
        for (ui, &o) in u.iter().zip(&self.control_offsets) {
            z.rows_mut(o, ui.len()).copy_from(ui);
        }
        z
    }

    fn split(&self, p: &ClqrProblem, z: &Vector) -> (Vec<Vector>, Vec<Vector>) {
        let x = (0..=p.num_stages()).map(|i| z.rows(self.state_offsets[i], p.state_dim(i)).into_owned()).collect();
        let u = (0..p.num_stages()).map(|i| z.rows(self.control_offsets[i], p.control_dim(i)).into_owned()).collect();
        (x, u)
    }

    fn split_multipliers(&self, p: &ClqrProblem, lambda: &Vector) -> Multipliers {
        let mut out = Multipliers::zeros(p);
        let mut within = 0;
        for (row, tag) in self.rows.iter().enumerate() {
            if row > 0 && self.rows[row - 1] != *tag {
                within = 0;
            }
            let block = match tag.family {
                RowFamily::Initial => &mut out.initial,
                RowFamily::Dynamics => &mut out.dynamics[tag.stage],
                RowFamily::Mixed => &mut out.mixed[tag.stage],
                RowFamily::StateOnly => &mut out.state_only[tag.stage],
            };
            block[within] = lambda[row];
            within += 1;
        }
        out
    }
}

/// Transcribes the problem into a single stacked QP.
pub fn stack(p: &ClqrProblem) -> StackedQp {
    let n_stages = p.num_stages();
    let mut state_offsets = Vec::with_capacity(n_stages + 1);
    let mut control_offsets = Vec::with_capacity(n_stages);
    let mut cursor = 0;
    for i in 0..n_stages {
        state_offsets.push(cursor);
        cursor += p.state_dim(i);
        control_offsets.push(cursor);
        cursor += p.control_dim(i);
    }
    state_offsets.push(cursor);
    let nvars = cursor + p.state_dim(n_stages);

    let mut h = Matrix::zeros(nvars, nvars);
    let mut g = Vector::zeros(nvars);
    let mut constant = p.terminal.constant;
    for (i, s) in p.stages.iter().enumerate() {
        let (xo, uo) = (state_offsets[i], control_offsets[i]);
        let (n, m) = (s.state_dim(), s.control_dim());
        h.view_mut((xo, xo), (n, n)).copy_from(&s.cost.state);
        h.view_mut((uo, uo), (m, m)).copy_from(&s.cost.control);
        h.view_mut((xo, uo), (n, m)).copy_from(&s.cost.cross);
        h.view_mut((uo, xo), (m, n)).copy_from(&s.cost.cross.transpose());
        g.rows_mut(xo, n).copy_from(&s.cost.state_linear);
        g.rows_mut(uo, m).copy_from(&s.cost.control_linear);
        constant += s.cost.constant;
    }
    let xo = state_offsets[n_stages];
    let nn = p.state_dim(n_stages);
    h.view_mut((xo, xo), (nn, nn)).copy_from(&p.terminal.state);
    g.rows_mut(xo, nn).copy_from(&p.terminal.state_linear);

    let nrows = p.state_dim(0)
        + p.stages.iter().map(|s| s.next_state_dim() + s.mixed.rows() + s.state_only.rows()).sum::<usize>()
        + p.terminal.state_only.rows();
    let mut a = Matrix::zeros(nrows, nvars);
    let mut b = Vector::zeros(nrows);
    let mut rows = Vec::with_capacity(nrows);
    let mut r = 0;

    let n0 = p.state_dim(0);
    a.view_mut((0, 0), (n0, n0)).fill_with_identity();
    b.rows_mut(0, n0).copy_from(&(-&p.initial_state));
    rows.extend(std::iter::repeat_n(RowTag { family: RowFamily::Initial, stage: 0 }, n0));
    r += n0;

    for (i, s) in p.stages.iter().enumerate() {
        let (xo, uo, xn) = (state_offsets[i], control_offsets[i], state_offsets[i + 1]);
        let (n, m, next) = (s.state_dim(), s.control_dim(), s.next_state_dim());

        a.view_mut((r, xo), (next, n)).copy_from(&s.dynamics.state);
        a.view_mut((r, uo), (next, m)).copy_from(&s.dynamics.control);
        a.view_mut((r, xn), (next, next)).copy_from(&(-Matrix::identity(next, next)));
        b.rows_mut(r, next).copy_from(&s.dynamics.offset);
        rows.extend(std::iter::repeat_n(RowTag { family: RowFamily::Dynamics, stage: i }, next));
        r += next;

        let t = s.mixed.rows();
        a.view_mut((r, xo), (t, n)).copy_from(&s.mixed.state);
        a.view_mut((r, uo), (t, m)).copy_from(&s.mixed.control);
        b.rows_mut(r, t).copy_from(&s.mixed.offset);
        rows.extend(std::iter::repeat_n(RowTag { family: RowFamily::Mixed, stage: i }, t));
        r += t;

        let k = s.state_only.rows();
        a.view_mut((r, xo), (k, n)).copy_from(&s.state_only.state);
        b.rows_mut(r, k).copy_from(&s.state_only.offset);
        rows.extend(std::iter::repeat_n(RowTag { family: RowFamily::StateOnly, stage: i }, k));
        r += k;
    }
    let k = p.terminal.state_only.rows();
    a.view_mut((r, xo), (k, nn)).copy_from(&p.terminal.state_only.state);
    b.rows_mut(r, k).copy_from(&p.terminal.state_only.offset);
    rows.extend(std::iter::repeat_n(RowTag { family: RowFamily::StateOnly, stage: n_stages }, k));

    StackedQp {
        hessian: h,
        gradient: g,
        constant,
        constraints: a,
        constraint_offset: b,
        state_offsets,
        control_offsets,
        rows,
    }
}

/// Solution of a stacked QP in stacked coordinates.
#[derive(Clone, Debug)]
pub enum StackedSolution {
    Optimal { z: Vector, multipliers: Vector },
    Infeasible { coefficients: Vector, residual: f64 },
}

/// Complete orthogonal decomposition `A = U T Vᵀ` with orthonormal `U`
/// (range of `A`), orthonormal `V` (row space) and invertible upper
/// triangular `T`, plus an orthonormal basis of the nullspace.
///
/// Built from two Householder QR factorizations, the first with column
/// pivoting to reveal the rank. Both are backward stable, which the
/// iterative SVD is not on strongly rank-deficient inputs.
struct ConstraintDecomposition {
    u_range: Matrix,
    t: Matrix,
    v_range: Matrix,
    v_null: Matrix,
}

fn decompose(a: &Matrix, tol_rank: f64) -> ConstraintDecomposition {
    let (rows, cols) = a.shape();
    if cols == 0 || rows == 0 {
        return ConstraintDecomposition {
            u_range: Matrix::zeros(rows, 0),
            t: Matrix::zeros(0, 0),
            v_range: Matrix::zeros(cols, 0),
            v_null: Matrix::identity(cols, cols),
        };
    }
    // Zero columns make the thin Q of Aᵀ a full basis of the column space.
    let width = rows.max(cols);
    let mut at = Matrix::zeros(cols, width);
    at.view_mut((0, 0), (cols, rows)).copy_from(&a.transpose());
    let qr = ColPivQR::new(at);
    let q = qr.q();
    let mut r = qr.r();
    let thresh = tol_rank * (1.0 + r[(0, 0)].abs());
    let rank = (0..r.nrows()).take_while(|&j| r[(j, j)].abs() > thresh).count();

    qr.p().inv_permute_columns(&mut r);
    let lower = r.view((0, 0), (rank, rows)).transpose();
    let second = QR::new(lower);
    ConstraintDecomposition {
        u_range: second.q(),
        t: second.r(),
        v_range: q.columns(0, rank).into_owned(),
        v_null: q.columns(rank, cols - rank).into_owned(),
    }
}

impl ConstraintDecomposition {
    /// Minimum-norm `z` with `A z ≈ rhs`.
    fn pseudo_solve(&self, rhs: &Vector) -> Vector {
        let coef = self.u_range.tr_mul(rhs);
        let y = self.t.solve_upper_triangular(&coef).expect("rank-revealed factor is invertible");
        &self.v_range * y
    }

    /// Minimum-norm `λ` with `Aᵀ λ ≈ rhs`.
    fn pseudo_solve_transpose(&self, rhs: &Vector) -> Vector {
        let coef = self.v_range.tr_mul(rhs);
        let y = self.t.tr_solve_upper_triangular(&coef).expect("rank-revealed factor is invertible");
        &self.u_range * y
    }
}

/// Nullspace-method solve of the stacked KKT system.
pub fn solve_kkt(qp: &StackedQp, tol: &ToleranceConfig) -> Result<StackedSolution> {
    let a = &qp.constraints;
    let b = &qp.constraint_offset;
    let dec = decompose(a, tol.rank);

    let z_p = dec.pseudo_solve(&(-b));
    let residual = a * &z_p + b;
    let res_norm = max_abs_vec(&residual);
    if res_norm > tol.feas * (1.0 + max_abs_vec(b)) {
        let scale = res_norm;
        let coefficients = residual / scale;
        let leftover = coefficients.dot(b);
        return Ok(StackedSolution::Infeasible { coefficients, residual: leftover });
    }

    let z_null = &dec.v_null;
    let reduced = symmetric_part(&(z_null.transpose() * &qp.hessian * z_null));
    let rhs = z_null.tr_mul(&(&qp.hessian * &z_p + &qp.gradient));
    let w = if reduced.nrows() == 0 {
        Vector::zeros(0)
    } else {
        let scale = reduced.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let min_eig = min_eigenvalue(&reduced)?;
        if min_eig <= tol.psd * (1.0 + scale) {
            return Err(ClqrError::SingularReducedHessian { min_eig });
        }
        let chol = Cholesky::new(reduced).ok_or(ClqrError::SingularReducedHessian { min_eig })?;
        -chol.solve(&rhs)
    };
    let z = z_p + z_null * w;
    let grad = &qp.hessian * &z + &qp.gradient;
    let multipliers = -dec.pseudo_solve_transpose(&grad);
    Ok(StackedSolution::Optimal { z, multipliers })
}

/// Reference solution together with its multipliers.
#[derive(Clone, Debug)]
pub struct OracleSolution {
    pub outcome: SolveOutcome,
    pub multipliers: Option<Multipliers>,
}

/// Dense solve of the stacked problem; residuals come from [`kkt_residuals`].
pub fn solve(p: &ClqrProblem, tol: &ToleranceConfig) -> Result<OracleSolution> {
    p.check_dimensions()?;
    let qp = stack(p);
    match solve_kkt(&qp, tol)? {
        StackedSolution::Infeasible { coefficients, residual } => {
            let worst = coefficients.iamax();
            let stage = if qp.rows.is_empty() { 0 } else { qp.rows[worst].stage };
            Ok(OracleSolution {
                outcome: SolveOutcome::infeasible(InfeasibilityWitness {
                    stage,
                    kind: WitnessKind::StackedRows,
                    coefficients,
                    residual,
                }),
                multipliers: None,
            })
        }
        StackedSolution::Optimal { z, multipliers } => {
            let (mut x, u) = qp.split(p, &z);
            x[0] = p.initial_state.clone();
            let lambda = qp.split_multipliers(p, &multipliers);
            let residuals = kkt_residuals(p, &x, &u, &lambda)?;
            let objective = objective_value(p, &x, &u)?;
            Ok(OracleSolution {
                outcome: SolveOutcome { status: Status::Optimal, x, u, objective, residuals, witness: None },
                multipliers: Some(lambda),
            })
        }
    }
}

/// Optimal value, or `None` when the constraints are inconsistent.
pub fn optimal_value(p: &ClqrProblem, tol: &ToleranceConfig) -> Result<Option<f64>> {
    let sol = solve(p, tol)?;
    Ok(sol.outcome.is_optimal().then_some(sol.outcome.objective))
}

/// Least-squares multipliers for a given primal trajectory.
pub fn estimate_multipliers(p: &ClqrProblem, x: &[Vector], u: &[Vector], tol: &ToleranceConfig) -> Result<Multipliers> {
    p.check_dimensions()?;
    let qp = stack(p);
    let z = qp.stack_trajectory(x, u);
    let dec = decompose(&qp.constraints, tol.rank);
    let grad = &qp.hessian * &z + &qp.gradient;
    Ok(qp.split_multipliers(p, &(-dec.pseudo_solve_transpose(&grad))))
}

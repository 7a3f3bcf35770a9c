//! The individual reductions.
//!
//! Every change of variables goes through [`substitute_stage`] (or
//! [`substitute_terminal`]): with `(x, u) = S (x', u') + b` the cost becomes
//! `Sᵀ H S`, `Sᵀ (H b + g)`, `κ + ½ bᵀ H b + gᵀ b` for the joint Hessian `H`
//! and gradient `g`, and every linear map acting on `(x, u)` is composed with
//! the substitution. Congruence keeps the joint cost positive semi-definite
//! and the control block positive definite whenever `S` restricted to the
//! surviving controls has full column rank.

use crate::error::{ClqrError, Result};
use crate::linalg::{echelon_factor, max_abs_vec, row_rank_normalize, symmetric_part};
use crate::problem::{
    vstack, vstack_vec, ClqrProblem, InfeasibilityWitness, MixedConstraint, StageData, StateConstraint,
    TerminalData, ToleranceConfig, WitnessKind,
};
use crate::{Matrix, Vector};

use super::ledger::AffineMap;

fn hstack(left: &Matrix, right: &Matrix) -> Matrix {
    debug_assert_eq!(left.nrows(), right.nrows());
    let mut out = Matrix::zeros(left.nrows(), left.ncols() + right.ncols());
    out.view_mut((0, 0), left.shape()).copy_from(left);
    out.view_mut((0, left.ncols()), right.shape()).copy_from(right);
    out
}

fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut(a.shape(), b.shape()).copy_from(b);
    out
}

/// Rewrites a stage over new variables `(x', u')` of sizes `(n_new, m_new)`.
///
/// States must map to states only: the block of `S` taking `u'` to `x` is zero.
pub fn substitute_stage(stage: &mut StageData, map: &AffineMap, n_new: usize, m_new: usize) {
    let n = stage.state_dim();
    let m = stage.control_dim();
    let s = &map.linear;
    let b = &map.offset;
    debug_assert_eq!(s.shape(), (n + m, n_new + m_new));
    debug_assert!(s.view((0, n_new), (n, m_new)).iter().all(|v| *v == 0.0));

    let h = stage.joint_cost();
    let g = vstack_vec(&stage.cost.state_linear, &stage.cost.control_linear);
    let hb = &h * b;
    let h_new = symmetric_part(&(s.transpose() * &h * s));
    let g_new = s.tr_mul(&(&hb + &g));
    let cost = &mut stage.cost;
    cost.constant += 0.5 * b.dot(&hb) + g.dot(b);
    cost.state = h_new.view((0, 0), (n_new, n_new)).into_owned();
    cost.cross = h_new.view((0, n_new), (n_new, m_new)).into_owned();
    cost.control = h_new.view((n_new, n_new), (m_new, m_new)).into_owned();
    cost.state_linear = g_new.rows(0, n_new).into_owned();
    cost.control_linear = g_new.rows(n_new, m_new).into_owned();

    let dynamics = &mut stage.dynamics;
    let ab = hstack(&dynamics.state, &dynamics.control);
    let ab_new = &ab * s;
    dynamics.offset += &ab * b;
    dynamics.state = ab_new.columns(0, n_new).into_owned();
    dynamics.control = ab_new.columns(n_new, m_new).into_owned();

    let mixed = &mut stage.mixed;
    let cd = hstack(&mixed.state, &mixed.control);
    let cd_new = &cd * s;
    mixed.offset += &cd * b;
    mixed.state = cd_new.columns(0, n_new).into_owned();
    mixed.control = cd_new.columns(n_new, m_new).into_owned();

    let state_only = &mut stage.state_only;
    state_only.offset += &state_only.state * b.rows(0, n);
    state_only.state = &state_only.state * s.view((0, 0), (n, n_new));
}

/// Rewrites the terminal block over `x' ` with `x = S x' + b`.
pub fn substitute_terminal(terminal: &mut TerminalData, map: &AffineMap) {
    let s = &map.linear;
    let b = &map.offset;
    let qb = &terminal.state * b;
    terminal.constant += 0.5 * b.dot(&qb) + terminal.state_linear.dot(b);
    terminal.state_linear = s.tr_mul(&(&qb + &terminal.state_linear));
    terminal.state = symmetric_part(&(s.transpose() * &terminal.state * s));
    terminal.state_only.offset += &terminal.state_only.state * b;
    terminal.state_only.state = &terminal.state_only.state * s;
}

/// Drops dependent mixed rows, moving `vᵀ(C x + d) = 0` into the state-only
/// block for each of them. Returns the number of rows moved.
pub fn normalize_mixed_rank(stage: &mut StageData, tol: &ToleranceConfig) -> Result<usize> {
    if stage.mixed.is_empty() {
        return Ok(0);
    }
    let mixed = &stage.mixed;
    let norm = row_rank_normalize(&mixed.control, &mixed.state, &mixed.offset, tol.rank)?;
    if norm.is_full_rank() {
        return Ok(0);
    }
    let moved = norm.spawned.len();
    let spawned_state = norm.spawned_side(stage.state_dim());
    let spawned_offset = norm.spawned_rhs();
    stage.mixed = MixedConstraint {
        state: norm.select_rows(&mixed.state),
        control: norm.select_rows(&mixed.control),
        offset: norm.select_entries(&mixed.offset),
    };
    stage.state_only.append(&spawned_state, &spawned_offset);
    Ok(moved)
}

/// Brings a full-row-rank `D` to `[G I]` (or `I` when square), permuting the
/// controls if needed. Returns the permutation as a stage map, if any.
pub fn factor_mixed(stage: &mut StageData, tol: &ToleranceConfig) -> Result<Option<AffineMap>> {
    if stage.mixed.is_empty() {
        return Ok(None);
    }
    let n = stage.state_dim();
    let m = stage.control_dim();
    let fac = echelon_factor(&stage.mixed.control, tol.rank)?;
    let mixed = std::mem::replace(&mut stage.mixed, MixedConstraint::empty(n, m));
    let map = if fac.permutation.is_identity() {
        None
    } else {
        let map = AffineMap::new(block_diag(&Matrix::identity(n, n), &fac.permutation.inverse_matrix()), Vector::zeros(n + m));
        substitute_stage(stage, &map, n, m);
        Some(map)
    };
    stage.mixed = MixedConstraint {
        state: &fac.left * &mixed.state,
        control: fac.reduced_form(),
        offset: &fac.left * &mixed.offset,
    };
    Ok(map)
}

/// `D = I`: `u = −C x − d`. The control slot stays as a decoupled dummy with
/// unit cost and no influence on the dynamics.
pub fn eliminate_mixed_square(stage: &mut StageData) -> Result<AffineMap> {
    let n = stage.state_dim();
    let m = stage.control_dim();
    let mixed = &stage.mixed;
    if mixed.rows() != m || mixed.control != Matrix::identity(m, m) {
        return Err(ClqrError::Precondition("square mixed elimination needs D = I".into()));
    }
    let mut linear = Matrix::zeros(n + m, n + m);
    linear.view_mut((0, 0), (n, n)).fill_with_identity();
    linear.view_mut((n, 0), (m, n)).copy_from(&(-&mixed.state));
    let offset = vstack_vec(&Vector::zeros(n), &(-&mixed.offset));
    let map = AffineMap::new(linear, offset);

    stage.mixed = MixedConstraint::empty(n, m);
    substitute_stage(stage, &map, n, m);
    stage.cost.control = Matrix::identity(m, m);
    Ok(map)
}

/// `D = [G I]` with fewer rows than controls: the trailing controls become
/// `w = −C x − G v − d` and only the leading `v` survive.
pub fn eliminate_mixed_rect(stage: &mut StageData) -> Result<AffineMap> {
    let n = stage.state_dim();
    let m = stage.control_dim();
    let t = stage.mixed.rows();
    if t == 0 || t >= m || stage.mixed.control.columns(m - t, t) != Matrix::identity(t, t) {
        return Err(ClqrError::Precondition("rectangular mixed elimination needs D = [G I] with fewer rows than controls".into()));
    }
    let free = m - t;
    let g = stage.mixed.control.columns(0, free).into_owned();
    let mut linear = Matrix::zeros(n + m, n + free);
    linear.view_mut((0, 0), (n + free, n + free)).fill_with_identity();
    linear.view_mut((n + free, 0), (t, n)).copy_from(&(-&stage.mixed.state));
    linear.view_mut((n + free, n), (t, free)).copy_from(&(-g));
    let offset = vstack_vec(&Vector::zeros(n + free), &(-&stage.mixed.offset));
    let map = AffineMap::new(linear, offset);

    stage.mixed = MixedConstraint::empty(n, m);
    substitute_stage(stage, &map, n, free);
    Ok(map)
}

/// Drops dependent state-only rows at time `time`, failing with a witness when
/// a dependent combination leaves a nonzero constant.
pub fn normalize_state_rank(p: &mut ClqrProblem, time: usize, tol: &ToleranceConfig) -> Result<usize> {
    let block = p.state_constraint(time);
    if block.is_empty() {
        return Ok(0);
    }
    let rows = block.rows();
    let norm = row_rank_normalize(&block.state, &Matrix::zeros(rows, 0), &block.offset, tol.rank)?;
    if let Some(bad) = norm.first_inconsistent(tol.feas) {
        return Err(ClqrError::Infeasible(Box::new(InfeasibilityWitness {
            stage: time,
            kind: WitnessKind::DependentStateRows,
            coefficients: bad.coefficients.clone(),
            residual: bad.rhs,
        })));
    }
    let dropped = norm.spawned.len();
    if dropped > 0 {
        let kept = StateConstraint { state: norm.select_rows(&block.state), offset: norm.select_entries(&block.offset) };
        *p.state_constraint_mut(time) = kept;
    }
    Ok(dropped)
}

/// Map over the stage vector `(x, u)` that changes only the state.
fn state_stage_map(p: &ClqrProblem, time: usize, state_map: &AffineMap) -> AffineMap {
    let m = if time < p.num_stages() { p.control_dim(time) } else { 0 };
    AffineMap::new(
        block_diag(&state_map.linear, &Matrix::identity(m, m)),
        vstack_vec(&state_map.offset, &Vector::zeros(m)),
    )
}

/// Applies `x_time = S x' + b` at its own stage (or terminal block).
fn substitute_state(p: &mut ClqrProblem, time: usize, state_map: &AffineMap) -> AffineMap {
    let stage_map = state_stage_map(p, time, state_map);
    let n_new = state_map.input_dim();
    if time < p.num_stages() {
        let m = p.control_dim(time);
        substitute_stage(&mut p.stages[time], &stage_map, n_new, m);
    } else {
        substitute_terminal(&mut p.terminal, state_map);
    }
    stage_map
}

/// Brings a full-row-rank `E` to `[F I]` (or `I`), permuting the state at
/// `time` if needed. The permutation also reorders the rows of the incoming
/// dynamics, or `s₀` at time 0.
pub fn factor_state(p: &mut ClqrProblem, time: usize, tol: &ToleranceConfig) -> Result<Option<AffineMap>> {
    if p.state_constraint(time).is_empty() {
        return Ok(None);
    }
    let n = p.state_dim(time);
    let block = std::mem::replace(p.state_constraint_mut(time), StateConstraint::empty(n));
    let fac = echelon_factor(&block.state, tol.rank)?;
    let map = if fac.permutation.is_identity() {
        None
    } else {
        let perm = &fac.permutation;
        let state_map = AffineMap::new(perm.inverse_matrix(), Vector::zeros(n));
        let stage_map = substitute_state(p, time, &state_map);
        if time == 0 {
            p.initial_state = perm.apply(&p.initial_state);
        } else {
            let dynamics = &mut p.stages[time - 1].dynamics;
            dynamics.state = dynamics.state.select_rows(perm.order());
            dynamics.control = dynamics.control.select_rows(perm.order());
            dynamics.offset = perm.apply(&dynamics.offset);
        }
        Some(stage_map)
    };
    *p.state_constraint_mut(time) = StateConstraint { state: fac.reduced_form(), offset: &fac.left * &block.offset };
    Ok(map)
}

/// Eliminates the trailing states constrained by `E = [F I]`:
/// `x = [I; −F] y − [0; e]`. At time 0 the result is checked against `s₀`;
/// otherwise the incoming dynamics split into new dynamics for `y` and new
/// mixed rows at the previous stage.
fn eliminate_state(p: &mut ClqrProblem, time: usize, tol: &ToleranceConfig) -> Result<AffineMap> {
    let n = p.state_dim(time);
    let block = p.state_constraint(time).clone();
    let k = block.rows();
    let free = n - k;
    let f = block.state.columns(0, free).into_owned();
    let e = block.offset.clone();

    let mut linear = Matrix::zeros(n, free);
    linear.view_mut((0, 0), (free, free)).fill_with_identity();
    linear.view_mut((free, 0), (k, free)).copy_from(&(-&f));
    let offset = vstack_vec(&Vector::zeros(free), &(-&e));
    let state_map = AffineMap::new(linear, offset);

    if time == 0 {
        let s0 = &p.initial_state;
        let residual = &block.state * s0 + &e;
        let scale = 1.0 + max_abs_vec(s0) * (1.0 + crate::linalg::max_abs(&f)) + max_abs_vec(&e);
        if max_abs_vec(&residual) > tol.feas * scale {
            let worst = residual.amax();
            return Err(ClqrError::Infeasible(Box::new(InfeasibilityWitness {
                stage: 0,
                kind: WitnessKind::InitialStateMismatch,
                coefficients: residual,
                residual: worst,
            })));
        }
        p.initial_state = s0.rows(0, free).into_owned();
    } else {
        let prev = &mut p.stages[time - 1];
        let a = &prev.dynamics.state;
        let b = &prev.dynamics.control;
        let c = &prev.dynamics.offset;
        let (a_top, a_bot) = (a.rows(0, free), a.rows(free, k));
        let (b_top, b_bot) = (b.rows(0, free), b.rows(free, k));
        let (c_top, c_bot) = (c.rows(0, free), c.rows(free, k));
        let spawned = MixedConstraint {
            state: a_bot + &f * a_top,
            control: b_bot + &f * b_top,
            offset: c_bot + &f * c_top + &e,
        };
        prev.dynamics = crate::problem::Dynamics {
            state: a_top.into_owned(),
            control: b_top.into_owned(),
            offset: c_top.into_owned(),
        };
        let mixed = &mut prev.mixed;
        mixed.state = vstack(&mixed.state, &spawned.state);
        mixed.control = vstack(&mixed.control, &spawned.control);
        mixed.offset = vstack_vec(&mixed.offset, &spawned.offset);
    }

    *p.state_constraint_mut(time) = StateConstraint::empty(n);
    Ok(substitute_state(p, time, &state_map))
}

fn trailing_identity(block: &StateConstraint, n: usize) -> bool {
    let k = block.rows();
    k <= n && block.state.columns(n - k, k) == Matrix::identity(k, k)
}

/// `E = I`: the whole state at `time` is pinned to `−e` and disappears.
pub fn eliminate_state_square(p: &mut ClqrProblem, time: usize, tol: &ToleranceConfig) -> Result<AffineMap> {
    let n = p.state_dim(time);
    let block = p.state_constraint(time);
    if block.rows() != n || !trailing_identity(block, n) {
        return Err(ClqrError::Precondition(format!("square state elimination at time {time} needs E = I")));
    }
    eliminate_state(p, time, tol)
}

/// `E = [F I]` with fewer rows than states.
pub fn eliminate_state_rect(p: &mut ClqrProblem, time: usize, tol: &ToleranceConfig) -> Result<AffineMap> {
    let n = p.state_dim(time);
    let block = p.state_constraint(time);
    if block.is_empty() || block.rows() >= n || !trailing_identity(block, n) {
        return Err(ClqrError::Precondition(format!(
            "rectangular state elimination at time {time} needs E = [F I] with fewer rows than states"
        )));
    }
    eliminate_state(p, time, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Dynamics, StageCost};

    fn m(rows: usize, cols: usize, v: &[f64]) -> Matrix {
        Matrix::from_row_slice(rows, cols, v)
    }

    fn v(x: &[f64]) -> Vector {
        Vector::from_column_slice(x)
    }

    fn stage(n: usize, mm: usize, next: usize) -> StageData {
        StageData::unconstrained(
            StageCost {
                state: Matrix::identity(n, n),
                control: Matrix::identity(mm, mm),
                cross: Matrix::zeros(n, mm),
                state_linear: Vector::zeros(n),
                control_linear: Vector::zeros(mm),
                constant: 0.0,
            },
            Dynamics { state: Matrix::identity(next, n), control: Matrix::identity(next, mm), offset: Vector::zeros(next) },
        )
    }

    #[test]
    fn square_mixed_with_zero_state_coupling() {
        let mut s = stage(1, 1, 1);
        s.cost.cross = m(1, 1, &[0.5]);
        s.cost.state_linear = v(&[1.0]);
        s.dynamics.offset = v(&[2.0]);
        s.mixed = MixedConstraint { state: m(1, 1, &[0.0]), control: m(1, 1, &[1.0]), offset: v(&[3.0]) };
        let map = eliminate_mixed_square(&mut s).unwrap();
        // u ≡ −3
        assert_eq!(map.apply(&v(&[7.0, 100.0])).as_slice(), &[7.0, -3.0]);
        assert_eq!(s.dynamics.offset, v(&[2.0 - 3.0]));
        assert_eq!(s.cost.state, m(1, 1, &[1.0]));
        // q' = q − M d
        assert_eq!(s.cost.state_linear, v(&[1.0 - 0.5 * 3.0]));
        assert_eq!(s.cost.control, m(1, 1, &[1.0]));
        assert_eq!(s.dynamics.control, m(1, 1, &[0.0]));
        assert!(s.mixed.is_empty());
        // ½ R d²
        assert_eq!(s.cost.constant, 4.5);
    }

    #[test]
    fn square_mixed_scalar_feedback() {
        let mut s = stage(1, 1, 1);
        s.dynamics.state = m(1, 1, &[2.0]);
        s.dynamics.control = m(1, 1, &[0.5]);
        s.mixed = MixedConstraint { state: m(1, 1, &[1.0]), control: m(1, 1, &[1.0]), offset: v(&[0.0]) };
        eliminate_mixed_square(&mut s).unwrap();
        assert_eq!(s.cost.state, m(1, 1, &[2.0]));
        assert_eq!(s.dynamics.state, m(1, 1, &[2.0 - 0.5]));
    }

    #[test]
    fn rect_mixed_trivial_constraint_drops_coordinates() {
        let mut s = stage(1, 2, 1);
        s.cost.control = m(2, 2, &[3.0, 1.0, 1.0, 2.0]);
        s.dynamics.control = m(1, 2, &[4.0, 5.0]);
        s.mixed = MixedConstraint { state: m(1, 1, &[0.0]), control: m(1, 2, &[0.0, 1.0]), offset: v(&[0.0]) };
        let map = eliminate_mixed_rect(&mut s).unwrap();
        assert_eq!(s.cost.control, m(1, 1, &[3.0]));
        assert_eq!(s.dynamics.control, m(1, 1, &[4.0]));
        assert_eq!(map.apply(&v(&[1.0, 2.0])).as_slice(), &[1.0, 2.0, 0.0]);
    }

    #[test]
    fn rect_mixed_control_cost_congruence() {
        let mut s = stage(1, 2, 1);
        let g = 0.75;
        s.mixed = MixedConstraint { state: m(1, 1, &[0.0]), control: m(1, 2, &[g, 1.0]), offset: v(&[0.0]) };
        eliminate_mixed_rect(&mut s).unwrap();
        assert!((s.cost.control[(0, 0)] - (1.0 + g * g)).abs() < 1e-15);
    }

    #[test]
    fn mixed_preconditions_are_checked() {
        let mut s = stage(1, 2, 1);
        s.mixed = MixedConstraint { state: m(1, 1, &[0.0]), control: m(1, 2, &[1.0, 0.0]), offset: v(&[0.0]) };
        assert!(matches!(eliminate_mixed_rect(&mut s), Err(ClqrError::Precondition(_))));
        assert!(matches!(eliminate_mixed_square(&mut s), Err(ClqrError::Precondition(_))));
    }

    #[test]
    fn factor_mixed_permutes_controls() {
        let mut s = stage(1, 2, 1);
        s.cost.control_linear = v(&[1.0, 2.0]);
        s.mixed = MixedConstraint { state: m(1, 1, &[2.0]), control: m(1, 2, &[2.0, 0.0]), offset: v(&[4.0]) };
        let map = factor_mixed(&mut s, &ToleranceConfig::default()).unwrap().expect("permutation");
        assert_eq!(s.mixed.control, m(1, 2, &[0.0, 1.0]));
        assert_eq!(s.mixed.state, m(1, 1, &[1.0]));
        assert_eq!(s.mixed.offset, v(&[2.0]));
        assert_eq!(s.cost.control_linear, v(&[2.0, 1.0]));
        assert_eq!(map.apply(&v(&[0.0, 5.0, 6.0])).as_slice(), &[0.0, 6.0, 5.0]);
    }

    #[test]
    fn normalize_mixed_moves_dependent_rows_to_state_block() {
        let mut s = stage(2, 2, 2);
        s.mixed = MixedConstraint {
            state: Matrix::identity(2, 2),
            control: m(2, 2, &[1.0, 0.0, 1.0, 0.0]),
            offset: v(&[1.0, 1.0]),
        };
        assert_eq!(normalize_mixed_rank(&mut s, &ToleranceConfig::default()).unwrap(), 1);
        assert_eq!(s.mixed.rows(), 1);
        assert_eq!(s.state_only.state, m(1, 2, &[-1.0, 1.0]));
        assert_eq!(s.state_only.offset, v(&[0.0]));
    }

    fn two_stage_chain() -> ClqrProblem {
        ClqrProblem {
            initial_state: v(&[1.0, 2.0]),
            stages: vec![stage(2, 1, 2)],
            terminal: TerminalData {
                state: m(2, 2, &[2.0, 0.5, 0.5, 3.0]),
                state_linear: v(&[0.1, 0.2]),
                constant: 0.0,
                state_only: StateConstraint { state: m(1, 2, &[0.0, 1.0]), offset: v(&[-0.5]) },
            },
        }
    }

    #[test]
    fn rect_state_elimination_pins_trailing_state() {
        let mut p = two_stage_chain();
        let map = eliminate_state_rect(&mut p, 1, &ToleranceConfig::default()).unwrap();
        assert_eq!(p.terminal.state, m(1, 1, &[2.0]));
        // x = (y, 0.5)
        assert_eq!(map.apply(&v(&[3.0])).as_slice(), &[3.0, 0.5]);
        // q' = q₁ + Q₁₂·0.5
        assert!((p.terminal.state_linear[0] - (0.1 + 0.25)).abs() < 1e-15);
        // displaced dynamics row: x₁⁽²⁾ = 0.5 as a mixed row at stage 0
        let mixed = &p.stages[0].mixed;
        assert_eq!(mixed.rows(), 1);
        assert_eq!(mixed.state, m(1, 2, &[0.0, 1.0]));
        assert_eq!(mixed.control, m(1, 1, &[0.0]));
        assert_eq!(mixed.offset, v(&[-0.5]));
        assert_eq!(p.stages[0].next_state_dim(), 1);
    }

    #[test]
    fn state_elimination_at_time_zero_checks_initial_state() {
        let mut p = two_stage_chain();
        p.stages[0].state_only = StateConstraint { state: Matrix::identity(2, 2), offset: v(&[-1.0, -2.0]) };
        let tol = ToleranceConfig::default();
        eliminate_state_square(&mut p, 0, &tol).unwrap();
        assert_eq!(p.initial_state.len(), 0);
        assert_eq!(p.stages[0].state_dim(), 0);

        let mut q = two_stage_chain();
        q.stages[0].state_only = StateConstraint { state: Matrix::identity(2, 2), offset: v(&[-1.0, -2.5]) };
        let err = eliminate_state_square(&mut q, 0, &tol).unwrap_err();
        match err {
            ClqrError::Infeasible(w) => assert_eq!(w.kind, WitnessKind::InitialStateMismatch),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn contradictory_state_rows_are_infeasible() {
        let mut p = two_stage_chain();
        p.terminal.state_only = StateConstraint { state: m(2, 2, &[1.0, 1.0, 1.0, 1.0]), offset: v(&[0.0, 1.0]) };
        let err = normalize_state_rank(&mut p, 1, &ToleranceConfig::default()).unwrap_err();
        match err {
            ClqrError::Infeasible(w) => {
                assert_eq!(w.stage, 1);
                assert_eq!(w.coefficients.as_slice(), &[-1.0, 1.0]);
            }
            other => panic!("unexpected {other}"),
        }
    }
}

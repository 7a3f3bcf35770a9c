//! Parallel-in-time LQR.
//!
//! Each stage becomes an element `(A, b, C, η, J)` describing the optimal
//! transition over an interval: conditioned on the start state `x` and on
//! reaching end state `y`, the interval's value is `½xᵀJx − ηᵀx` plus terms
//! in `y`, and the end state obeys `y = A x + b + C λ` for the end costate
//! `λ`. Concatenating intervals is associative, so the value functions of
//! every suffix come out of one scan. Policies then follow stage by stage and
//! the closed-loop trajectory comes out of a second scan over affine maps.

use std::sync::OnceLock;

use nalgebra::Cholesky;
use rayon::prelude::*;

use super::{backup, require_unconstrained, terminal_value, FeedbackPolicy, LqrSolution, ValueQuadratic};
use crate::error::{ClqrError, Result};
use crate::problem::{objective_value, ClqrProblem, StageData};
use crate::{Matrix, Vector};

#[derive(Clone, Debug, PartialEq)]
pub struct ScanElement {
    pub a: Matrix,
    pub b: Vector,
    pub c: Matrix,
    pub eta: Vector,
    pub j: Matrix,
}

impl ScanElement {
    /// The stage with its cross term and linear control cost absorbed by
    /// `u = ũ − R⁻¹(Mᵀx + r)`.
    pub fn stage(stage: &StageData, index: usize) -> Result<Self> {
        let cost = &stage.cost;
        let d = &stage.dynamics;
        let (r_inv_mt, r_inv_r, r_inv_bt) = if stage.control_dim() == 0 {
            (Matrix::zeros(0, stage.state_dim()), Vector::zeros(0), Matrix::zeros(0, stage.next_state_dim()))
        } else {
            let chol = Cholesky::new(cost.control.clone()).ok_or(ClqrError::NumericalBreakdown { stage: index })?;
            (chol.solve(&cost.cross.transpose()), chol.solve(&cost.control_linear), chol.solve(&d.control.transpose()))
        };
        let c = &d.control * &r_inv_bt;
        let j = &cost.state - &cost.cross * &r_inv_mt;
        Ok(Self {
            a: &d.state - &d.control * &r_inv_mt,
            b: &d.offset - &d.control * &r_inv_r,
            c: (&c + c.transpose()) * 0.5,
            eta: -(&cost.state_linear - &cost.cross * &r_inv_r),
            j: (&j + j.transpose()) * 0.5,
        })
    }

    /// Terminal cost as an interval of length zero with nowhere to go.
    pub fn terminal(state: &Matrix, linear: &Vector) -> Self {
        let n = state.nrows();
        Self {
            a: Matrix::zeros(0, n),
            b: Vector::zeros(0),
            c: Matrix::zeros(0, 0),
            eta: -linear,
            j: state.clone(),
        }
    }

    /// `self` followed by `later`.
    pub fn combine(&self, later: &ScanElement) -> Result<ScanElement> {
        let n = self.c.nrows();
        let w = Matrix::identity(n, n) + &self.c * &later.j;
        let lu = w.clone().lu();
        let lu_t = w.transpose().lu();
        let solve = |lu: &nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>, rhs: &Matrix| {
            if n == 0 {
                return Ok(Matrix::zeros(0, rhs.ncols()));
            }
            lu.solve(rhs).ok_or(ClqrError::NumericalBreakdown { stage: 0 })
        };
        let b_shift = &self.b + &self.c * &later.eta;
        let x_a = solve(&lu, &self.a)?;
        let x_b = solve(&lu, &Matrix::from_column_slice(n, 1, b_shift.as_slice()))?;
        let x_c = solve(&lu, &self.c)?;
        let eta_shift = &later.eta - &later.j * &self.b;
        let y_eta = solve(&lu_t, &Matrix::from_column_slice(n, 1, eta_shift.as_slice()))?;
        let y_j = solve(&lu_t, &(&later.j * &self.a))?;

        let c = &later.a * x_c * later.a.transpose() + &later.c;
        let j = self.a.transpose() * y_j + &self.j;
        Ok(ScanElement {
            a: &later.a * &x_a,
            b: (&later.a * x_b).column(0) + &later.b,
            c: (&c + c.transpose()) * 0.5,
            eta: (self.a.transpose() * y_eta).column(0) + &self.eta,
            j: (&j + j.transpose()) * 0.5,
        })
    }

    pub fn value(&self, offset: f64) -> ValueQuadratic {
        ValueQuadratic { hessian: self.j.clone(), gradient: -&self.eta, offset }
    }
}

/// Inclusive scan: `out[k] = items[0] ∘ … ∘ items[k]` under `op(earlier, later)`.
///
/// The input is cut into blocks that are scanned in parallel; block totals
/// are scanned sequentially and then folded back into each block in parallel.
pub fn prefix_scan<T, F>(items: &[T], op: &F) -> Result<Vec<T>>
where
    T: Clone + Send + Sync,
    F: Fn(&T, &T) -> Result<T> + Sync,
{
    let len = items.len();
    if len == 0 {
        return Ok(Vec::new());
    }
    let blocks = (rayon::current_num_threads() * 4).clamp(1, len);
    let size = len.div_ceil(blocks);
    let mut scanned: Vec<Vec<T>> = items
        .par_chunks(size)
        .map(|chunk| {
            let mut out = Vec::with_capacity(chunk.len());
            out.push(chunk[0].clone());
            for item in &chunk[1..] {
                let next = op(out.last().expect("nonempty"), item)?;
                out.push(next);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut carries: Vec<Option<T>> = vec![None];
    for block in &scanned[..scanned.len() - 1] {
        let total = block.last().expect("nonempty");
        let carry = match carries.last().expect("nonempty") {
            None => total.clone(),
            Some(prev) => op(prev, total)?,
        };
        carries.push(Some(carry));
    }

    scanned.par_iter_mut().zip(carries.par_iter()).try_for_each(|(block, carry)| {
        if let Some(carry) = carry {
            for item in block.iter_mut() {
                *item = op(carry, item)?;
            }
        }
        Ok::<_, ClqrError>(())
    })?;
    Ok(scanned.into_iter().flatten().collect())
}

/// `items[0] ∘ … ∘ items[n−1]`, parallel tree reduction.
pub fn combine_all<T, F>(items: &[T], op: &F) -> Result<Option<T>>
where
    T: Clone + Send + Sync,
    F: Fn(&T, &T) -> Result<T> + Sync,
{
    match items.len() {
        0 => Ok(None),
        1 => Ok(Some(items[0].clone())),
        len => {
            let (left, right) = items.split_at(len / 2);
            let (l, r) = rayon::join(|| combine_all(left, op), || combine_all(right, op));
            match (l?, r?) {
                (Some(l), Some(r)) => op(&l, &r).map(Some),
                _ => unreachable!("both halves are nonempty"),
            }
        }
    }
}

/// Pool used by the parallel solver. `CLQR_THREADS` caps its size; unset or
/// `0` means one thread per core.
pub fn thread_pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let threads = std::env::var("CLQR_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .thread_name(|i| format!("clqr-{i}"))
            .build()
            .expect("thread pool")
    })
}

/// Conditioning of the systems the final combination step solves at each
/// stage.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScanDiagnostics {
    /// Condition number of `I + Cᵢ J_{i+1}` per stage.
    pub condition: Vec<f64>,
    /// Stages whose condition number exceeds [`ScanDiagnostics::THRESHOLD`].
    pub flagged: Vec<usize>,
}

impl ScanDiagnostics {
    pub const THRESHOLD: f64 = 1e12;

    pub fn max_condition(&self) -> f64 {
        self.condition.iter().copied().fold(1.0, f64::max)
    }

    fn measure(stages: &[ScanElement], suffix: &[ScanElement]) -> Self {
        let condition: Vec<f64> = stages
            .par_iter()
            .zip(suffix[1..].par_iter())
            .map(|(e, s)| {
                let n = e.c.nrows();
                if n == 0 {
                    return 1.0;
                }
                let w = Matrix::identity(n, n) + &e.c * &s.j;
                let sv = w.singular_values();
                let (hi, lo) = (sv.max(), sv.min());
                if lo > 0.0 {
                    hi / lo
                } else {
                    f64::INFINITY
                }
            })
            .collect();
        let flagged = condition.iter().enumerate().filter(|(_, c)| **c > Self::THRESHOLD).map(|(i, _)| i).collect();
        Self { condition, flagged }
    }
}

/// Same result as [`super::solve_sequential`], computed with two scans.
pub fn solve_parallel(p: &ClqrProblem) -> Result<(LqrSolution, ScanDiagnostics)> {
    require_unconstrained(p)?;
    thread_pool().install(|| solve_in_pool(p))
}

fn solve_in_pool(p: &ClqrProblem) -> Result<(LqrSolution, ScanDiagnostics)> {
    let horizon = p.num_stages();
    let mut elements: Vec<ScanElement> =
        p.stages.par_iter().enumerate().map(|(i, s)| ScanElement::stage(s, i)).collect::<Result<_>>()?;
    elements.push(ScanElement::terminal(&p.terminal.state, &p.terminal.state_linear));

    // Suffix scan as a prefix scan over the reversed sequence.
    let reversed: Vec<ScanElement> = elements.iter().rev().cloned().collect();
    let mut suffix = prefix_scan(&reversed, &|acc: &ScanElement, earlier: &ScanElement| earlier.combine(acc))?;
    suffix.reverse();
    let diagnostics = ScanDiagnostics::measure(&elements[..horizon], &suffix);

    let mut values: Vec<ValueQuadratic> = suffix.iter().map(|e| e.value(0.0)).collect();
    values[horizon] = terminal_value(p);

    // Policies and the per-stage share of the value offsets, all local.
    let local: Vec<(FeedbackPolicy, f64)> = (0..horizon)
        .into_par_iter()
        .map(|i| {
            let (policy, v) = backup(&p.stages[i], i, &values[i + 1])?;
            Ok((policy, v.offset - values[i + 1].offset))
        })
        .collect::<Result<_>>()?;
    let mut offset = values[horizon].offset;
    for i in (0..horizon).rev() {
        offset += local[i].1;
        values[i].offset = offset;
    }
    let policies: Vec<FeedbackPolicy> = local.into_iter().map(|(policy, _)| policy).collect();

    // Closed-loop maps x_{i+1} = Fᵢxᵢ + fᵢ, composed from the left.
    let maps: Vec<(Matrix, Vector)> = p
        .stages
        .par_iter()
        .zip(policies.par_iter())
        .map(|(s, k)| {
            let d = &s.dynamics;
            (&d.state + &d.control * &k.gain, &d.control * &k.feedforward + &d.offset)
        })
        .collect();
    let composed = prefix_scan(&maps, &|earlier: &(Matrix, Vector), later: &(Matrix, Vector)| {
        Ok((&later.0 * &earlier.0, &later.0 * &earlier.1 + &later.1))
    })?;
    let s0 = &p.initial_state;
    let mut x = Vec::with_capacity(horizon + 1);
    x.push(s0.clone());
    x.extend(composed.par_iter().map(|(f, c)| f * s0 + c).collect::<Vec<_>>());
    let u: Vec<Vector> = policies.par_iter().zip(x.par_iter()).map(|(k, xi)| k.apply(xi)).collect();

    let objective = objective_value(p, &x, &u)?;
    Ok((LqrSolution { x, u, policies, values, objective }, diagnostics))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_prefix_scan_matches_running_sum() {
        let items: Vec<i64> = (1..=1000).collect();
        let out = prefix_scan(&items, &|a: &i64, b: &i64| Ok(a + b)).unwrap();
        let mut acc = 0;
        for (k, v) in out.iter().enumerate() {
            acc += items[k];
            assert_eq!(*v, acc);
        }
    }

    #[test]
    fn non_commutative_scan_keeps_order() {
        let items: Vec<String> = (0..37).map(|i| format!("{},", i)).collect();
        let out = prefix_scan(&items, &|a: &String, b: &String| Ok(format!("{a}{b}"))).unwrap();
        assert_eq!(out.last().unwrap(), &items.concat());
        assert_eq!(combine_all(&items, &|a: &String, b: &String| Ok(format!("{a}{b}"))).unwrap().unwrap(), items.concat());
    }

    #[test]
    fn empty_inputs() {
        let items: Vec<i32> = Vec::new();
        assert!(prefix_scan(&items, &|a: &i32, b: &i32| Ok(a + b)).unwrap().is_empty());
        assert!(combine_all(&items, &|a: &i32, b: &i32| Ok(a + b)).unwrap().is_none());
    }

    #[test]
    fn terminal_element_yields_terminal_value() {
        let q = Matrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let e = ScanElement::terminal(&q, &Vector::from_vec(vec![1.0, -1.0]));
        let v = e.value(0.0);
        assert_eq!(v.hessian, q);
        assert_eq!(v.gradient.as_slice(), &[1.0, -1.0]);
    }
}

//! Dense linear-algebra primitives used by the reductions.
//!
//! Two factorizations live here. [`row_rank_normalize`] strips linearly
//! dependent rows from a constraint block `D u + S x + rhs = 0` and re-expresses
//! each dropped row as a combination that no longer involves `D`.
//! [`echelon_factor`] brings a full-row-rank matrix to the form
//! `L · D · P⁻¹ = [G  I]` with `L` invertible and `P` a column permutation.

use nalgebra::SymmetricEigen;

use crate::error::{ClqrError, Result};
use crate::{Matrix, Vector};

/// Largest absolute entry, zero for empty matrices.
pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub fn max_abs_vec(v: &Vector) -> f64 {
    v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Largest entry of `|S - Sᵀ|`.
pub fn asymmetry(s: &Matrix) -> f64 {
    let n = s.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((s[(i, j)] - s[(j, i)]).abs());
        }
    }
    worst
}

pub fn symmetric_part(s: &Matrix) -> Matrix {
    (s + s.transpose()) * 0.5
}

/// Smallest eigenvalue of a symmetric matrix; `+∞` for the empty matrix.
pub fn min_eigenvalue(s: &Matrix) -> Result<f64> {
    if s.nrows() != s.ncols() {
        return Err(ClqrError::Dimension(format!(
            "eigenvalue input must be square, got {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    if s.nrows() == 0 {
        return Ok(f64::INFINITY);
    }
    let skew = asymmetry(s);
    if skew > 1e-9 * (1.0 + max_abs(s)) {
        return Err(ClqrError::NonSymmetric { asymmetry: skew });
    }
    let eig = SymmetricEigen::new(symmetric_part(s));
    Ok(eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Column permutation. Position `j` of the permuted vector holds entry
/// `order[j]` of the original one, so `permuted = P · original`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    order: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { order: (0..n).collect() }
    }

    /// Fails unless `order` contains every index below its length exactly once.
    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &i in &order {
            if i >= order.len() || seen[i] {
                return Err(ClqrError::Dimension(format!("{order:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.order.iter().enumerate().all(|(j, &i)| i == j)
    }

    /// `P⁻¹` as a matrix: `original = P⁻¹ · permuted`.
    pub fn inverse_matrix(&self) -> Matrix {
        let n = self.order.len();
        let mut m = Matrix::zeros(n, n);
        for (j, &i) in self.order.iter().enumerate() {
            m[(i, j)] = 1.0;
        }
        m
    }

    pub fn apply(&self, original: &Vector) -> Vector {
        Vector::from_iterator(self.order.len(), self.order.iter().map(|&i| original[i]))
    }

    pub fn apply_inverse(&self, permuted: &Vector) -> Vector {
        let mut out = Vector::zeros(self.order.len());
        for (j, &i) in self.order.iter().enumerate() {
            out[i] = permuted[j];
        }
        out
    }
}

/// Certificate that `left · D · P⁻¹ = [free_block  I_rank]`.
#[derive(Clone, Debug)]
pub struct EchelonFactorization {
    pub left: Matrix,
    pub permutation: Permutation,
    pub free_block: Matrix,
    pub rank: usize,
}

impl EchelonFactorization {
    /// `[G  I]`, the transformed matrix the factorization promises.
    pub fn reduced_form(&self) -> Matrix {
        let k = self.rank;
        let free = self.free_block.ncols();
        let mut out = Matrix::zeros(k, free + k);
        out.view_mut((0, 0), (k, free)).copy_from(&self.free_block);
        out.view_mut((0, free), (k, k)).fill_with_identity();
        out
    }

    /// Largest entrywise deviation of `L · D · P⁻¹` from `[G I]`.
    pub fn defect(&self, d: &Matrix) -> f64 {
        let lhs = &self.left * d * self.permutation.inverse_matrix();
        max_abs(&(lhs - self.reduced_form()))
    }
}

/// Brings a full-row-rank `D` (k×m) to `[G I_k]` by Gauss-Jordan elimination.
///
/// Rows are processed in order; each picks the largest remaining entry in its
/// row as pivot. Pivot columns end up in the trailing `k` positions sorted by
/// original column index, so a square `D` yields `L = D⁻¹` and `P = I`.
pub fn echelon_factor(d: &Matrix, tol_rank: f64) -> Result<EchelonFactorization> {
    let (k, m) = d.shape();
    if k > m {
        return Err(ClqrError::RankDeficient { row: m });
    }
    let mut work = d.clone();
    let mut left = Matrix::identity(k, k);
    let mut pivot_col_of_row = vec![0usize; k];
    let mut used = vec![false; m];

    for r in 0..k {
        let row_scale = 1.0 + d.row(r).iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        let mut best: Option<(usize, f64)> = None;
        for c in (0..m).filter(|&c| !used[c]) {
            let a = work[(r, c)].abs();
            if best.is_none_or(|(_, b)| a > b) {
                best = Some((c, a));
            }
        }
        let (c, mag) = best.ok_or(ClqrError::RankDeficient { row: r })?;
        if mag <= tol_rank * row_scale {
            return Err(ClqrError::RankDeficient { row: r });
        }
        used[c] = true;
        pivot_col_of_row[r] = c;

        let inv = 1.0 / work[(r, c)];
        work.row_mut(r).scale_mut(inv);
        left.row_mut(r).scale_mut(inv);
        for other in (0..k).filter(|&o| o != r) {
            let f = work[(other, c)];
            if f != 0.0 {
                for col in 0..m {
                    work[(other, col)] -= f * work[(r, col)];
                }
                for col in 0..k {
                    left[(other, col)] -= f * left[(r, col)];
                }
                work[(other, c)] = 0.0;
            }
        }
        work[(r, c)] = 1.0;
    }

    // Trailing identity ordered by ascending pivot column.
    let mut pivots: Vec<(usize, usize)> = pivot_col_of_row.iter().copied().enumerate().map(|(r, c)| (c, r)).collect();
    pivots.sort_unstable();
    let free_cols: Vec<usize> = (0..m).filter(|&c| !used[c]).collect();
    let mut order = free_cols.clone();
    order.extend(pivots.iter().map(|&(c, _)| c));

    let mut left_sorted = Matrix::zeros(k, k);
    let mut free_block = Matrix::zeros(k, free_cols.len());
    for (j, &(_, r)) in pivots.iter().enumerate() {
        left_sorted.row_mut(j).copy_from(&left.row(r));
        for (fj, &c) in free_cols.iter().enumerate() {
            free_block[(j, fj)] = work[(r, c)];
        }
    }

    Ok(EchelonFactorization {
        left: left_sorted,
        permutation: Permutation::from_order(order)?,
        free_block,
        rank: k,
    })
}

/// A dependent row of the normalized block, re-expressed without `D`.
#[derive(Clone, Debug)]
pub struct SpawnedRow {
    /// `v` with `vᵀ D ≈ 0`, indexed by the input rows.
    pub coefficients: Vector,
    /// Input row that the spawned constraint replaces (`v` is 1 there).
    pub replaced_row: usize,
    /// `vᵀ S`.
    pub side: Vector,
    /// `vᵀ rhs`.
    pub rhs: f64,
    /// `Σ |v_j rhs_j|`, the magnitude `rhs` was accumulated from.
    pub rhs_scale: f64,
    /// `‖vᵀ D‖∞` after elimination; below the rank tolerance by construction.
    pub lhs_residual: f64,
}

/// Outcome of [`row_rank_normalize`].
#[derive(Clone, Debug)]
pub struct RankNormalization {
    pub kept_rows: Vec<usize>,
    pub spawned: Vec<SpawnedRow>,
}

impl RankNormalization {
    pub fn is_full_rank(&self) -> bool {
        self.spawned.is_empty()
    }

    pub fn select_rows(&self, m: &Matrix) -> Matrix {
        m.select_rows(self.kept_rows.iter())
    }

    pub fn select_entries(&self, v: &Vector) -> Vector {
        v.select_rows(self.kept_rows.iter())
    }

    /// Spawned rows stacked as a block over the side variables.
    pub fn spawned_side(&self, side_cols: usize) -> Matrix {
        let mut out = Matrix::zeros(self.spawned.len(), side_cols);
        for (i, s) in self.spawned.iter().enumerate() {
            out.row_mut(i).copy_from(&s.side.transpose());
        }
        out
    }

    pub fn spawned_rhs(&self) -> Vector {
        Vector::from_iterator(self.spawned.len(), self.spawned.iter().map(|s| s.rhs))
    }

    /// First spawned row that reads `0 = rhs` with `rhs` beyond tolerance.
    /// Only meaningful when the side block is empty.
    pub fn first_inconsistent(&self, tol_feas: f64) -> Option<&SpawnedRow> {
        self.spawned
            .iter()
            .find(|s| s.rhs.abs() > tol_feas * (1.0 + s.rhs_scale))
    }
}

/// Removes dependent rows from `D u + S x + rhs = 0`.
///
/// Gaussian elimination on `D` with complete pivoting: the next pivot row is
/// the remaining row whose `D` part is largest relative to its original
/// scale, so elimination multipliers stay near one. Once every remaining row
/// has a negligible `D` part, each is replaced by the combination
/// `vᵀ S x + vᵀ rhs = 0`; together with the kept rows this describes the same
/// solution set. Kept and spawned rows are both reported in input order.
pub fn row_rank_normalize(d: &Matrix, side: &Matrix, rhs: &Vector, tol_rank: f64) -> Result<RankNormalization> {
    let t = d.nrows();
    if side.nrows() != t || rhs.len() != t {
        return Err(ClqrError::Dimension(format!(
            "rank normalization blocks disagree: D has {t} rows, side {}, rhs {}",
            side.nrows(),
            rhs.len()
        )));
    }
    let m = d.ncols();
    let n = side.ncols();

    struct Work {
        row: usize,
        aug: Vec<f64>,
        coeffs: Vec<f64>,
        scale: f64,
    }
    let mut remaining: Vec<Work> = (0..t)
        .map(|j| {
            let mut aug: Vec<f64> = d.row(j).iter().copied().collect();
            aug.extend(side.row(j).iter());
            aug.push(rhs[j]);
            let mut coeffs = vec![0.0; t];
            coeffs[j] = 1.0;
            let scale = 1.0 + aug[..m].iter().fold(0.0_f64, |a, v| a.max(v.abs()));
            Work { row: j, aug, coeffs, scale }
        })
        .collect();
    let mut kept_rows = Vec::new();

    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for (k, w) in remaining.iter().enumerate() {
            for (col, v) in w.aug[..m].iter().enumerate() {
                let rel = v.abs() / w.scale;
                if best.is_none_or(|(_, _, b)| rel > b) {
                    best = Some((k, col, rel));
                }
            }
        }
        let Some((k, pivot, rel)) = best else { break };
        if rel <= tol_rank {
            break;
        }
        let basis = remaining.swap_remove(k);
        for w in &mut remaining {
            let f = w.aug[pivot] / basis.aug[pivot];
            if f == 0.0 {
                continue;
            }
            for (a, bv) in w.aug.iter_mut().zip(&basis.aug) {
                *a -= f * bv;
            }
            w.aug[pivot] = 0.0;
            for (c, bc) in w.coeffs.iter_mut().zip(&basis.coeffs) {
                *c -= f * bc;
            }
        }
        kept_rows.push(basis.row);
    }
    kept_rows.sort_unstable();
    remaining.sort_by_key(|w| w.row);

    let spawned = remaining
        .into_iter()
        .map(|w| {
            let lhs_residual = w.aug[..m].iter().fold(0.0_f64, |a, v| a.max(v.abs()));
            let rhs_scale = w.coeffs.iter().zip(rhs.iter()).map(|(c, r)| (c * r).abs()).sum();
            SpawnedRow {
                coefficients: Vector::from_vec(w.coeffs),
                replaced_row: w.row,
                side: Vector::from_column_slice(&w.aug[m..m + n]),
                rhs: w.aug[m + n],
                rhs_scale,
                lhs_residual,
            }
        })
        .collect();
    Ok(RankNormalization { kept_rows, spawned })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, data: &[f64]) -> Matrix {
        Matrix::from_row_slice(rows, cols, data)
    }

    #[test]
    fn full_rank_block_is_untouched() {
        let n = row_rank_normalize(&mat(1, 2, &[1.0, 0.0]), &mat(1, 2, &[3.0, 4.0]), &Vector::from_vec(vec![1.0]), 1e-10).unwrap();
        assert_eq!(n.kept_rows, vec![0]);
        assert!(n.is_full_rank());
    }

    #[test]
    fn duplicated_row_spawns_difference() {
        let d = mat(2, 2, &[1.0, 0.0, 1.0, 0.0]);
        let c = Matrix::identity(2, 2);
        let rhs = Vector::from_vec(vec![1.0, 1.0]);
        let n = row_rank_normalize(&d, &c, &rhs, 1e-10).unwrap();
        assert_eq!(n.kept_rows, vec![0]);
        assert_eq!(n.spawned.len(), 1);
        let s = &n.spawned[0];
        assert_eq!(s.coefficients.as_slice(), &[-1.0, 1.0]);
        assert_eq!(s.side.as_slice(), &[-1.0, 1.0]);
        assert_eq!(s.rhs, 0.0);
        assert_eq!(s.replaced_row, 1);
    }

    #[test]
    fn zero_row_moves_entirely_to_side() {
        let n = row_rank_normalize(&Matrix::zeros(1, 2), &mat(1, 2, &[3.0, 4.0]), &Vector::from_vec(vec![5.0]), 1e-10).unwrap();
        assert!(n.kept_rows.is_empty());
        assert_eq!(n.spawned[0].side.as_slice(), &[3.0, 4.0]);
        assert_eq!(n.spawned[0].rhs, 5.0);
    }

    #[test]
    fn zero_column_block_spawns_every_row() {
        let n = row_rank_normalize(&Matrix::zeros(2, 0), &mat(2, 1, &[1.0, 2.0]), &Vector::from_vec(vec![0.5, 0.0]), 1e-10).unwrap();
        assert_eq!(n.spawned.len(), 2);
        assert_eq!(n.spawned_side(1), mat(2, 1, &[1.0, 2.0]));
    }

    #[test]
    fn contradictory_rows_are_reported_inconsistent() {
        let e = mat(2, 2, &[1.0, 2.0, 1.0, 2.0]);
        let n = row_rank_normalize(&e, &Matrix::zeros(2, 0), &Vector::from_vec(vec![1.0, 3.0]), 1e-10).unwrap();
        let bad = n.first_inconsistent(1e-9).expect("inconsistent");
        assert_eq!(bad.rhs, 2.0);
        let consistent = row_rank_normalize(&e, &Matrix::zeros(2, 0), &Vector::from_vec(vec![1.0, 1.0]), 1e-10).unwrap();
        assert!(consistent.first_inconsistent(1e-9).is_none());
    }

    #[test]
    fn echelon_of_trailing_unit_is_trivial() {
        let f = echelon_factor(&mat(1, 2, &[0.0, 1.0]), 1e-10).unwrap();
        assert_eq!(f.left, mat(1, 1, &[1.0]));
        assert!(f.permutation.is_identity());
        assert_eq!(f.free_block, mat(1, 1, &[0.0]));
    }

    #[test]
    fn echelon_swaps_leading_pivot_to_back() {
        let d = mat(1, 2, &[1.0, 0.0]);
        let f = echelon_factor(&d, 1e-10).unwrap();
        assert_eq!(f.permutation.order(), &[1, 0]);
        assert_eq!(f.left, mat(1, 1, &[1.0]));
        assert_eq!(f.free_block, mat(1, 1, &[0.0]));
        // L · D · P⁻¹ = [0 1]
        assert_eq!(&f.left * &d * f.permutation.inverse_matrix(), mat(1, 2, &[0.0, 1.0]));
    }

    #[test]
    fn echelon_of_square_is_inverse() {
        let f = echelon_factor(&mat(2, 2, &[2.0, 0.0, 0.0, 4.0]), 1e-10).unwrap();
        assert_eq!(f.left, mat(2, 2, &[0.5, 0.0, 0.0, 0.25]));
        assert!(f.permutation.is_identity());
        assert_eq!(f.free_block.ncols(), 0);
    }

    #[test]
    fn echelon_rejects_dependent_rows() {
        let err = echelon_factor(&mat(2, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]), 1e-10).unwrap_err();
        assert!(matches!(err, ClqrError::RankDeficient { row: 1 }));
    }

    #[test]
    fn min_eigenvalue_cases() {
        assert_eq!(min_eigenvalue(&Matrix::identity(3, 3)).unwrap(), 1.0);
        let v = min_eigenvalue(&mat(2, 2, &[1.0, 2.0, 2.0, 1.0])).unwrap();
        assert!((v + 1.0).abs() < 1e-12);
        assert_eq!(min_eigenvalue(&Matrix::zeros(0, 0)).unwrap(), f64::INFINITY);
        assert!(matches!(
            min_eigenvalue(&mat(2, 2, &[1.0, 1.0, 0.0, 1.0])),
            Err(ClqrError::NonSymmetric { .. })
        ));
    }

    #[test]
    fn permutation_round_trip() {
        let p = Permutation::from_order(vec![2, 0, 1]).unwrap();
        let v = Vector::from_vec(vec![10.0, 20.0, 30.0]);
        let w = p.apply(&v);
        assert_eq!(w.as_slice(), &[30.0, 10.0, 20.0]);
        assert_eq!(p.apply_inverse(&w), v);
        assert_eq!(p.inverse_matrix() * &w, v);
        assert!(Permutation::from_order(vec![0, 0]).is_err());
    }
}

use crate::error::{ClqrError, Result};
use crate::{Matrix, Vector};

/// `w = S z + b`: maps new stage variables `z` to the variables they replaced.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    pub linear: Matrix,
    pub offset: Vector,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        Self { linear: Matrix::identity(n, n), offset: Vector::zeros(n) }
    }

    pub fn new(linear: Matrix, offset: Vector) -> Self {
        debug_assert_eq!(linear.nrows(), offset.len());
        Self { linear, offset }
    }

    pub fn input_dim(&self) -> usize {
        self.linear.ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.linear.nrows()
    }

    pub fn apply(&self, z: &Vector) -> Vector {
        &self.linear * z + &self.offset
    }

    /// `self ∘ inner`, i.e. `z ↦ self(inner(z))`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap { linear: &self.linear * &inner.linear, offset: &self.linear * &inner.offset + &self.offset }
    }

    pub fn is_identity(&self) -> bool {
        self.linear.is_square() && self.linear == Matrix::identity(self.output_dim(), self.input_dim()) && self.offset.iter().all(|v| *v == 0.0)
    }
}

/// One change of variables at a stage, over the stacked stage vector `(x, u)`
/// (just `x` at the terminal time).
#[derive(Clone, Debug, PartialEq)]
pub struct LedgerEntry {
    pub map: AffineMap,
    pub state_dim: usize,
    pub control_dim: usize,
}

/// Stagewise changes of variables in the order they were applied.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RecoveryLedger {
    /// Entry `i` holds the chain for time `i ∈ 0..=N`.
    pub stages: Vec<Vec<LedgerEntry>>,
    original_state_dims: Vec<usize>,
    original_control_dims: Vec<usize>,
}

impl RecoveryLedger {
    pub fn new(state_dims: Vec<usize>, control_dims: Vec<usize>) -> Self {
        Self { stages: vec![Vec::new(); state_dims.len()], original_state_dims: state_dims, original_control_dims: control_dims }
    }

    pub fn record(&mut self, time: usize, map: AffineMap, state_dim: usize, control_dim: usize) {
        debug_assert_eq!(map.input_dim(), state_dim + control_dim);
        self.stages[time].push(LedgerEntry { map, state_dim, control_dim });
    }

    pub fn len(&self) -> usize {
        self.stages.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whole chain at one time index as a single map.
    pub fn composed(&self, time: usize) -> AffineMap {
        let n = self.original_state_dims[time] + self.original_control_dims.get(time).copied().unwrap_or(0);
        self.stages[time].iter().fold(AffineMap::identity(n), |acc, e| acc.compose(&e.map))
    }

    /// Maps a solution of the reduced problem back to the original variables.
    pub fn recover(&self, x: &[Vector], u: &[Vector]) -> Result<(Vec<Vector>, Vec<Vector>)> {
        let horizon = self.original_control_dims.len();
        if x.len() != horizon + 1 || u.len() != horizon {
            return Err(ClqrError::Dimension(format!(
                "reduced trajectory has {} states and {} controls, ledger covers {horizon} stages",
                x.len(),
                u.len()
            )));
        }
        let mut xs = Vec::with_capacity(horizon + 1);
        let mut us = Vec::with_capacity(horizon);
        for time in 0..=horizon {
            let control = if time < horizon { Some(&u[time]) } else { None };
            let (n_red, m_red) = match self.stages[time].last() {
                Some(e) => (e.state_dim, e.control_dim),
                None => (self.original_state_dims[time], self.original_control_dims.get(time).copied().unwrap_or(0)),
            };
            let m_given = control.map_or(0, |c| c.len());
            if x[time].len() != n_red || m_given != m_red {
                return Err(ClqrError::Dimension(format!(
                    "time {time}: reduced variables are ({}, {m_given}), ledger expects ({n_red}, {m_red})",
                    x[time].len()
                )));
            }
            let mut z = Vector::zeros(n_red + m_red);
            z.rows_mut(0, n_red).copy_from(&x[time]);
            if let Some(c) = control {
                z.rows_mut(n_red, m_red).copy_from(c);
            }
            for entry in self.stages[time].iter().rev() {
                z = entry.map.apply(&z);
            }
            let n = self.original_state_dims[time];
            xs.push(z.rows(0, n).into_owned());
            if time < horizon {
                us.push(z.rows(n, self.original_control_dims[time]).into_owned());
            }
        }
        Ok((xs, us))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_neutral() {
        let m = AffineMap::new(Matrix::from_row_slice(2, 1, &[1.0, -2.0]), Vector::from_vec(vec![0.5, 0.0]));
        assert_eq!(m.compose(&AffineMap::identity(1)), m);
        assert_eq!(AffineMap::identity(2).compose(&m), m);
        assert!(AffineMap::identity(3).is_identity());
    }

    #[test]
    fn empty_ledger_returns_input() {
        let ledger = RecoveryLedger::new(vec![1, 2], vec![1]);
        let x = vec![Vector::from_vec(vec![1.0]), Vector::from_vec(vec![2.0, 3.0])];
        let u = vec![Vector::from_vec(vec![4.0])];
        let (rx, ru) = ledger.recover(&x, &u).unwrap();
        assert_eq!(rx, x);
        assert_eq!(ru, u);
    }

    #[test]
    fn permutation_entry_is_undone() {
        let mut ledger = RecoveryLedger::new(vec![0, 2], vec![0]);
        let swap = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        ledger.record(1, AffineMap::new(swap, Vector::zeros(2)), 2, 0);
        let (rx, _) = ledger.recover(&[Vector::zeros(0), Vector::from_vec(vec![7.0, 8.0])], &[Vector::zeros(0)]).unwrap();
        assert_eq!(rx[1].as_slice(), &[8.0, 7.0]);
    }

    #[test]
    fn chain_replays_in_reverse() {
        let mut ledger = RecoveryLedger::new(vec![1], vec![]);
        // w = 2 z₁ + 1, z₁ = z₂ - 3  ⇒  w = 2 z₂ - 5
        ledger.record(0, AffineMap::new(Matrix::from_element(1, 1, 2.0), Vector::from_element(1, 1.0)), 1, 0);
        ledger.record(0, AffineMap::new(Matrix::from_element(1, 1, 1.0), Vector::from_element(1, -3.0)), 1, 0);
        let (rx, _) = ledger.recover(&[Vector::from_element(1, 4.0)], &[]).unwrap();
        assert_eq!(rx[0][0], 3.0);
        assert_eq!(ledger.composed(0).apply(&Vector::from_element(1, 4.0))[0], 3.0);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let ledger = RecoveryLedger::new(vec![1, 1], vec![1]);
        assert!(ledger.recover(&[Vector::zeros(1)], &[Vector::zeros(1)]).is_err());
        assert!(ledger.recover(&[Vector::zeros(2), Vector::zeros(1)], &[Vector::zeros(1)]).is_err());
    }
}

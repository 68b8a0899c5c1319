//! Compressed-row copies of mostly-zero operators.
//!
//! Pauli strings and block embeddings have one or a few non-zeros per row, so
//! the `2^{k−1}` matrix-vector products of a nested anticommutator drop from
//! `d²` to roughly `d` each. Only exact zeros are dropped, so results match
//! the dense product up to summation order.

use num_complex::Complex64;

use super::{DenseOperator, StateVector, ZERO};

/// Operators with at most this fraction of non-zeros go sparse.
pub const SPARSE_DENSITY: f64 = 0.25;

/// Something that maps a state vector to a state vector of the same size.
pub trait LinearMap: Sync {
    fn dim(&self) -> usize;
    /// Caller guarantees `v.dim() == self.dim()`.
    fn apply_to(&self, v: &StateVector) -> StateVector;
}

impl LinearMap for DenseOperator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply_to(&self, v: &StateVector) -> StateVector {
        self.apply_unchecked(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl SparseOperator {
    pub fn from_dense(m: &DenseOperator) -> Self {
        let mut row_start = Vec::with_capacity(m.dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_start.push(0);
        for row in m.rows() {
            for (c, &x) in row.iter().enumerate() {
                if x != ZERO {
                    cols.push(c);
                    vals.push(x);
                }
            }
            row_start.push(cols.len());
        }
        SparseOperator { dim: m.dim, row_start, cols, vals }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }
}

impl LinearMap for SparseOperator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply_to(&self, v: &StateVector) -> StateVector {
        let amps = self
            .row_start
            .windows(2)
            .map(|w| (w[0]..w[1]).map(|i| self.vals[i] * v.amps[self.cols[i]]).sum())
            .collect();
        StateVector { amps }
    }
}

/// Dense or sparse view of an operator, whichever is cheaper to apply.
#[derive(Debug, Clone)]
pub enum Kernel<'a> {
    Dense(&'a DenseOperator),
    Sparse(SparseOperator),
}

impl<'a> Kernel<'a> {
    pub fn of(m: &'a DenseOperator) -> Self {
        let nnz = m.data.iter().filter(|&&x| x != ZERO).count();
        if (nnz as f64) <= SPARSE_DENSITY * m.data.len() as f64 {
            Kernel::Sparse(SparseOperator::from_dense(m))
        } else {
            Kernel::Dense(m)
        }
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self, Kernel::Sparse(_))
    }
}

impl LinearMap for Kernel<'_> {
    fn dim(&self) -> usize {
        match self {
            Kernel::Dense(m) => m.dim,
            Kernel::Sparse(s) => s.dim,
        }
    }

    fn apply_to(&self, v: &StateVector) -> StateVector {
        match self {
            Kernel::Dense(m) => m.apply_unchecked(v),
            Kernel::Sparse(s) => s.apply_to(v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::random::{random_involution, random_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sparse_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut m = random_involution(6, &mut rng);
        for r in 0..6 {
            for c in 0..6 {
                if (r + 2 * c) % 3 != 0 {
                    m[(r, c)] = ZERO;
                }
            }
        }
        let v = random_state(6, &mut rng);
        let s = SparseOperator::from_dense(&m);
        assert_eq!(s.nnz(), 12);
        let a = s.apply_to(&v);
        let b = m.apply(&v).unwrap();
        for i in 0..6 {
            assert!((a[i] - b[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn kernel_choice() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let dense = random_involution(4, &mut rng);
        assert!(!Kernel::of(&dense).is_sparse());
        assert!(Kernel::of(&DenseOperator::identity(8)).is_sparse());
    }
}

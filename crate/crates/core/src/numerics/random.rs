//! Seeded random matrices. All generators take the caller's RNG so fixture
//! files are reproducible from a single seed (`ChaCha8Rng::seed_from_u64`).

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{orthonormal_basis, DenseOperator, StateVector};

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_state(dim: usize, rng: &mut impl Rng) -> StateVector {
    StateVector::new((0..dim).map(|_| gaussian(rng)).collect()).normalized()
}

/// `(G + G†)/2` for a complex Gaussian `G`.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> DenseOperator {
    let mut g = DenseOperator::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            g[(r, c)] = gaussian(rng);
        }
    }
    g.add(&g.adjoint()).expect("square").scale(Complex64::new(0.5, 0.0))
}

/// Hermitian with unit Frobenius norm.
pub fn random_unit_hermitian(dim: usize, rng: &mut impl Rng) -> DenseOperator {
    let h = random_hermitian(dim, rng);
    let n = h.frobenius_norm();
    h.scale(Complex64::new(1.0 / n, 0.0))
}

/// Haar-like unitary from Gram–Schmidt on Gaussian columns.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> DenseOperator {
    loop {
        let cols: Vec<StateVector> = (0..dim)
            .map(|_| StateVector::new((0..dim).map(|_| gaussian(rng)).collect()))
            .collect();
        let basis = orthonormal_basis(&cols, 1e-10).expect("non-empty");
        if basis.rank() == dim {
            return DenseOperator::from_columns(basis.vectors()).expect("square");
        }
    }
}

/// `U diag(±1) U†` with independent random signs.
pub fn random_involution(dim: usize, rng: &mut impl Rng) -> DenseOperator {
    let u = random_unitary(dim, rng);
    let diag: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(if rng.random_bool(0.5) { 1.0 } else { -1.0 }, 0.0))
        .collect();
    DenseOperator::from_diagonal(&diag)
        .conjugate_by(&u)
        .expect("same dim")
}

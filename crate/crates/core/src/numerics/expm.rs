use num_complex::Complex64;

use super::DenseOperator;

/// `exp(i·t·H)` for Hermitian `H`, by scaling and squaring a Taylor series.
pub fn expm_i_hermitian(h: &DenseOperator, t: f64) -> DenseOperator {
    let a = h.scale(Complex64::new(0.0, t));
    let norm = a.frobenius_norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let a = a.scale(Complex64::new(0.5f64.powi(squarings as i32), 0.0));

    let dim = h.dim();
    let mut sum = DenseOperator::identity(dim);
    let mut term = DenseOperator::identity(dim);
    for k in 1..=30 {
        term = term.matmul(&a).expect("square").scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term).expect("same dim");
        if term.frobenius_norm() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum).expect("square");
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::hermitian_eigen;
    use crate::numerics::random::random_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_spectral_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (dim, t) in [(2, 0.3), (4, 1.7), (6, 5.0)] {
            let h = random_hermitian(dim, &mut rng);
            let u = expm_i_hermitian(&h, t);
            assert!(u.unitarity_residual() < 1e-12);
            let e = hermitian_eigen(&h);
            let mut oracle = DenseOperator::zeros(dim);
            for (lam, v) in e.values.iter().zip(&e.vectors) {
                let ph = Complex64::from_polar(1.0, lam * t);
                for r in 0..dim {
                    for c in 0..dim {
                        oracle[(r, c)] += ph * v[r] * v[c].conj();
                    }
                }
            }
            assert!(u.sub(&oracle).unwrap().frobenius_norm() < 1e-11);
        }
    }

    #[test]
    fn zero_time_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = random_hermitian(3, &mut rng);
        assert_eq!(expm_i_hermitian(&h, 0.0), DenseOperator::identity(3));
    }
}

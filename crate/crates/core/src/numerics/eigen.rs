use num_complex::Complex64;

use super::{DenseOperator, StateVector};

const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, `vectors[i]` paired with `values[i]`.
    pub vectors: Vec<StateVector>,
}

/// Cyclic complex Jacobi. Only the Hermitian part of `m` is used.
pub fn hermitian_eigen(m: &DenseOperator) -> HermitianEigen {
    let n = m.dim();
    let mut a = m.add(&m.adjoint()).expect("square").scale(Complex64::new(0.5, 0.0));
    let mut v = DenseOperator::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    HermitianEigen {
        values: order.iter().map(|&i| a[(i, i)].re).collect(),
        vectors: order.iter().map(|&i| v.column(i)).collect(),
    }
}

/// Zeroes `a[p][q]` with `G = diag(1, e^{-iφ}) · R(θ)` on the `(p, q)` plane,
/// updating `a ← G† a G` and `v ← v G`.
fn rotate(a: &mut DenseOperator, v: &mut DenseOperator, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let (alpha, gamma) = (a[(p, p)].re, a[(q, q)].re);
    let theta = 0.5 * (2.0 * r).atan2(gamma - alpha);
    let (s, c) = theta.sin_cos();
    let w = phase.conj();
    // G in the (p, q) plane.
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = w * (-s);
    let g_qq = w * c;

    let n = a.dim();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::random::random_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in [1, 2, 5, 9] {
            let h = random_hermitian(dim, &mut rng);
            let e = hermitian_eigen(&h);
            for (lam, vec) in e.values.iter().zip(&e.vectors) {
                let hv = h.apply(vec).unwrap();
                let resid = hv.sub(&vec.scale(Complex64::new(*lam, 0.0))).norm();
                assert!(resid < 1e-12, "dim {dim}: residual {resid}");
                assert!((vec.norm() - 1.0).abs() < 1e-12);
            }
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn pauli_y_spectrum() {
        let y: DenseOperator = "Y".parse::<crate::pauli::PauliString>().unwrap().to_dense().unwrap();
        let e = hermitian_eigen(&y);
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
    }
}

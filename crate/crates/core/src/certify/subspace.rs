//! The candidate qubit subspace spanned by products of `B` on the state.

use serde::Serialize;

use crate::error::Result;
use crate::model::{ObservableLabel, Realization};
use crate::numerics::{orthonormal_basis, StateVector, SubspaceBasis};

use super::relations::apply_product;

/// `∏_{j∈S} B_j |ψ⟩` for every subset `S` (bit `j−1` of the mask), indices
/// ascending inside each product.
pub fn b_product_vectors(real: &Realization) -> Result<Vec<StateVector>> {
    let n = real.n();
    (0..1usize << n)
        .map(|mask| {
            let word: Vec<ObservableLabel> = (1..=n)
                .filter(|j| mask >> (j - 1) & 1 == 1)
                .map(ObservableLabel::B)
                .collect();
            apply_product(real, &word)
        })
        .collect()
}

pub fn invariant_subspace(real: &Realization, rank_tolerance: f64) -> Result<SubspaceBasis> {
    orthonormal_basis(&b_product_vectors(real)?, rank_tolerance)
}

/// The three-qubit span `{ψ, Aᵢψ, Bᵢψ, A₁B₁ψ}`.
pub fn a_product_subspace(real: &Realization, rank_tolerance: f64) -> Result<SubspaceBasis> {
    use ObservableLabel::{A, B};
    let mut words: Vec<Vec<ObservableLabel>> = vec![vec![]];
    words.extend((1..=3).map(|i| vec![A(i)]));
    words.extend((1..=3).map(|i| vec![B(i)]));
    words.push(vec![A(1), B(1)]);
    let vectors = words
        .iter()
        .map(|w| apply_product(real, w))
        .collect::<Result<Vec<_>>>()?;
    orthonormal_basis(&vectors, rank_tolerance)
}

/// Sine of the largest principal angle between two subspaces (1 when their
/// dimensions differ).
pub fn subspace_distance(a: &SubspaceBasis, b: &SubspaceBasis) -> f64 {
    if a.rank() != b.rank() {
        return 1.0;
    }
    let ab = a.vectors().iter().map(|v| b.leakage(v)).fold(0.0, f64::max);
    let ba = b.vectors().iter().map(|v| a.leakage(v)).fold(0.0, f64::max);
    ab.max(ba)
}

/// `max ‖(𝟙 − PP†) M b‖` over observables `M` and basis vectors `b`.
pub fn invariance_leakage(real: &Realization, basis: &SubspaceBasis) -> Result<f64> {
    let mut worst = 0.0f64;
    for m in real.observables().values() {
        for b in basis.vectors() {
            worst = worst.max(basis.leakage(&m.apply(b)?));
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubspaceReport {
    pub dim: usize,
    pub ambient_dim: usize,
    /// Relative residual of each generator after Gram–Schmidt, the spectrum
    /// the rank decision was made from.
    pub generator_residuals: Vec<f64>,
    pub smallest_kept: f64,
    pub largest_dropped: Option<f64>,
    pub invariance_leakage: f64,
    /// Distance to the A-product span; three qubits only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_span_distance: Option<f64>,
}

pub fn subspace_report(real: &Realization, basis: &SubspaceBasis) -> Result<SubspaceReport> {
    let tol = basis.rank_tolerance();
    let res = basis.residuals();
    let a_span_distance = if real.n() == 3 {
        Some(subspace_distance(basis, &a_product_subspace(real, tol)?))
    } else {
        None
    };
    Ok(SubspaceReport {
        dim: basis.rank(),
        ambient_dim: basis.ambient_dim(),
        generator_residuals: res.to_vec(),
        smallest_kept: res.iter().copied().filter(|r| *r > tol).fold(f64::INFINITY, f64::min),
        largest_dropped: res.iter().copied().filter(|r| *r <= tol).reduce(f64::max),
        invariance_leakage: invariance_leakage(real, basis)?,
        a_span_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{canonical_observables, embed_realization};
    use crate::numerics::DEFAULT_RANK_TOLERANCE;

    #[test]
    fn canonical_dimensions() {
        for n in 3..=5 {
            let r = canonical_observables(n).unwrap();
            let b = invariant_subspace(&r, DEFAULT_RANK_TOLERANCE).unwrap();
            assert_eq!(b.rank(), 1 << n);
            assert!(b.gram_residual() < 1e-10);
        }
    }

    #[test]
    fn embedded_subspace_is_invariant() {
        let r = embed_realization(&canonical_observables(3).unwrap(), 8, 3).unwrap();
        let b = invariant_subspace(&r, DEFAULT_RANK_TOLERANCE).unwrap();
        assert_eq!((b.rank(), b.ambient_dim()), (8, 16));
        let rep = subspace_report(&r, &b).unwrap();
        assert!(rep.invariance_leakage < 1e-8);
        assert!(rep.a_span_distance.unwrap() < 1e-7);
        assert_eq!(rep.largest_dropped, None);
    }

    #[test]
    fn product_state_collapses() {
        let r = canonical_observables(3).unwrap();
        let r = r.with_state(StateVector::basis(8, 0)).unwrap();
        let b = invariant_subspace(&r, DEFAULT_RANK_TOLERANCE).unwrap();
        assert_eq!(b.rank(), 1);
        assert!(subspace_report(&r, &b).unwrap().largest_dropped.is_some());
    }
}

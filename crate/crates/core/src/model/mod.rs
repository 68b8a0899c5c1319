//! Canonical objects of the n-qubit scenario and realization synthesis.
//!
//! Qubit 1 is the most significant bit of a basis index (Kronecker order).
//! The complete-graph state is symmetric under qubit permutations, so its
//! amplitude vector is the same under either bit-order convention.

mod label;
mod realization;

pub use label::ObservableLabel;
pub use realization::{
    Provenance, Realization, RealizationFile, EXACT_VALIDATION_TOL, FLOATING_VALIDATION_TOL,
};

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numerics::random::{random_involution, random_unit_hermitian};
use crate::numerics::{expm_i_hermitian, DenseOperator, StateVector};
use crate::pauli::{Letter, PauliString};

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::QubitCount(n, "at least 3 qubits are required"));
    }
    if n > crate::dense_limit() {
        return Err(Error::DenseLimit {
            width: n,
            limit: crate::dense_limit(),
        });
    }
    Ok(())
}

/// The generators `Gᵢ = Z…Z Xᵢ Z…Z` of the complete-graph stabilizer group.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerSet {
    pub n: usize,
    pub generators: Vec<PauliString>,
}

pub fn stabilizer_generators(n: usize) -> Result<StabilizerSet> {
    if n < 3 {
        return Err(Error::QubitCount(n, "at least 3 qubits are required"));
    }
    let generators = (0..n)
        .map(|i| {
            let letters: Vec<Letter> = (0..n)
                .map(|q| if q == i { Letter::X } else { Letter::Z })
                .collect();
            PauliString::from_letters(&letters)
        })
        .collect();
    Ok(StabilizerSet { n, generators })
}

/// `|Gₙ⟩ = ∏_{i<j} CZ_{ij} |+⟩^{⊗n}`; the `|0…0⟩` amplitude is real positive.
pub fn graph_state(n: usize) -> Result<StateVector> {
    check_n(n)?;
    let dim = 1usize << n;
    let amp = (dim as f64).sqrt().recip();
    let amps = (0..dim)
        .map(|x| {
            let w = x.count_ones() as usize;
            // CZ contributes -1 for every pair of set bits.
            let pairs = w * w.saturating_sub(1) / 2;
            Complex64::new(if pairs % 2 == 1 { -amp } else { amp }, 0.0)
        })
        .collect();
    let state = StateVector::new(amps);
    for g in stabilizer_generators(n)?.generators {
        let image = g.apply(&state)?;
        assert!(
            image.sub(&state).norm() <= 1e-12,
            "generator {g} does not stabilize the constructed state"
        );
    }
    Ok(state)
}

/// Pauli string of the canonical observable: `Aᵢ = Xᵢ`, `Bᵢ = Zᵢ`,
/// `Nᵢⱼ = Xᵢ Xⱼ ∏_{k≠i,j} Z_k`.
pub fn canonical_pauli(label: ObservableLabel, n: usize) -> PauliString {
    match label {
        ObservableLabel::A(i) => PauliString::single(n, i - 1, Letter::X),
        ObservableLabel::B(i) => PauliString::single(n, i - 1, Letter::Z),
        ObservableLabel::N(i, j) => {
            let letters: Vec<Letter> = (1..=n)
                .map(|q| if q == i || q == j { Letter::X } else { Letter::Z })
                .collect();
            PauliString::from_letters(&letters)
        }
    }
}

/// The ideal realization on `(C²)^{⊗n}` attaining the quantum bound.
pub fn canonical_observables(n: usize) -> Result<Realization> {
    check_n(n)?;
    let state = graph_state(n)?;
    let observables = ObservableLabel::all(n)
        .into_iter()
        .map(|l| Ok((l, canonical_pauli(l, n).to_dense()?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Realization::new(n, state, observables)
}

/// `H ⊕ C^{extra}`: the state is zero-padded and each observable becomes
/// `M ⊕ J` with `J` a seeded random Hermitian involution, drawn in label order.
pub fn embed_realization(base: &Realization, extra_dim: usize, junk_seed: u64) -> Result<Realization> {
    if extra_dim == 0 {
        return Ok(base.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(junk_seed);
    let observables = base
        .observables()
        .iter()
        .map(|(l, m)| (*l, m.direct_sum(&random_involution(extra_dim, &mut rng))))
        .collect();
    Realization::with_provenance(
        base.n(),
        base.state().padded(extra_dim),
        observables,
        base.provenance(),
    )
}

/// Conjugates every observable by its own `exp(i·ε·H)`, `H` a seeded random
/// Hermitian of unit Frobenius norm drawn in label order. The state is kept.
pub fn perturb_realization(base: &Realization, epsilon: f64, seed: u64) -> Result<Realization> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be finite and non-negative, got {epsilon}"
        )));
    }
    if epsilon == 0.0 {
        return Ok(base.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let observables = base
        .observables()
        .iter()
        .map(|(l, m)| {
            let h = random_unit_hermitian(base.dim(), &mut rng);
            let u = expm_i_hermitian(&h, epsilon);
            Ok((*l, m.conjugate_by(&u)?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Realization::with_provenance(base.n(), base.state().clone(), observables, base.provenance())
}

/// Deterministic realization: every observable is `±𝟙` per `assignment`,
/// on `C^dim` with state `|0⟩`.
pub fn classical_realization(
    n: usize,
    assignment: &BTreeMap<ObservableLabel, i8>,
    dim: usize,
) -> Result<Realization> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let observables = ObservableLabel::all(n)
        .into_iter()
        .map(|l| {
            let v = *assignment
                .get(&l)
                .ok_or_else(|| Error::MissingLabel(l.to_string()))?;
            Ok((l, DenseOperator::scalar(dim, f64::from(v.signum()))))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Realization::new(n, StateVector::basis(dim, 0), observables)
}

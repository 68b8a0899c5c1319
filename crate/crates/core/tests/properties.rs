//! Randomised invariants across the Pauli, numerics, correlator and
//! certification layers.

use std::collections::BTreeMap;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tempcert::certify::{certify, Tolerances};
use tempcert::correlators::{induced_orderings, pi_correlation, seq_correlation, PiCorrelator};
use tempcert::inequalities::{build_tn, evaluate};
use tempcert::model::{canonical_observables, embed_realization, ObservableLabel, Realization};
use tempcert::numerics::random::{random_involution, random_state};
use tempcert::numerics::{
    nested_anticommutator, orthonormal_basis, project_operator, DenseOperator, StateVector,
};
use tempcert::pauli::{Letter, PauliString, Phase};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![Just(Letter::I), Just(Letter::X), Just(Letter::Y), Just(Letter::Z)]
}

fn pauli(width: usize) -> impl Strategy<Value = PauliString> {
    (prop::collection::vec(letter(), width), 0u8..4)
        .prop_map(|(ls, e)| PauliString::from_letters(&ls).with_phase(Phase::from_exponent(e)))
}

fn random_realization(n: usize, dim: usize, seed: u64) -> Realization {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let obs: BTreeMap<_, _> = ObservableLabel::all(n)
        .into_iter()
        .map(|l| (l, random_involution(dim, &mut rng)))
        .collect();
    Realization::new(n, random_state(dim, &mut rng), obs).unwrap()
}

fn close(a: &StateVector, b: &StateVector, tol: f64) -> bool {
    a.sub(b).norm() <= tol
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn pauli_product_is_associative(a in pauli(9), b in pauli(9), c in pauli(9)) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn pauli_inverse_gives_identity(a in pauli(70)) {
        prop_assert_eq!(a.mul(&a.inverse()).unwrap(), PauliString::identity(70));
        prop_assert_eq!(a.inverse().mul(&a).unwrap(), PauliString::identity(70));
    }

    #[test]
    fn pauli_commutation_matches_dense(a in pauli(3), b in pauli(3)) {
        let (da, db) = (a.to_dense().unwrap(), b.to_dense().unwrap());
        let comm = da.matmul(&db).unwrap().sub(&db.matmul(&da).unwrap()).unwrap();
        prop_assert_eq!(a.commutes(&b).unwrap(), comm.frobenius_norm() < 1e-12);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn nested_anticommutator_is_the_sum_of_its_orderings(k in 1usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ops: Vec<DenseOperator> = (0..k).map(|_| random_involution(4, &mut rng)).collect();
        let refs: Vec<&DenseOperator> = ops.iter().collect();
        let psi = random_state(4, &mut rng);
        let direct = nested_anticommutator(&refs).unwrap().apply(&psi).unwrap();
        let seq: Vec<usize> = (0..k).collect();
        let mut sum = StateVector::zeros(4);
        for o in induced_orderings(&seq) {
            let mut v = psi.clone();
            for &p in o.iter().rev() {
                v = ops[p].apply(&v).unwrap();
            }
            sum = sum.add(&v);
        }
        prop_assert!(close(&direct, &sum, 1e-10));
    }

    #[test]
    fn orthonormal_basis_is_orthonormal(count in 1usize..8, dim in 2usize..9, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vs: Vec<StateVector> = (0..count).map(|_| random_state(dim, &mut rng)).collect();
        let basis = orthonormal_basis(&vs, 1e-9).unwrap();
        prop_assert_eq!(basis.rank(), count.min(dim));
        prop_assert!(basis.gram_residual() <= 1e-10);
        for v in &vs {
            prop_assert!(basis.leakage(v) <= 1e-9);
        }
    }

    #[test]
    fn projection_recovers_an_invariant_block(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_involution(3, &mut rng);
        let full = m.direct_sum(&random_involution(2, &mut rng));
        let basis = orthonormal_basis(&(0..3).map(|i| StateVector::basis(5, i)).collect::<Vec<_>>(), 1e-9).unwrap();
        let p = project_operator(&full, &basis).unwrap();
        prop_assert!(p.sub(&m).unwrap().frobenius_norm() < 1e-12);
        prop_assert!(p.involution_residual() < 1e-10);
    }

    #[test]
    fn sequential_correlations_are_bounded(k in 1usize..6, seed in any::<u64>()) {
        let r = random_realization(3, 4, seed);
        let mut labels = ObservableLabel::all(3);
        labels.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        let c = seq_correlation(&r, &labels[..k]).unwrap();
        prop_assert!(c.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn pi_correlation_ignores_label_order(k in 2usize..5, seed in any::<u64>()) {
        let r = random_realization(3, 4, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let mut labels = ObservableLabel::all(3);
        labels.shuffle(&mut rng);
        labels.truncate(k);
        let a = pi_correlation(&r, &PiCorrelator::new(labels.clone()).unwrap()).unwrap();
        labels.reverse();
        let b = pi_correlation(&r, &PiCorrelator::new(labels).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn embedding_preserves_values(n in 3usize..5, extra in 1usize..5, seed in any::<u64>()) {
        let base = canonical_observables(n).unwrap();
        let ineq = build_tn(n).unwrap();
        let a = evaluate(&ineq, &base).unwrap().total;
        let b = evaluate(&ineq, &embed_realization(&base, extra, seed).unwrap()).unwrap().total;
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn random_realizations_respect_the_quantum_bound(n in 3usize..5, dim in 2usize..7, seed in any::<u64>()) {
        let ineq = build_tn(n).unwrap();
        let rep = evaluate(&ineq, &random_realization(n, dim, seed)).unwrap();
        prop_assert!(rep.total <= ineq.eta_q() as f64 + 1e-9, "total {} > {}", rep.total, ineq.eta_q());
    }

    #[test]
    fn relabeling_qubits_changes_nothing(seed in any::<u64>()) {
        let mut perm = vec![1, 2, 3, 4];
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        // Cover sequences follow sorted label order, so for arbitrary
        // non-commuting operators the value is not relabeling invariant; the
        // canonical operators with random junk blocks must be.
        let ineq = build_tn(4).unwrap();
        let canon = canonical_observables(4).unwrap();
        let r = embed_realization(&canon, 3, seed).unwrap();
        let a = evaluate(&ineq, &r).unwrap().total;
        let b = evaluate(&ineq, &r.relabeled(&perm).unwrap()).unwrap().total;
        prop_assert!((a - b).abs() < 1e-9);

        let base = certify(&canon, Tolerances::default()).unwrap();
        let moved = certify(&canon.relabeled(&perm).unwrap(), Tolerances::default()).unwrap();
        prop_assert_eq!(base.verdict, moved.verdict);
        prop_assert_eq!(base.subspace_dim, moved.subspace_dim);
        prop_assert!((base.fidelity.unwrap() - moved.fidelity.unwrap()).abs() < 1e-9);
    }
}

#[test]
fn phase_exponents_wrap() {
    let y = PauliString::from_letters(&[Letter::Y]);
    let minus_i = Complex64::new(0.0, -1.0);
    assert_eq!(y.clone().with_phase(Phase::from_exponent(7)).phase().to_complex(), minus_i);
    assert_eq!(y.mul(&y).unwrap(), PauliString::identity(1));
}

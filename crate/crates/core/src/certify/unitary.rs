//! Constructive recovery of the qubit structure on the candidate subspace.
//!
//! The compressed `B̂ᵢ` are jointly diagonalised by successive eigenspace
//! splitting; each common eigenvector is labelled by its sign pattern
//! (`+1 → 0`, `−1 → 1`, qubit 1 most significant). Phases are fixed so that
//! the all-zero vector has a positive overlap with the state and every `Âᵢ`
//! maps `|b⟩` to `|b ⊕ eᵢ⟩` with a positive coefficient.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{canonical_pauli, graph_state, ObservableLabel};
use crate::numerics::{hermitian_eigen, DenseOperator, MatrixJson, StateVector};

/// Eigenvalues further than this from ±1 mean the input is not an involution
/// on the subspace.
pub const CLUSTER_THRESHOLD: f64 = 0.5;

const PHASE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryExtraction {
    pub u: DenseOperator,
    pub nij_signs: BTreeMap<ObservableLabel, i8>,
    pub unitarity_residual: f64,
    /// `max ‖UÂᵢU† − Xᵢ‖`, `‖UB̂ᵢU† − Zᵢ‖`.
    pub form_residual: f64,
    /// `max ‖UN̂U† − s·XXZ…‖` with the reported sign `s`.
    pub nij_form_residual: f64,
    /// `max |⟨b⊕eᵢ|Âᵢ|b⟩ − 1|` over every edge, including those not used to
    /// fix phases.
    pub phase_loop_residual: f64,
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitaryReport {
    pub matrix: MatrixJson,
    pub unitarity_residual: f64,
    pub form_residual: f64,
    pub nij_form_residual: f64,
    pub phase_loop_residual: f64,
}

impl From<&UnitaryExtraction> for UnitaryReport {
    fn from(x: &UnitaryExtraction) -> Self {
        UnitaryReport {
            matrix: MatrixJson::from(&x.u),
            unitarity_residual: x.unitarity_residual,
            form_residual: x.form_residual,
            nij_form_residual: x.nij_form_residual,
            phase_loop_residual: x.phase_loop_residual,
        }
    }
}

fn compress(m: &DenseOperator, cols: &[StateVector]) -> DenseOperator {
    let images: Vec<StateVector> = cols.iter().map(|c| m.apply_unchecked(c)).collect();
    let mut out = DenseOperator::zeros(cols.len());
    for (i, ci) in cols.iter().enumerate() {
        for (j, img) in images.iter().enumerate() {
            out[(i, j)] = ci.inner(img);
        }
    }
    out
}

fn combine(cols: &[StateVector], coeffs: &StateVector) -> StateVector {
    let mut out = StateVector::zeros(cols[0].dim());
    for (c, w) in cols.iter().zip(coeffs.amplitudes()) {
        out = out.add(&c.scale(*w));
    }
    out
}

/// Common eigenvectors of the commuting involutions `b[0..n]`, indexed by
/// sign pattern. Errors if a cluster is not near ±1 or a pattern's
/// eigenspace is not one-dimensional.
pub fn joint_eigenbasis(b: &[&DenseOperator]) -> Result<Vec<StateVector>> {
    let n = b.len();
    let k = b.first().map(|m| m.dim()).ok_or(Error::Empty("operator list"))?;
    let mut groups: Vec<(usize, Vec<StateVector>)> = vec![(0, (0..k).map(|i| StateVector::basis(k, i)).collect())];
    for (q, m) in b.iter().enumerate() {
        let bit = 1usize << (n - 1 - q);
        let mut next = Vec::with_capacity(groups.len() * 2);
        for (pattern, cols) in groups {
            let e = hermitian_eigen(&compress(m, &cols));
            let (mut plus, mut minus) = (Vec::new(), Vec::new());
            for (val, vec) in e.values.iter().zip(&e.vectors) {
                let target = if *val >= 0.0 { &mut plus } else { &mut minus };
                if (val.abs() - 1.0).abs() > CLUSTER_THRESHOLD {
                    return Err(Error::NotInvolution(*val));
                }
                target.push(combine(&cols, vec));
            }
            if !plus.is_empty() {
                next.push((pattern, plus));
            }
            if !minus.is_empty() {
                next.push((pattern | bit, minus));
            }
        }
        groups = next;
    }
    let mut out: Vec<Option<StateVector>> = vec![None; 1 << n];
    for (pattern, mut cols) in groups {
        if cols.len() != 1 || pattern >= out.len() {
            return Err(Error::NotProductForm(format!(
                "sign pattern {pattern:0n$b} has a {}-dimensional eigenspace",
                cols.len()
            )));
        }
        out[pattern] = cols.pop();
    }
    out.into_iter()
        .enumerate()
        .map(|(p, v)| v.ok_or_else(|| Error::NotProductForm(format!("sign pattern {p:0n$b} is empty"))))
        .collect()
}

fn fix_phase(v: &mut StateVector, overlap: Complex64) {
    let r = overlap.norm();
    if r > PHASE_FLOOR {
        *v = v.scale(overlap / r);
    }
}

/// Builds `U` from the compressed operators and the state's coordinates in
/// the subspace basis, then reads off the `N` signs and the fidelity.
pub fn extract_unitary(
    hat: &BTreeMap<ObservableLabel, DenseOperator>,
    n: usize,
    psi: &StateVector,
) -> Result<UnitaryExtraction> {
    let get = |l: ObservableLabel| hat.get(&l).ok_or_else(|| Error::MissingLabel(l.to_string()));
    let bs = (1..=n).map(|i| get(ObservableLabel::B(i))).collect::<Result<Vec<_>>>()?;
    let a_ops = (1..=n).map(|i| get(ObservableLabel::A(i))).collect::<Result<Vec<_>>>()?;
    let k = 1usize << n;
    if psi.dim() != k || bs[0].dim() != k {
        return Err(Error::DimMismatch(k, psi.dim().max(bs[0].dim())));
    }
    let mut e = joint_eigenbasis(&bs)?;

    let c0 = e[0].inner(psi);
    fix_phase(&mut e[0], c0);
    for (q, a) in a_ops.iter().enumerate() {
        let bit = 1usize << (n - 1 - q);
        // Patterns already fixed are exactly those with no bits at or after q.
        for b in (0..k).filter(|b| b & ((bit << 1) - 1) == 0) {
            let w = e[b | bit].inner(&a.apply_unchecked(&e[b]));
            fix_phase(&mut e[b | bit], w);
        }
    }

    let mut loop_res = 0.0f64;
    for (q, a) in a_ops.iter().enumerate() {
        let bit = 1usize << (n - 1 - q);
        for b in 0..k {
            let w = e[b ^ bit].inner(&a.apply_unchecked(&e[b]));
            loop_res = loop_res.max((w - 1.0).norm());
        }
    }

    let rows = e
        .iter()
        .map(|v| v.amplitudes().iter().map(|z| z.conj()).collect())
        .collect();
    let u = DenseOperator::from_rows(rows)?;

    let mut form_residual = 0.0f64;
    for l in (1..=n).flat_map(|i| [ObservableLabel::A(i), ObservableLabel::B(i)]) {
        let target = canonical_pauli(l, n).to_dense()?;
        let got = get(l)?.conjugate_by(&u)?;
        form_residual = form_residual.max(got.sub(&target)?.frobenius_norm());
    }

    let mut nij_signs = BTreeMap::new();
    let mut nij_form_residual = 0.0f64;
    for l in ObservableLabel::all(n).into_iter().filter(|l| matches!(l, ObservableLabel::N(..))) {
        let p = canonical_pauli(l, n).to_dense()?;
        let got = get(l)?.conjugate_by(&u)?;
        let overlap = got.matmul(&p)?.trace().re / k as f64;
        let sign: i8 = if overlap >= 0.0 { 1 } else { -1 };
        let resid = got.sub(&p.scale(f64::from(sign).into()))?.frobenius_norm();
        nij_form_residual = nij_form_residual.max(resid);
        nij_signs.insert(l, sign);
    }

    let target = graph_state(n)?;
    let fidelity = target.inner(&u.apply(psi)?).norm_sqr();

    Ok(UnitaryExtraction {
        unitarity_residual: u.unitarity_residual(),
        u,
        nij_signs,
        form_residual,
        nij_form_residual,
        phase_loop_residual: loop_res,
        fidelity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::hatted::hatted_operators;
    use crate::certify::subspace::invariant_subspace;
    use crate::model::canonical_observables;

    fn run(n: usize) -> UnitaryExtraction {
        let r = canonical_observables(n).unwrap();
        let b = invariant_subspace(&r, 1e-7).unwrap();
        let hat = hatted_operators(&r, &b).unwrap();
        extract_unitary(&hat, n, &b.coordinates(r.state())).unwrap()
    }

    #[test]
    fn canonical_recovery() {
        for n in 3..=4 {
            let x = run(n);
            assert!(x.unitarity_residual < 1e-9);
            assert!(x.form_residual < 1e-9);
            assert!(x.nij_form_residual < 1e-9);
            assert!(x.phase_loop_residual < 1e-9);
            assert!((x.fidelity - 1.0).abs() < 1e-9);
            assert!(x.nij_signs.values().all(|s| *s == 1));
        }
    }

    #[test]
    fn degenerate_patterns_are_rejected() {
        let z = DenseOperator::from_diagonal(&[1.0.into(), (-1.0).into(), 1.0.into(), (-1.0).into()]);
        let err = joint_eigenbasis(&[&z, &z]).unwrap_err();
        assert!(matches!(err, Error::NotProductForm(_)));
        let half = DenseOperator::scalar(2, 0.2);
        assert!(matches!(joint_eigenbasis(&[&half]), Err(Error::NotInvolution(_))));
    }
}

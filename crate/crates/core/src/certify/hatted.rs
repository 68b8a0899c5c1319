//! Observables compressed onto the candidate subspace.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::algebra::{bracket_pairs, Bracket};
use super::Residuals;
use crate::error::Result;
use crate::model::{ObservableLabel, Realization};
use crate::numerics::{anticommutator, commutator, project_operator, DenseOperator, SubspaceBasis};

/// `P† M P` for every observable.
pub fn hatted_operators(
    real: &Realization,
    basis: &SubspaceBasis,
) -> Result<BTreeMap<ObservableLabel, DenseOperator>> {
    real.observables()
        .iter()
        .map(|(l, m)| Ok((*l, project_operator(m, basis)?)))
        .collect()
}

/// Involution, Hermiticity and trace of each compressed observable, then the
/// full operator-norm (anti)commutators of every structural pair.
pub fn hatted_checks(hat: &BTreeMap<ObservableLabel, DenseOperator>, n: usize) -> Result<Residuals> {
    let mut out = Residuals::new();
    for (l, m) in hat {
        out.push(format!("inv:{l}"), m.involution_residual());
    }
    for (l, m) in hat {
        out.push(format!("herm:{l}"), m.hermiticity_residual());
    }
    for (l, m) in hat {
        out.push(format!("trace:{l}"), m.trace().norm());
    }
    let get = |l: ObservableLabel| {
        hat.get(&l)
            .ok_or_else(|| crate::Error::MissingLabel(l.to_string()))
    };
    let brackets = bracket_pairs(n)
        .par_iter()
        .map(|p| {
            let (a, b) = (get(p.left)?, get(p.right)?);
            let v = match p.kind {
                Bracket::Commutator => commutator(a, b)?,
                Bracket::Anticommutator => anticommutator(a, b)?,
            };
            Ok((p.id.clone(), v.frobenius_norm()))
        })
        .collect::<Result<Vec<_>>>()?;
    out.extend(brackets.into_iter().collect());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::subspace::invariant_subspace;
    use crate::model::{canonical_observables, embed_realization};
    use crate::numerics::hermitian_eigen;

    #[test]
    fn canonical_checks_vanish() {
        let r = canonical_observables(3).unwrap();
        let b = invariant_subspace(&r, 1e-7).unwrap();
        let hat = hatted_operators(&r, &b).unwrap();
        let checks = hatted_checks(&hat, 3).unwrap();
        assert!(checks.max() < 1e-10, "{}", checks.max());
        for m in hat.values() {
            let e = hermitian_eigen(m);
            let plus = e.values.iter().filter(|v| **v > 0.0).count();
            assert_eq!(plus, 4);
        }
    }

    #[test]
    fn embedding_preserves_spectra() {
        let base = canonical_observables(3).unwrap();
        let emb = embed_realization(&base, 8, 21).unwrap();
        let h0 = hatted_operators(&base, &invariant_subspace(&base, 1e-7).unwrap()).unwrap();
        let h1 = hatted_operators(&emb, &invariant_subspace(&emb, 1e-7).unwrap()).unwrap();
        for (l, m) in &h0 {
            let a = hermitian_eigen(m).values;
            let b = hermitian_eigen(&h1[l]).values;
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-10, "{l}");
            }
        }
    }
}

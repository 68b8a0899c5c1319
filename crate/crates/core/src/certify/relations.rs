//! Stabilizing relations `(∏M)|ψ⟩ = ±|ψ⟩` and the pairwise identities that
//! follow from them. Products act rightmost-first on the state.

use rayon::prelude::*;

use super::Residuals;
use crate::error::Result;
use crate::model::{ObservableLabel, Realization};
use crate::numerics::StateVector;

use ObservableLabel::{A, B};

/// `M₁ M₂ … M_k |ψ⟩`.
pub(crate) fn apply_product(real: &Realization, word: &[ObservableLabel]) -> Result<StateVector> {
    let mut v = real.state().clone();
    for l in word.iter().rev() {
        v = real.get(*l)?.apply(&v)?;
    }
    Ok(v)
}

fn concat(word: &[ObservableLabel]) -> String {
    word.iter().map(|l| l.to_string()).collect()
}

/// One relation: the product word, the target sign and its report id.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub id: String,
    pub word: Vec<ObservableLabel>,
    pub sign: f64,
}

/// Every stabilizing relation for `n` qubits: the two-A words with their
/// `N`, the single-A words, the triple-A words (target −1), then the
/// three `N` pairs of every triple.
pub fn stabilizing_relations(n: usize) -> Vec<Relation> {
    let with_a = |set: &[usize]| -> Vec<ObservableLabel> {
        (1..=n).map(|q| if set.contains(&q) { A(q) } else { B(q) }).collect()
    };
    let mut out = Vec::new();
    let mut push = |prefix: &str, word: Vec<ObservableLabel>, sign: f64| {
        out.push(Relation {
            id: format!("{prefix}:{}", concat(&word)),
            word,
            sign,
        })
    };
    for i in 1..=n {
        for j in i + 1..=n {
            let mut w = with_a(&[i, j]);
            w.push(ObservableLabel::n(i, j));
            push("stab", w, 1.0);
        }
    }
    for i in 1..=n {
        push("stab", with_a(&[i]), 1.0);
    }
    let triples: Vec<(usize, usize, usize)> = (1..=n)
        .flat_map(|i| (i + 1..=n).flat_map(move |j| (j + 1..=n).map(move |k| (i, j, k))))
        .collect();
    for &(i, j, k) in &triples {
        push("neg", with_a(&[i, j, k]), -1.0);
    }
    for &(i, j, k) in &triples {
        let (nij, njk, nki) = (ObservableLabel::n(i, j), ObservableLabel::n(j, k), ObservableLabel::n(k, i));
        for w in [[nij, njk], [njk, nki], [nki, nij]] {
            push("pair", w.to_vec(), 1.0);
        }
    }
    out
}

/// `‖(∏M ∓ 𝟙)|ψ⟩‖` for every stabilizing relation.
pub fn stabilizing_residuals(real: &Realization) -> Result<Residuals> {
    let rels = stabilizing_relations(real.n());
    let psi = real.state();
    let values = rels
        .par_iter()
        .map(|r| {
            let v = apply_product(real, &r.word)?;
            Ok((r.id.clone(), v.sub(&psi.scale(r.sign.into())).norm()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(values.into_iter().collect())
}

/// An identity `lhs|ψ⟩ = sign·rhs|ψ⟩` between two words.
#[derive(Debug, Clone, PartialEq)]
pub struct Identity {
    pub id: String,
    pub lhs: Vec<ObservableLabel>,
    pub rhs: Vec<ObservableLabel>,
    pub sign: f64,
}

/// `AᵢBᵢψ = N_jkψ` for every `i` and pair; for `i ∉ {j,k}`:
/// `AᵢN_jkψ = Bᵢψ`, `N_jkAᵢψ = −Bᵢψ`; for `m ∈ {j,k}`:
/// `B_mN_jkψ = −A_mψ`, `N_jkB_mψ = A_mψ`.
pub fn pairwise_identities(n: usize) -> Vec<Identity> {
    let mut out = Vec::new();
    let mut push = |lhs: Vec<ObservableLabel>, rhs: Vec<ObservableLabel>, sign: f64| {
        let s = if sign < 0.0 { "-" } else { "" };
        out.push(Identity {
            id: format!("ident:{}={s}{}", concat(&lhs), concat(&rhs)),
            lhs,
            rhs,
            sign,
        })
    };
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|j| (j + 1..=n).map(move |k| (j, k)))
        .collect();
    for i in 1..=n {
        for &(j, k) in &pairs {
            push(vec![A(i), B(i)], vec![ObservableLabel::n(j, k)], 1.0);
        }
    }
    for &(j, k) in &pairs {
        let njk = ObservableLabel::n(j, k);
        for i in 1..=n {
            if i == j || i == k {
                push(vec![B(i), njk], vec![A(i)], -1.0);
                push(vec![njk, B(i)], vec![A(i)], 1.0);
            } else {
                push(vec![A(i), njk], vec![B(i)], 1.0);
                push(vec![njk, A(i)], vec![B(i)], -1.0);
            }
        }
    }
    out
}

pub fn pairwise_residuals(real: &Realization) -> Result<Residuals> {
    let ids = pairwise_identities(real.n());
    let values = ids
        .par_iter()
        .map(|r| {
            let l = apply_product(real, &r.lhs)?;
            let rhs = apply_product(real, &r.rhs)?;
            Ok((r.id.clone(), l.sub(&rhs.scale(r.sign.into())).norm()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(values.into_iter().collect())
}

/// Stabilizing relations followed by the pairwise identities.
pub fn relation_residuals(real: &Realization) -> Result<Residuals> {
    let mut r = stabilizing_residuals(real)?;
    r.extend(pairwise_residuals(real)?);
    Ok(r)
}

use rayon::prelude::*;
use serde::Serialize;

use super::{Flavor, Inequality};
use crate::correlators::pi_correlation;
use crate::error::Result;
use crate::model::{ObservableLabel, Realization};
use crate::numerics::{Kernel, LinearMap, StateVector};

/// `violated` means the total exceeds `η_C` by more than this.
pub const VIOLATION_MARGIN: f64 = 1e-9;

/// Rough cost cap (`k!·e·d²` multiply-adds) for the ordering diagnostic.
const SPREAD_BUDGET: f64 = 2e8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermValue {
    pub coeff: i64,
    pub labels: Vec<String>,
    pub cover_size: usize,
    pub value: f64,
    /// Largest deviation of any operator ordering's expectation from the
    /// sorted-order one. Only computed for non-contextual inequalities and
    /// only when affordable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ordering_spread: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub n: usize,
    pub flavor: Flavor,
    pub total: f64,
    pub eta_c: i64,
    pub eta_q: i64,
    pub deficit: f64,
    pub violated: bool,
    pub terms: Vec<TermValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_ordering_spread: Option<f64>,
}

pub fn evaluate(ineq: &Inequality, real: &Realization) -> Result<EvaluationReport> {
    for l in ineq.labels() {
        real.get(l)?;
    }
    let terms = ineq
        .terms()
        .par_iter()
        .map(|t| {
            let value = pi_correlation(real, &t.correlator)?;
            let ordering_spread = match ineq.flavor() {
                Flavor::Noncontextual => ordering_spread(real, t.correlator.labels())?,
                Flavor::Temporal => None,
            };
            Ok(TermValue {
                coeff: t.coeff,
                labels: t.correlator.labels().iter().map(|l| l.to_string()).collect(),
                cover_size: t.correlator.cover().len(),
                value,
                ordering_spread,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let total: f64 = terms.iter().map(|t| t.coeff as f64 * t.value).sum();
    let max_ordering_spread = terms
        .iter()
        .map(|t| t.ordering_spread)
        .try_fold(0.0f64, |m, s| s.map(|s| m.max(s)));
    Ok(EvaluationReport {
        n: ineq.n(),
        flavor: ineq.flavor(),
        total,
        eta_c: ineq.eta_c(),
        eta_q: ineq.eta_q(),
        deficit: ineq.eta_q() as f64 - total,
        violated: total > ineq.eta_c() as f64 + VIOLATION_MARGIN,
        terms,
        max_ordering_spread,
    })
}

/// `max_σ |⟨ψ|M_σ(1)…M_σ(k)|ψ⟩ − ⟨ψ|M₁…M_k|ψ⟩|` over all orderings, or
/// `None` when `k!·d²` is beyond the diagnostic budget. Orderings are
/// enumerated depth-first from the right so shared suffixes are reused.
pub fn ordering_spread(real: &Realization, labels: &[ObservableLabel]) -> Result<Option<f64>> {
    let k = labels.len();
    let d = real.dim() as f64;
    let cost = (1..=k).map(|i| i as f64).product::<f64>() * std::f64::consts::E * d * d;
    if cost > SPREAD_BUDGET {
        return Ok(None);
    }
    let ops = labels
        .iter()
        .map(|l| Ok(Kernel::of(real.get(*l)?)))
        .collect::<Result<Vec<_>>>()?;
    let psi = real.state();
    let mut v = psi.clone();
    for m in ops.iter().rev() {
        v = m.apply_to(&v);
    }
    let reference = psi.inner(&v);

    let mut used = vec![false; k];
    let mut worst = 0.0f64;
    let mut visit = |v: &StateVector| worst = worst.max((psi.inner(v) - reference).norm());
    fn dfs(
        ops: &[Kernel],
        used: &mut [bool],
        depth: usize,
        v: &StateVector,
        visit: &mut dyn FnMut(&StateVector),
    ) {
        if depth == ops.len() {
            visit(v);
            return;
        }
        for p in 0..ops.len() {
            if !used[p] {
                used[p] = true;
                dfs(ops, used, depth + 1, &ops[p].apply_to(v), visit);
                used[p] = false;
            }
        }
    }
    dfs(&ops, &mut used, 0, psi, &mut visit);
    Ok(Some(worst))
}

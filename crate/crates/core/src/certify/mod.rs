//! Self-testing pipeline: relation residuals, algebra residuals, the
//! `B`-product subspace, compressed-operator checks, unitary extraction and
//! graph-state fidelity.
//!
//! Relation and algebra residuals never stop the pipeline; they are recorded
//! as failures and the later stages still run so that, for example, a wrong
//! `N` sign is reported as such. The pipeline stops early only when the
//! subspace has the wrong dimension, a compressed-operator check fails, or
//! the unitary cannot be built.

mod algebra;
mod hatted;
mod relations;
mod residuals;
mod subspace;
mod unitary;

pub use algebra::{algebra_residuals, bracket_pairs, Bracket, BracketPair};
pub use hatted::{hatted_checks, hatted_operators};
pub use relations::{
    pairwise_identities, pairwise_residuals, relation_residuals, stabilizing_relations,
    stabilizing_residuals, Identity, Relation,
};
pub use residuals::Residuals;
pub use subspace::{
    a_product_subspace, b_product_vectors, invariance_leakage, invariant_subspace, subspace_distance,
    subspace_report, SubspaceReport,
};
pub use unitary::{extract_unitary, joint_eigenbasis, UnitaryExtraction, UnitaryReport, CLUSTER_THRESHOLD};

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::inequalities::{build_tn, evaluate};
use crate::model::{Provenance, Realization};
use crate::numerics::DEFAULT_RANK_TOLERANCE;

/// Residual tolerance for inputs of exact provenance.
pub const EXACT_RELATION_TOL: f64 = 1e-8;
/// Residual tolerance for inputs of floating provenance.
pub const FLOATING_RELATION_TOL: f64 = 1e-6;
/// Floor on the tolerance for the recovered Pauli form.
pub const FORM_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Relation, algebra, compressed-operator and fidelity checks.
    pub relation: f64,
    /// Relative Gram–Schmidt cut for the subspace rank.
    pub rank: f64,
}

impl Tolerances {
    pub fn for_provenance(p: Provenance) -> Self {
        Tolerances {
            relation: match p {
                Provenance::Exact => EXACT_RELATION_TOL,
                Provenance::Floating => FLOATING_RELATION_TOL,
            },
            rank: DEFAULT_RANK_TOLERANCE,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::for_provenance(Provenance::Exact)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationReport {
    pub n: usize,
    pub dim: usize,
    #[serde(rename = "Tn_value")]
    pub tn_value: f64,
    #[serde(rename = "eta_C")]
    pub eta_c: i64,
    #[serde(rename = "eta_Q")]
    pub eta_q: i64,
    pub relation_residuals: Residuals,
    pub algebra_residuals: Residuals,
    pub subspace_dim: usize,
    pub subspace: SubspaceReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hatted_residuals: Option<Residuals>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitary: Option<UnitaryReport>,
    pub nij_signs: BTreeMap<String, i8>,
    pub fidelity: Option<f64>,
    pub verdict: Verdict,
    pub failures: Vec<String>,
    /// Stage at which the pipeline stopped, if it did not run to the end.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stopped_at: Option<String>,
    pub tolerances: Tolerances,
}

impl CertificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialisable")
    }
}

fn list_exceeding(failures: &mut Vec<String>, stage: &str, r: &Residuals, tol: f64) {
    for (id, v) in r.exceeding(tol) {
        failures.push(format!("{stage} {id} = {v:.3e} > {tol:.0e}"));
    }
}

/// Runs the full pipeline. Only structural problems (missing labels,
/// mismatched dimensions, unsupported `n`) are errors; everything else is
/// recorded in the report.
pub fn certify(real: &Realization, tol: Tolerances) -> Result<CertificationReport> {
    real.require_complete()?;
    let n = real.n();
    let ineq = build_tn(n)?;
    let tn_value = evaluate(&ineq, real)?.total;

    let mut failures = Vec::new();
    let relation_residuals = relation_residuals(real)?;
    list_exceeding(&mut failures, "relation", &relation_residuals, tol.relation);
    let algebra_residuals = algebra_residuals(real)?;
    list_exceeding(&mut failures, "algebra", &algebra_residuals, tol.relation);

    let basis = invariant_subspace(real, tol.rank)?;
    let subspace = subspace_report(real, &basis)?;
    let mut report = CertificationReport {
        n,
        dim: real.dim(),
        tn_value,
        eta_c: ineq.eta_c(),
        eta_q: ineq.eta_q(),
        relation_residuals,
        algebra_residuals,
        subspace_dim: basis.rank(),
        subspace,
        hatted_residuals: None,
        unitary: None,
        nij_signs: BTreeMap::new(),
        fidelity: None,
        verdict: Verdict::Fail,
        failures,
        stopped_at: None,
        tolerances: tol,
    };
    let stop = |mut r: CertificationReport, stage: &str| {
        r.stopped_at = Some(stage.to_string());
        r.verdict = Verdict::Fail;
        Ok(r)
    };

    let expected = 1usize << n;
    if basis.rank() != expected {
        report
            .failures
            .push(format!("subspace dimension {} != {expected}", basis.rank()));
        return stop(report, "subspace");
    }
    if report.subspace.invariance_leakage > tol.relation {
        report.failures.push(format!(
            "subspace leaks under the observables: {:.3e}",
            report.subspace.invariance_leakage
        ));
    }
    if let Some(d) = report.subspace.a_span_distance {
        if d > tol.rank {
            report
                .failures
                .push(format!("A-product span differs from B-product span: {d:.3e}"));
        }
    }

    let hat = hatted_operators(real, &basis)?;
    let checks = hatted_checks(&hat, n)?;
    let before = report.failures.len();
    list_exceeding(&mut report.failures, "hatted", &checks, tol.relation);
    let hatted_failed = report.failures.len() > before;
    report.hatted_residuals = Some(checks);
    if hatted_failed {
        return stop(report, "hatted");
    }

    let x = match extract_unitary(&hat, n, &basis.coordinates(real.state())) {
        Ok(x) => x,
        Err(e) => {
            report.failures.push(format!("unitary extraction: {e}"));
            return stop(report, "unitary");
        }
    };
    let form_tol = tol.relation.max(FORM_TOL);
    if x.unitarity_residual > form_tol {
        report
            .failures
            .push(format!("unitarity residual {:.3e}", x.unitarity_residual));
    }
    if x.form_residual > form_tol {
        report.failures.push(format!("A/B form residual {:.3e}", x.form_residual));
    }
    if x.phase_loop_residual > form_tol {
        report
            .failures
            .push(format!("phase loop residual {:.3e}", x.phase_loop_residual));
    }
    for (l, s) in &x.nij_signs {
        if *s != 1 {
            report.failures.push(format!("sign of {l} is {s}"));
        }
    }
    if x.nij_form_residual > form_tol {
        report.failures.push(format!("N form residual {:.3e}", x.nij_form_residual));
    }
    if x.fidelity < 1.0 - tol.relation {
        report.failures.push(format!("fidelity {:.12} below 1 - {:.0e}", x.fidelity, tol.relation));
    }
    report.nij_signs = x.nij_signs.iter().map(|(l, s)| (l.to_string(), *s)).collect();
    report.fidelity = Some(x.fidelity);
    report.unitary = Some(UnitaryReport::from(&x));
    report.verdict = if report.failures.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{canonical_observables, ObservableLabel};

    #[test]
    fn canonical_passes() {
        let r = canonical_observables(3).unwrap();
        let rep = certify(&r, Tolerances::default()).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert!((rep.tn_value - 10.0).abs() < 1e-9);
        assert_eq!(rep.subspace_dim, 8);
        assert_eq!(rep.nij_signs.len(), 3);
    }

    #[test]
    fn negated_n_reports_its_sign() {
        let r = canonical_observables(3).unwrap();
        let l = ObservableLabel::N(1, 2);
        let r = r.with_observable(l, r.get(l).unwrap().scale((-1.0f64).into())).unwrap();
        let rep = certify(&r, Tolerances::default()).unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.nij_signs["N12"], -1);
        assert_eq!(rep.nij_signs["N13"], 1);
        assert_eq!(rep.stopped_at, None);
    }

    #[test]
    fn report_json_keys() {
        let rep = certify(&canonical_observables(3).unwrap(), Tolerances::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
        for key in [
            "Tn_value",
            "eta_C",
            "eta_Q",
            "relation_residuals",
            "algebra_residuals",
            "subspace_dim",
            "nij_signs",
            "fidelity",
            "verdict",
            "tolerances",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["verdict"], "pass");
    }
}

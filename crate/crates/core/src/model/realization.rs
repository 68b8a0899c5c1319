use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ObservableLabel;
use crate::error::{Error, Result};
use crate::numerics::{DenseOperator, MatrixJson, StateVector};

/// Hermiticity / involution tolerance for inputs of exact provenance.
pub const EXACT_VALIDATION_TOL: f64 = 1e-8;
/// Tolerance for inputs that declare floating-point provenance.
pub const FLOATING_VALIDATION_TOL: f64 = 1e-6;

const NORM_TOL: f64 = 1e-10;

/// Where the numbers in a realization came from. Floating inputs (measured
/// or fitted data) get looser default tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    #[default]
    Exact,
    Floating,
}

impl Provenance {
    pub fn validation_tol(self) -> f64 {
        match self {
            Provenance::Exact => EXACT_VALIDATION_TOL,
            Provenance::Floating => FLOATING_VALIDATION_TOL,
        }
    }
}

/// A pure state together with the ±1-valued observables measured on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    n: usize,
    state: StateVector,
    observables: BTreeMap<ObservableLabel, DenseOperator>,
    provenance: Provenance,
}

impl Realization {
    /// Validates dimensions, normalisation and every observable.
    pub fn new(
        n: usize,
        state: StateVector,
        observables: BTreeMap<ObservableLabel, DenseOperator>,
    ) -> Result<Self> {
        Self::with_provenance(n, state, observables, Provenance::Exact)
    }

    pub fn with_provenance(
        n: usize,
        state: StateVector,
        observables: BTreeMap<ObservableLabel, DenseOperator>,
        provenance: Provenance,
    ) -> Result<Self> {
        let dim = state.dim();
        if dim == 0 {
            return Err(Error::InvalidState("empty state vector".into()));
        }
        let norm_tol = NORM_TOL.max(if provenance == Provenance::Floating {
            FLOATING_VALIDATION_TOL
        } else {
            0.0
        });
        let norm = state.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > norm_tol {
            return Err(Error::InvalidState(format!("norm {norm} is not 1")));
        }
        let tol = provenance.validation_tol();
        for (label, m) in &observables {
            if m.dim() != dim {
                return Err(Error::DimMismatch(dim, m.dim()));
            }
            if !label.is_valid_for(n) {
                return Err(Error::InvalidObservable {
                    label: label.to_string(),
                    reason: format!("index out of range for n = {n}"),
                });
            }
            m.validate_observable(tol).map_err(|reason| Error::InvalidObservable {
                label: label.to_string(),
                reason,
            })?;
        }
        Ok(Realization {
            n,
            state,
            observables,
            provenance,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.state.dim()
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn observables(&self) -> &BTreeMap<ObservableLabel, DenseOperator> {
        &self.observables
    }

    pub fn get(&self, label: ObservableLabel) -> Result<&DenseOperator> {
        self.observables
            .get(&label)
            .ok_or_else(|| Error::MissingLabel(label.to_string()))
    }

    /// Errors with the first label of the `n`-qubit scenario that is absent.
    pub fn require_complete(&self) -> Result<()> {
        for l in ObservableLabel::all(self.n) {
            self.get(l)?;
        }
        Ok(())
    }

    /// Same data with one observable replaced (re-validated).
    pub fn with_observable(&self, label: ObservableLabel, m: DenseOperator) -> Result<Self> {
        let mut obs = self.observables.clone();
        obs.insert(label, m);
        Self::with_provenance(self.n, self.state.clone(), obs, self.provenance)
    }

    pub fn with_state(&self, state: StateVector) -> Result<Self> {
        Self::with_provenance(self.n, state, self.observables.clone(), self.provenance)
    }

    /// `ψ → Uψ`, `M → U M U†` for every observable.
    pub fn conjugated(&self, u: &DenseOperator) -> Result<Self> {
        let state = u.apply(&self.state)?;
        let obs = self
            .observables
            .iter()
            .map(|(l, m)| Ok((*l, m.conjugate_by(u)?)))
            .collect::<Result<_>>()?;
        Self::with_provenance(self.n, state, obs, self.provenance)
    }

    /// Renames qubit `i` to `perm[i-1]` in every label; operators unchanged.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimMismatch(self.n, perm.len()));
        }
        let map = |i: usize| perm[i - 1];
        let obs = self
            .observables
            .iter()
            .map(|(l, m)| {
                let nl = match *l {
                    ObservableLabel::A(i) => ObservableLabel::A(map(i)),
                    ObservableLabel::B(i) => ObservableLabel::B(map(i)),
                    ObservableLabel::N(i, j) => ObservableLabel::n(map(i), map(j)),
                };
                (nl, m.clone())
            })
            .collect();
        Self::with_provenance(self.n, self.state.clone(), obs, self.provenance)
    }

    pub fn to_file(&self) -> RealizationFile {
        RealizationFile {
            n: self.n,
            dim: self.dim(),
            state: self.state.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
            observables: self
                .observables
                .iter()
                .map(|(l, m)| (l.to_string(), MatrixJson::from(m)))
                .collect(),
            provenance: match self.provenance {
                Provenance::Exact => None,
                Provenance::Floating => Some(Provenance::Floating),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serialisable")
    }

    /// Parses and validates. Shape problems map to [`Error::Schema`];
    /// numerically invalid observables to [`Error::InvalidObservable`].
    pub fn from_json(text: &str) -> Result<Self> {
        let file: RealizationFile =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        file.into_realization()
    }
}

/// On-disk realization layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RealizationFile {
    pub n: usize,
    pub dim: usize,
    pub state: Vec<[f64; 2]>,
    pub observables: BTreeMap<String, MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl RealizationFile {
    pub fn into_realization(self) -> Result<Realization> {
        let schema = |msg: String| Error::Schema(msg);
        if self.state.len() != self.dim {
            return Err(schema(format!(
                "state has {} amplitudes but dim is {}",
                self.state.len(),
                self.dim
            )));
        }
        let state = StateVector::new(
            self.state
                .iter()
                .map(|[re, im]| Complex64::new(*re, *im))
                .collect(),
        );
        let mut observables = BTreeMap::new();
        for (name, mj) in self.observables {
            let label: ObservableLabel = name
                .parse()
                .map_err(|_| schema(format!("unknown observable label {name:?}")))?;
            let rows = mj.0.len();
            if rows != self.dim || mj.0.iter().any(|r| r.len() != self.dim) {
                return Err(schema(format!("observable {name} is not {0}x{0}", self.dim)));
            }
            let m = DenseOperator::try_from(mj).map_err(|e| schema(e.to_string()))?;
            if observables.insert(label, m).is_some() {
                return Err(schema(format!("duplicate observable {name}")));
            }
        }
        Realization::with_provenance(
            self.n,
            state,
            observables,
            self.provenance.unwrap_or_default(),
        )
        .map_err(|e| match e {
            Error::DimMismatch(a, b) => schema(format!("dimension mismatch {a} vs {b}")),
            other => other,
        })
    }
}

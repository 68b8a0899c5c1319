//! The n-qubit inequality family, its bounds, and evaluation.
//!
//! Every inequality is a list of integer-weighted correlators over the labels
//! `Aᵢ`, `Bᵢ`, `Nᵢⱼ`. The temporal flavour uses π-correlators (averaged over
//! a permutation cover); the non-contextual flavour uses plain expectations.

mod bound;
mod evaluate;
mod family;

pub use bound::{classical_bound_bruteforce, classical_optimum, ClassicalOptimum, MAX_BRUTE_FORCE_LABELS};
pub use evaluate::{evaluate, ordering_spread, EvaluationReport, TermValue, VIOLATION_MARGIN};
pub use family::{families, family, InequalityFamily, Noncontextual, Temporal};

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::correlators::PiCorrelator;
use crate::error::{Error, Result};
use crate::model::ObservableLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Noncontextual,
    Temporal,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Noncontextual => "noncontextual",
            Flavor::Temporal => "temporal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    pub correlator: PiCorrelator,
}

/// Closed-form bounds and the single-A weight `αₙ = C(n−1, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub eta_c: i64,
    pub eta_q: i64,
    pub alpha: i64,
}

fn binom(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::QubitCount(n, "at least 3 qubits are required"));
    }
    Ok(())
}

/// Largest `n` for which the closed forms fit comfortably in `i64`.
pub const MAX_FORMULA_QUBITS: usize = 100_000;

/// `η_C = 2αₙn + 2C(n,3)`, `η_Q = 2αₙn + 4C(n,3)`.
pub fn bound_formulas(n: usize) -> Result<Bounds> {
    check_n(n)?;
    if n > MAX_FORMULA_QUBITS {
        return Err(Error::QubitCount(n, "too large for the closed-form bounds"));
    }
    let alpha = binom(n - 1, 2);
    let an = 2 * alpha * n as i64;
    Ok(Bounds {
        eta_c: an + 2 * binom(n, 3),
        eta_q: an + 4 * binom(n, 3),
        alpha,
    })
}

/// Coefficient and label multiset of every term, in report order.
fn catalogue(n: usize) -> Vec<(i64, Vec<ObservableLabel>)> {
    use ObservableLabel::{A, B};
    let alpha = binom(n - 1, 2);
    let with_a = |set: &[usize]| -> Vec<ObservableLabel> {
        (1..=n).map(|q| if set.contains(&q) { A(q) } else { B(q) }).collect()
    };
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let mut labels = with_a(&[i, j]);
            labels.push(ObservableLabel::n(i, j));
            out.push((n as i64 - 2, labels));
        }
    }
    for i in 1..=n {
        out.push((alpha, with_a(&[i])));
    }
    let mut triples = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                triples.push((i, j, k));
            }
        }
    }
    for &(i, j, k) in &triples {
        out.push((-1, with_a(&[i, j, k])));
    }
    for &(i, j, k) in &triples {
        let (nij, njk, nki) = (ObservableLabel::n(i, j), ObservableLabel::n(j, k), ObservableLabel::n(k, i));
        for pair in [[nij, njk], [njk, nki], [nki, nij]] {
            out.push((1, pair.to_vec()));
        }
    }
    out
}

/// A weighted correlator functional with its classical and quantum bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    n: usize,
    terms: Vec<Term>,
    eta_c: i64,
    eta_q: i64,
    flavor: Flavor,
}

impl Inequality {
    pub fn new(n: usize, terms: Vec<Term>, eta_c: i64, eta_q: i64, flavor: Flavor) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Empty("term list"));
        }
        for t in &terms {
            if let Some(l) = t.correlator.labels().iter().find(|l| !l.is_valid_for(n)) {
                return Err(Error::InvalidArgument(format!("label {l} is out of range for n = {n}")));
            }
        }
        Ok(Inequality {
            n,
            terms,
            eta_c,
            eta_q,
            flavor,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn eta_c(&self) -> i64 {
        self.eta_c
    }

    pub fn eta_q(&self) -> i64 {
        self.eta_q
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// Distinct labels appearing in any term, sorted.
    pub fn labels(&self) -> Vec<ObservableLabel> {
        self.terms
            .iter()
            .flat_map(|t| t.correlator.labels().iter().copied())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// `Σ|c|`, the value reached when every term hits ±1 with the right sign.
    pub fn algebraic_bound(&self) -> i64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }

    pub fn to_export(&self) -> Vec<ExportedTerm> {
        self.terms
            .iter()
            .map(|t| ExportedTerm {
                coeff: t.coeff,
                labels: t.correlator.labels().iter().map(|l| l.to_string()).collect(),
                cover: t
                    .correlator
                    .sequences()
                    .iter()
                    .map(|s| s.iter().map(|l| l.to_string()).collect())
                    .collect(),
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_export()).expect("serialisable")
    }

    /// Parses an exported term list. `n` is the largest index mentioned.
    /// Bounds come from the matching builder when the terms coincide with
    /// one, otherwise `η_C` is brute-forced and `η_Q` is `Σ|c|`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Vec<ExportedTerm> = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        if raw.is_empty() {
            return Err(Error::Schema("inequality has no terms".into()));
        }
        let parse = |s: &String| {
            s.parse::<ObservableLabel>()
                .map_err(|_| Error::Schema(format!("unknown observable label {s:?}")))
        };
        let mut terms = Vec::with_capacity(raw.len());
        for t in &raw {
            let labels = t.labels.iter().map(parse).collect::<Result<Vec<_>>>()?;
            if labels.is_empty() || t.cover.is_empty() {
                return Err(Error::Schema("term without labels or cover".into()));
            }
            let mut cover = Vec::with_capacity(t.cover.len());
            for seq in &t.cover {
                let seq = seq.iter().map(parse).collect::<Result<Vec<_>>>()?;
                cover.push(positions_of(&labels, &seq)?);
            }
            let correlator =
                PiCorrelator::with_cover(labels, cover).map_err(|e| Error::Schema(e.to_string()))?;
            terms.push(Term {
                coeff: t.coeff,
                correlator,
            });
        }
        let n = terms
            .iter()
            .flat_map(|t| t.correlator.labels().iter().map(|l| l.max_index()))
            .max()
            .unwrap_or(0);
        let flavor = if terms.iter().all(|t| t.correlator.covers_all_orderings()) {
            Flavor::Temporal
        } else {
            Flavor::Noncontextual
        };
        let builtin = match flavor {
            Flavor::Temporal => build_tn(n),
            Flavor::Noncontextual => build_in(n),
        };
        if let Ok(b) = builtin {
            if b.terms == terms {
                return Ok(b);
            }
        }
        let mut ineq = Inequality::new(n, terms, 0, 0, flavor)?;
        ineq.eta_q = ineq.algebraic_bound();
        ineq.eta_c = classical_bound_bruteforce(&ineq, 0)?;
        Ok(ineq)
    }
}

/// Maps a label sequence onto positions of the term's multiset; repeated
/// labels consume positions left to right.
fn positions_of(labels: &[ObservableLabel], seq: &[ObservableLabel]) -> Result<Vec<usize>> {
    if seq.len() != labels.len() {
        return Err(Error::Schema(format!(
            "cover sequence has {} labels, term has {}",
            seq.len(),
            labels.len()
        )));
    }
    let mut used = vec![false; labels.len()];
    seq.iter()
        .map(|l| {
            let p = (0..labels.len())
                .find(|&p| !used[p] && labels[p] == *l)
                .ok_or_else(|| Error::Schema(format!("cover mentions {l} which is not in the term")))?;
            used[p] = true;
            Ok(p)
        })
        .collect()
}

/// On-disk term layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportedTerm {
    pub coeff: i64,
    pub labels: Vec<String>,
    pub cover: Vec<Vec<String>>,
}

/// Temporal inequality `Tₙ` with π-correlators. Needs `n + 1 ≤ 8` for the
/// longest term's cover.
pub fn build_tn(n: usize) -> Result<Inequality> {
    check_n(n)?;
    let b = bound_formulas(n)?;
    let terms = catalogue(n)
        .into_iter()
        .map(|(coeff, labels)| Ok(Term { coeff, correlator: PiCorrelator::new(labels)? }))
        .collect::<Result<Vec<_>>>()?;
    Inequality::new(n, terms, b.eta_c, b.eta_q, Flavor::Temporal)
}

pub fn build_t3() -> Inequality {
    build_tn(3).expect("n = 3 is always valid")
}

/// Non-contextual inequality `Iₙ`: same terms, plain expectations.
pub fn build_in(n: usize) -> Result<Inequality> {
    check_n(n)?;
    let b = bound_formulas(n)?;
    let terms = catalogue(n)
        .into_iter()
        .map(|(coeff, labels)| Ok(Term { coeff, correlator: PiCorrelator::plain(labels)? }))
        .collect::<Result<Vec<_>>>()?;
    Inequality::new(n, terms, b.eta_c, b.eta_q, Flavor::Noncontextual)
}

pub fn build_i3() -> Inequality {
    build_in(3).expect("n = 3 is always valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ObservableLabel::*;

    #[test]
    fn formulas() {
        let f = |n| {
            let b = bound_formulas(n).unwrap();
            (b.eta_c, b.eta_q, b.alpha)
        };
        assert_eq!(f(3), (8, 10, 1));
        assert_eq!(f(4), (32, 40, 3));
        assert_eq!(f(5), (80, 100, 6));
        assert!(bound_formulas(2).is_err());
    }

    #[test]
    fn three_qubit_terms() {
        let t = build_t3();
        assert_eq!(t.terms().len(), 10);
        let negative: Vec<_> = t.terms().iter().filter(|t| t.coeff < 0).collect();
        assert_eq!(negative.len(), 1);
        assert_eq!(negative[0].correlator.labels(), &[A(1), A(2), A(3)]);
        assert!(t.terms().iter().all(|t| t.coeff.abs() == 1));
        assert_eq!(t.terms()[0].correlator.labels(), &[A(1), A(2), B(3), N(1, 2)]);
        assert_eq!(t.algebraic_bound(), 10);
        assert_eq!(t.labels().len(), 9);
    }

    #[test]
    fn term_counts_and_weights() {
        for n in 3..=7 {
            let t = build_tn(n).unwrap();
            let c2 = binom(n, 2) as usize;
            let c3 = binom(n, 3) as usize;
            assert_eq!(t.terms().len(), c2 + n + 4 * c3, "n = {n}");
            assert_eq!(t.algebraic_bound(), t.eta_q());
            assert!(t.eta_c() < t.eta_q());
            assert!(t.terms().iter().all(|t| t.correlator.covers_all_orderings()));
        }
        assert_eq!(build_tn(4).unwrap().terms().len(), 26);
        assert!(matches!(build_tn(8), Err(Error::CoverTooLong(9, 8))));
        assert!(build_tn(2).is_err());
    }

    #[test]
    fn n_pairs_per_triple() {
        let t = build_tn(4).unwrap();
        let pairs: Vec<Vec<ObservableLabel>> = t
            .terms()
            .iter()
            .filter(|t| t.correlator.len() == 2)
            .map(|t| t.correlator.labels().to_vec())
            .collect();
        assert_eq!(pairs.len(), 12);
        assert_eq!(pairs[0], vec![N(1, 2), N(2, 3)]);
        assert_eq!(pairs[1], vec![N(1, 3), N(2, 3)]);
        assert_eq!(pairs[2], vec![N(1, 2), N(1, 3)]);
    }

    #[test]
    fn noncontextual_matches_temporal_terms() {
        let i = build_in(4).unwrap();
        let t = build_tn(4).unwrap();
        assert_eq!(i.flavor(), Flavor::Noncontextual);
        for (a, b) in i.terms().iter().zip(t.terms()) {
            assert_eq!(a.coeff, b.coeff);
            assert_eq!(a.correlator.labels(), b.correlator.labels());
            assert_eq!(a.correlator.cover().len(), 1);
        }
    }

    #[test]
    fn export_round_trip() {
        for ineq in [build_t3(), build_i3(), build_tn(4).unwrap()] {
            let back = Inequality::from_json(&ineq.to_json()).unwrap();
            assert_eq!(back, ineq);
        }
        let t = build_t3();
        let exported = t.to_export();
        assert_eq!(exported[0].labels, ["A1", "A2", "B3", "N12"]);
        assert_eq!(exported[0].cover.len(), crate::correlators::permutation_cover(4).unwrap().len());
        assert_eq!(exported[0].cover[0], exported[0].labels);
    }

    #[test]
    fn custom_inequality_gets_computed_bounds() {
        let text = r#"[
            {"coeff": 1, "labels": ["A1", "B1"], "cover": [["A1", "B1"]]},
            {"coeff": 1, "labels": ["A1", "A2"], "cover": [["A1", "A2"]]},
            {"coeff": -1, "labels": ["B1", "A2"], "cover": [["B1", "A2"]]}
        ]"#;
        let ineq = Inequality::from_json(text).unwrap();
        assert_eq!(ineq.n(), 2);
        assert_eq!(ineq.eta_q(), 3);
        assert_eq!(ineq.eta_c(), 1);
        assert_eq!(ineq.flavor(), Flavor::Temporal);
    }

    #[test]
    fn bad_exports_are_schema_errors() {
        for text in [
            "{}",
            "[]",
            r#"[{"coeff": 1, "labels": ["Q1"], "cover": [["Q1"]]}]"#,
            r#"[{"coeff": 1, "labels": ["A1"], "cover": [["B1"]]}]"#,
            r#"[{"coeff": 1, "labels": ["A1", "A2"], "cover": [["A1"]]}]"#,
            r#"[{"coeff": 1, "labels": ["A1"], "cover": []}]"#,
        ] {
            assert!(matches!(Inequality::from_json(text), Err(Error::Schema(_))), "{text}");
        }
    }
}

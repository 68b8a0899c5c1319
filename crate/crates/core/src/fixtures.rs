//! Named realization generators and the reproducible fixture set.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certify::{certify, Tolerances, Verdict};
use crate::error::{Error, Result};
use crate::inequalities::{build_tn, classical_optimum, evaluate};
use crate::model::{
    canonical_observables, classical_realization, embed_realization, perturb_realization, ObservableLabel,
    Realization,
};
use crate::numerics::random::random_unitary;
use crate::numerics::StateVector;

pub const DEFAULT_SEED: u64 = 7;
pub const PERTURBATION: f64 = 0.1;
pub const JUNK_DIM: usize = 8;
pub const CLASSICAL_DIM: usize = 2;
pub const FIXTURE_QUBITS: [usize; 3] = [3, 4, 5];

/// A way of producing an `n`-qubit realization from a seed.
pub trait RealizationSource: Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn generate(&self, n: usize, seed: u64) -> Result<Realization>;
}

pub struct Canonical;
pub struct Embedded;
pub struct Perturbed;
pub struct Classical;
pub struct Rotated;
pub struct EmbeddedRotated;
pub struct ProductState;
pub struct NegatedN12;

impl RealizationSource for Canonical {
    fn name(&self) -> &'static str {
        "canonical"
    }
    fn description(&self) -> &'static str {
        "graph state with Aᵢ = Xᵢ, Bᵢ = Zᵢ, Nᵢⱼ = XᵢXⱼ∏Z"
    }
    fn generate(&self, n: usize, _seed: u64) -> Result<Realization> {
        canonical_observables(n)
    }
}

impl RealizationSource for Embedded {
    fn name(&self) -> &'static str {
        "embedded"
    }
    fn description(&self) -> &'static str {
        "canonical ⊕ an 8-dimensional block of random involutions"
    }
    fn generate(&self, n: usize, seed: u64) -> Result<Realization> {
        embed_realization(&canonical_observables(n)?, JUNK_DIM, seed)
    }
}

impl RealizationSource for Perturbed {
    fn name(&self) -> &'static str {
        "perturbed"
    }
    fn description(&self) -> &'static str {
        "canonical with every observable rotated by exp(0.1·iH)"
    }
    fn generate(&self, n: usize, seed: u64) -> Result<Realization> {
        perturb_realization(&canonical_observables(n)?, PERTURBATION, seed)
    }
}

impl RealizationSource for Classical {
    fn name(&self) -> &'static str {
        "classical"
    }
    fn description(&self) -> &'static str {
        "±𝟙 observables from an optimal deterministic assignment"
    }
    fn generate(&self, n: usize, _seed: u64) -> Result<Realization> {
        let opt = classical_optimum(&build_tn(n)?, 0)?;
        classical_realization(n, &opt.assignment, CLASSICAL_DIM)
    }
}

impl RealizationSource for Rotated {
    fn name(&self) -> &'static str {
        "rotated"
    }
    fn description(&self) -> &'static str {
        "canonical conjugated by a random global unitary"
    }
    fn generate(&self, n: usize, seed: u64) -> Result<Realization> {
        let base = canonical_observables(n)?;
        let u = random_unitary(base.dim(), &mut ChaCha8Rng::seed_from_u64(seed));
        base.conjugated(&u)
    }
}

impl RealizationSource for EmbeddedRotated {
    fn name(&self) -> &'static str {
        "embedded-rotated"
    }
    fn description(&self) -> &'static str {
        "embedded, then conjugated by a random global unitary"
    }
    fn generate(&self, n: usize, seed: u64) -> Result<Realization> {
        let emb = Embedded.generate(n, seed)?;
        let u = random_unitary(emb.dim(), &mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(1)));
        emb.conjugated(&u)
    }
}

impl RealizationSource for ProductState {
    fn name(&self) -> &'static str {
        "product"
    }
    fn description(&self) -> &'static str {
        "canonical observables on |0…0⟩"
    }
    fn generate(&self, n: usize, _seed: u64) -> Result<Realization> {
        let base = canonical_observables(n)?;
        base.with_state(StateVector::basis(base.dim(), 0))
    }
}

impl RealizationSource for NegatedN12 {
    fn name(&self) -> &'static str {
        "negated-n12"
    }
    fn description(&self) -> &'static str {
        "canonical with N₁₂ replaced by −N₁₂"
    }
    fn generate(&self, n: usize, _seed: u64) -> Result<Realization> {
        let base = canonical_observables(n)?;
        let l = ObservableLabel::N(1, 2);
        base.with_observable(l, base.get(l)?.scale((-1.0f64).into()))
    }
}

static SOURCES: [&dyn RealizationSource; 8] = [
    &Canonical,
    &Embedded,
    &Perturbed,
    &Classical,
    &Rotated,
    &EmbeddedRotated,
    &ProductState,
    &NegatedN12,
];

pub fn sources() -> &'static [&'static dyn RealizationSource] {
    &SOURCES
}

pub fn source(name: &str) -> Result<&'static dyn RealizationSource> {
    sources()
        .iter()
        .copied()
        .find(|s| s.name() == name)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown realization source {name:?}")))
}

/// Sources written by [`write_fixtures`], in file order.
pub const FIXTURE_SOURCES: [&str; 5] = ["canonical", "embedded", "perturbed", "classical", "embedded-rotated"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub source: String,
    pub n: usize,
    pub dim: usize,
    pub expected_total: f64,
    pub expected_verdict: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialisable")
    }

    /// Expected totals keyed by `(source, n)`.
    pub fn totals(&self) -> BTreeMap<(String, usize), f64> {
        self.entries
            .iter()
            .map(|e| ((e.source.clone(), e.n), e.expected_total))
            .collect()
    }
}

/// Totals are recorded to nine decimals so exact values read as integers.
fn round_total(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

/// File contents of the fixture set, without touching the disk.
pub fn fixture_files(seed: u64) -> Result<(Vec<(String, String)>, Manifest)> {
    let mut files = Vec::new();
    let mut entries = Vec::new();
    for n in FIXTURE_QUBITS {
        let ineq = build_tn(n)?;
        for name in FIXTURE_SOURCES {
            let real = source(name)?.generate(n, seed)?;
            let file = format!("{name}_n{n}.json");
            let total = evaluate(&ineq, &real)?.total;
            let verdict = certify(&real, Tolerances::for_provenance(real.provenance()))?.verdict;
            entries.push(ManifestEntry {
                file: file.clone(),
                source: name.to_string(),
                n,
                dim: real.dim(),
                expected_total: round_total(total),
                expected_verdict: match verdict {
                    Verdict::Pass => "pass".into(),
                    Verdict::Fail => "fail".into(),
                },
            });
            files.push((file, real.to_json()));
        }
    }
    Ok((files, Manifest { seed, entries }))
}

/// Writes every fixture and `manifest.json` into `dir` (created if missing).
pub fn write_fixtures(dir: &Path, seed: u64) -> Result<Manifest> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", dir.display()));
    let (files, manifest) = fixture_files(seed)?;
    fs::create_dir_all(dir).map_err(io)?;
    for (name, text) in &files {
        fs::write(dir.join(name), text).map_err(io)?;
    }
    fs::write(dir.join("manifest.json"), manifest.to_json()).map_err(io)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        assert_eq!(sources().len(), 8);
        for s in sources() {
            assert_eq!(source(s.name()).unwrap().name(), s.name());
        }
        assert!(source("bogus").is_err());
    }

    #[test]
    fn sources_are_deterministic() {
        for s in sources() {
            let a = s.generate(3, 5).unwrap().to_json();
            let b = s.generate(3, 5).unwrap().to_json();
            assert_eq!(a, b, "{}", s.name());
        }
    }

    #[test]
    fn zero_perturbation_is_canonical_bytes() {
        let base = canonical_observables(3).unwrap();
        let p = perturb_realization(&base, 0.0, DEFAULT_SEED).unwrap();
        assert_eq!(p.to_json(), base.to_json());
    }
}

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::Inequality;
use crate::error::{Error, Result};
use crate::model::ObservableLabel;

/// Exhaustive search is refused above this many distinct labels.
pub const MAX_BRUTE_FORCE_LABELS: usize = 24;

/// Assignments per parallel chunk.
const CHUNK: u64 = 1 << 12;

/// Best deterministic assignment. Ties go to the lowest assignment index,
/// where bit `b` set means label `b` (in sorted order) takes `−1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalOptimum {
    pub value: i64,
    pub assignment: BTreeMap<ObservableLabel, i8>,
}

/// Maximum of `Σ c·∏m` over all ±1 assignments. `workers = 0` uses the
/// global thread pool.
pub fn classical_bound_bruteforce(ineq: &Inequality, workers: usize) -> Result<i64> {
    Ok(classical_optimum(ineq, workers)?.value)
}

pub fn classical_optimum(ineq: &Inequality, workers: usize) -> Result<ClassicalOptimum> {
    let labels = ineq.labels();
    if labels.len() > MAX_BRUTE_FORCE_LABELS {
        return Err(Error::TooManyLabels(labels.len(), MAX_BRUTE_FORCE_LABELS));
    }
    // A term's value is the parity of its assigned −1s; repeated labels cancel.
    let terms: Vec<(i64, u32)> = ineq
        .terms()
        .iter()
        .map(|t| {
            let mask = t.correlator.labels().iter().fold(0u32, |m, l| {
                m ^ (1 << labels.binary_search(l).expect("label collected"))
            });
            (t.coeff, mask)
        })
        .collect();
    let total = 1u64 << labels.len();
    let search = || {
        (0..total.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| best_in_range(&terms, c * CHUNK, ((c + 1) * CHUNK).min(total)))
            .reduce(|| (i64::MIN, u64::MAX), pick)
    };
    let (value, best) = if workers == 0 {
        search()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(search)
    };
    let assignment = labels
        .iter()
        .enumerate()
        .map(|(b, l)| (*l, if best >> b & 1 == 1 { -1 } else { 1 }))
        .collect();
    Ok(ClassicalOptimum { value, assignment })
}

fn pick(a: (i64, u64), b: (i64, u64)) -> (i64, u64) {
    if a.0 > b.0 || (a.0 == b.0 && a.1 < b.1) {
        a
    } else {
        b
    }
}

fn best_in_range(terms: &[(i64, u32)], start: u64, end: u64) -> (i64, u64) {
    let mut best = (i64::MIN, u64::MAX);
    for a in start..end {
        let a32 = a as u32;
        let v: i64 = terms
            .iter()
            .map(|&(c, m)| if (m & a32).count_ones().is_multiple_of(2) { c } else { -c })
            .sum();
        if v > best.0 {
            best = (v, a);
        }
    }
    best
}

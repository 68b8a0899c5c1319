//! Sequential correlations and permutation-averaged (π) correlators.
//!
//! A measurement sequence `M₁ → … → M_k` has the correlation
//! `2^{1−k} ⟨ψ|{M₁,{M₂,…,{M_{k−1},M_k}}}|ψ⟩`. Expanding the nested
//! anticommutator gives `2^{k−1}` operator orderings; a π-correlator averages
//! over a set of sequences whose orderings jointly cover all `k!`
//! permutations, so no commutation assumption is needed.
//!
//! Sequences and orderings are permutations of positions `0..k` into the
//! label list of a term.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ObservableLabel, Realization};
use crate::numerics::{Kernel, LinearMap, StateVector};

/// Longest sequence for which covers are built (`8! = 40320` orderings).
pub const MAX_COVER_LEN: usize = 8;

/// Imaginary parts of a correlator above this signal non-Hermitian input.
pub const IMAG_TOL: f64 = 1e-9;

/// Orderings produced by expanding the nested anticommutator of `seq`:
/// `orderings(m, T) = {m·o : o ∈ orderings(T)} ∪ {o·m : o ∈ orderings(T)}`.
pub fn induced_orderings(seq: &[usize]) -> Vec<Vec<usize>> {
    match seq.split_first() {
        None => vec![vec![]],
        Some((&head, [])) => vec![vec![head]],
        Some((&head, tail)) => {
            let inner = induced_orderings(tail);
            let mut out = Vec::with_capacity(inner.len() * 2);
            for o in &inner {
                let mut w = Vec::with_capacity(o.len() + 1);
                w.push(head);
                w.extend_from_slice(o);
                out.push(w);
            }
            for o in &inner {
                let mut w = o.clone();
                w.push(head);
                out.push(w);
            }
            out
        }
    }
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// Lexicographic rank of a permutation of `0..k`.
fn perm_rank(p: &[usize]) -> usize {
    let k = p.len();
    let mut rank = 0;
    for i in 0..k {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
        rank += smaller * factorial(k - 1 - i);
    }
    rank
}

/// All permutations of `0..k` in lexicographic order.
pub fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..k).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Lower bound `⌈k!/2^{k−1}⌉` on the size of any cover.
pub fn cover_lower_bound(k: usize) -> usize {
    if k == 0 {
        return 1;
    }
    factorial(k).div_ceil(1 << (k - 1))
}

/// Greedy set cover of the symmetric group by sequences. Candidates are the
/// permutations of `0..k` in lexicographic order, ties go to the earliest,
/// so the identity sequence is always first. Results are cached per `k`.
pub fn permutation_cover(k: usize) -> Result<&'static [Vec<usize>]> {
    static CACHE: [OnceLock<Vec<Vec<usize>>>; MAX_COVER_LEN + 1] =
        [const { OnceLock::new() }; MAX_COVER_LEN + 1];
    if k == 0 {
        return Err(Error::Empty("sequence"));
    }
    if k > MAX_COVER_LEN {
        return Err(Error::CoverTooLong(k, MAX_COVER_LEN));
    }
    Ok(CACHE[k].get_or_init(|| greedy_cover(k)))
}

fn greedy_cover(k: usize) -> Vec<Vec<usize>> {
    let candidates = all_permutations(k);
    let covers: Vec<Vec<usize>> = candidates
        .iter()
        .map(|s| induced_orderings(s).iter().map(|o| perm_rank(o)).collect())
        .collect();
    let total = candidates.len();
    let mut covered = vec![false; total];
    let mut remaining = total;

    // Lazy greedy: stale gains are upper bounds because gains only shrink.
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> = covers
        .iter()
        .enumerate()
        .map(|(i, c)| (c.len(), Reverse(i)))
        .collect();
    let mut chosen = Vec::new();
    while remaining > 0 {
        let (_, Reverse(idx)) = heap.pop().expect("cover exists");
        let gain = covers[idx].iter().filter(|&&r| !covered[r]).count();
        if gain == 0 {
            continue;
        }
        let beats_rest = match heap.peek() {
            None => true,
            Some(&top) => (gain, Reverse(idx)) >= top,
        };
        if !beats_rest {
            heap.push((gain, Reverse(idx)));
            continue;
        }
        for &r in &covers[idx] {
            if !covered[r] {
                covered[r] = true;
                remaining -= 1;
            }
        }
        chosen.push(candidates[idx].clone());
    }
    chosen
}

/// True when the orderings induced by `cover` exhaust all `k!` permutations.
pub fn covers_symmetric_group(k: usize, cover: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; factorial(k)];
    for s in cover {
        if s.len() != k {
            return false;
        }
        for o in induced_orderings(s) {
            seen[perm_rank(&o)] = true;
        }
    }
    seen.iter().all(|&b| b)
}

/// `{M₁,{M₂,…}}|v⟩` without forming the nested operator.
pub fn apply_nested_anticommutator<M: LinearMap>(ops: &[&M], v: &StateVector) -> StateVector {
    match ops {
        [] => v.clone(),
        [m] => m.apply_to(v),
        [m, rest @ ..] => {
            let inner = apply_nested_anticommutator(rest, v);
            let left = m.apply_to(&inner);
            let right = apply_nested_anticommutator(rest, &m.apply_to(v));
            left.add(&right)
        }
    }
}

/// Unnormalised `⟨ψ|{M₁,{…}}|ψ⟩`, complex.
pub fn nested_expectation<M: LinearMap>(ops: &[&M], psi: &StateVector) -> Result<Complex64> {
    if ops.is_empty() {
        return Err(Error::Empty("sequence"));
    }
    if let Some(m) = ops.iter().find(|m| m.dim() != psi.dim()) {
        return Err(Error::DimMismatch(psi.dim(), m.dim()));
    }
    Ok(psi.inner(&apply_nested_anticommutator(ops, psi)))
}

/// `2^{1−k} ⟨ψ|{M₁,{…}}|ψ⟩` for the labels in measurement order.
pub fn seq_correlation(real: &Realization, seq: &[ObservableLabel]) -> Result<f64> {
    let ops = seq
        .iter()
        .map(|l| real.get(*l))
        .collect::<Result<Vec<_>>>()?;
    normalised(nested_expectation(&ops, real.state())?, ops.len())
}

fn normalised(raw: Complex64, k: usize) -> Result<f64> {
    let value = raw / f64::powi(2.0, k as i32 - 1);
    if value.im.abs() > IMAG_TOL {
        return Err(Error::NonReal(value.im));
    }
    Ok(value.re)
}

/// A multiset of labels with the sequences averaged over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiCorrelator {
    labels: Vec<ObservableLabel>,
    /// Each entry is a measurement order, as positions into `labels`.
    cover: Vec<Vec<usize>>,
}

impl PiCorrelator {
    /// Sorts the labels and attaches the canonical cover for their count.
    pub fn new(mut labels: Vec<ObservableLabel>) -> Result<Self> {
        labels.sort();
        let cover = permutation_cover(labels.len())?.to_vec();
        Ok(PiCorrelator { labels, cover })
    }

    /// A single sequence in sorted label order. Its orderings do not cover
    /// the symmetric group; used for plain (commuting) expectations.
    pub fn plain(mut labels: Vec<ObservableLabel>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Empty("label list"));
        }
        labels.sort();
        let cover = vec![(0..labels.len()).collect()];
        Ok(PiCorrelator { labels, cover })
    }

    /// Explicit cover over `labels` as given (not re-sorted).
    pub fn with_cover(labels: Vec<ObservableLabel>, cover: Vec<Vec<usize>>) -> Result<Self> {
        let k = labels.len();
        if k == 0 || cover.is_empty() {
            return Err(Error::Empty("label list or cover"));
        }
        for s in &cover {
            let mut sorted = s.clone();
            sorted.sort_unstable();
            if sorted != (0..k).collect::<Vec<_>>() {
                return Err(Error::InvalidArgument(format!(
                    "cover entry {s:?} is not a permutation of 0..{k}"
                )));
            }
        }
        Ok(PiCorrelator { labels, cover })
    }

    pub fn labels(&self) -> &[ObservableLabel] {
        &self.labels
    }

    pub fn cover(&self) -> &[Vec<usize>] {
        &self.cover
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn covers_all_orderings(&self) -> bool {
        covers_symmetric_group(self.labels.len(), &self.cover)
    }

    /// The cover as label sequences.
    pub fn sequences(&self) -> Vec<Vec<ObservableLabel>> {
        self.cover
            .iter()
            .map(|s| s.iter().map(|&p| self.labels[p]).collect())
            .collect()
    }
}

/// Mean of [`seq_correlation`] over the cover. Sequences are evaluated in
/// parallel and summed in cover order.
pub fn pi_correlation(real: &Realization, pc: &PiCorrelator) -> Result<f64> {
    let kernels = pc
        .labels()
        .iter()
        .map(|l| Ok(Kernel::of(real.get(*l)?)))
        .collect::<Result<Vec<_>>>()?;
    let psi = real.state();
    let values = pc
        .cover()
        .par_iter()
        .map(|s| {
            let ops: Vec<&Kernel> = s.iter().map(|&p| &kernels[p]).collect();
            normalised(nested_expectation(&ops, psi)?, ops.len())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::canonical_observables;
    use std::collections::BTreeSet;
    use ObservableLabel::*;

    fn set(v: Vec<Vec<usize>>) -> BTreeSet<Vec<usize>> {
        v.into_iter().collect()
    }

    #[test]
    fn orderings_of_short_sequences() {
        assert_eq!(set(induced_orderings(&[0, 1])), set(vec![vec![0, 1], vec![1, 0]]));
        assert_eq!(
            set(induced_orderings(&[0, 1, 2])),
            set(vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 2, 0], vec![2, 1, 0]])
        );
        // (M₂, M₁, M₃) → {213, 231, 132, 312}
        assert_eq!(
            set(induced_orderings(&[1, 0, 2])),
            set(vec![vec![1, 0, 2], vec![1, 2, 0], vec![0, 2, 1], vec![2, 0, 1]])
        );
    }

    #[test]
    fn orderings_are_distinct() {
        for k in 1..=6 {
            let id: Vec<usize> = (0..k).collect();
            let o = induced_orderings(&id);
            assert_eq!(o.len(), 1 << (k - 1));
            assert_eq!(set(o).len(), 1 << (k - 1));
        }
    }

    #[test]
    fn small_covers() {
        assert_eq!(permutation_cover(1).unwrap(), &[vec![0]]);
        assert_eq!(permutation_cover(2).unwrap(), &[vec![0, 1]]);
        assert_eq!(permutation_cover(3).unwrap(), &[vec![0, 1, 2], vec![1, 0, 2]]);
        let c4 = permutation_cover(4).unwrap();
        assert!(covers_symmetric_group(4, c4));
        assert!(c4.len() >= 3);
        assert!(matches!(permutation_cover(9), Err(Error::CoverTooLong(9, 8))));
        assert!(permutation_cover(0).is_err());
    }

    #[test]
    fn covers_are_near_minimal() {
        for k in 1..=7 {
            let c = permutation_cover(k).unwrap();
            assert!(covers_symmetric_group(k, c), "k = {k}");
            let lb = cover_lower_bound(k);
            assert!(c.len() >= lb && c.len() <= 2 * lb, "k = {k}: {} vs {lb}", c.len());
            assert_eq!(c[0], (0..k).collect::<Vec<_>>());
        }
    }

    #[test]
    fn permutation_ranks_are_lexicographic() {
        for (i, p) in all_permutations(4).iter().enumerate() {
            assert_eq!(perm_rank(p), i);
        }
    }

    #[test]
    fn canonical_three_qubit_sequences() {
        let r = canonical_observables(3).unwrap();
        assert!((seq_correlation(&r, &[A(1), A(2), A(3)]).unwrap() + 1.0).abs() < 1e-12);
        assert!((seq_correlation(&r, &[A(1), A(2), B(3), N(1, 2)]).unwrap() - 1.0).abs() < 1e-12);
        let single = seq_correlation(&r, &[B(2)]).unwrap();
        let direct = r.state().inner(&r.get(B(2)).unwrap().apply(r.state()).unwrap()).re;
        assert!((single - direct).abs() < 1e-15);
    }

    #[test]
    fn canonical_three_qubit_pi() {
        let r = canonical_observables(3).unwrap();
        let pc = PiCorrelator::new(vec![A(1), B(2), B(3)]).unwrap();
        assert!((pi_correlation(&r, &pc).unwrap() - 1.0).abs() < 1e-12);
        let pc = PiCorrelator::new(vec![N(2, 3), N(1, 3)]).unwrap();
        assert!((pi_correlation(&r, &pc).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn missing_label_is_an_error() {
        let r = canonical_observables(3).unwrap();
        assert!(matches!(
            seq_correlation(&r, &[A(4)]),
            Err(Error::MissingLabel(s)) if s == "A4"
        ));
    }

    #[test]
    fn cover_validation() {
        assert!(PiCorrelator::with_cover(vec![A(1), A(2)], vec![vec![0, 0]]).is_err());
        assert!(PiCorrelator::with_cover(vec![A(1), A(2)], vec![vec![1, 0]]).is_ok());
        assert!(!PiCorrelator::plain(vec![A(1), A(2), A(3)]).unwrap().covers_all_orderings());
        assert!(PiCorrelator::new(vec![A(1), A(2), A(3)]).unwrap().covers_all_orderings());
    }
}

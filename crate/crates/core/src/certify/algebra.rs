//! Commutation and anticommutation structure, on the state and as operators.

use rayon::prelude::*;

use super::Residuals;
use crate::error::Result;
use crate::model::{ObservableLabel, Realization};

use ObservableLabel::{A, B};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bracket {
    Commutator,
    Anticommutator,
}

impl Bracket {
    fn prefix(self) -> &'static str {
        match self {
            Bracket::Commutator => "comm",
            Bracket::Anticommutator => "anti",
        }
    }

    fn sign(self) -> f64 {
        match self {
            Bracket::Commutator => -1.0,
            Bracket::Anticommutator => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BracketPair {
    pub id: String,
    pub kind: Bracket,
    pub left: ObservableLabel,
    pub right: ObservableLabel,
}

/// Pairs that commute: `[Aᵢ,Aⱼ]`, `[Aᵢ,Bⱼ]` (i≠j), `[Bᵢ,Bⱼ]`, `[N,N′]` for
/// `N`s sharing one index, `[Aᵢ,Nᵢⱼ]`, `[Aⱼ,Nᵢⱼ]`, `[B_k,Nᵢⱼ]` (k∉{i,j}).
/// Pairs that anticommute: `{Aᵢ,Bᵢ}`, `{Aᵢ,N_jk}` (i∉{j,k}), `{B_j,N_jk}`,
/// `{B_k,N_jk}`.
pub fn bracket_pairs(n: usize) -> Vec<BracketPair> {
    let mut out = Vec::new();
    let mut push = |kind: Bracket, left: ObservableLabel, right: ObservableLabel| {
        out.push(BracketPair {
            id: format!("{}:{left},{right}", kind.prefix()),
            kind,
            left,
            right,
        })
    };
    let ns: Vec<ObservableLabel> = ObservableLabel::all(n)
        .into_iter()
        .filter(|l| matches!(l, ObservableLabel::N(..)))
        .collect();
    let shares_one = |a: ObservableLabel, b: ObservableLabel| match (a, b) {
        (ObservableLabel::N(i, j), ObservableLabel::N(k, l)) => {
            [k, l].iter().filter(|x| **x == i || **x == j).count() == 1
        }
        _ => false,
    };
    let c = Bracket::Commutator;
    for i in 1..=n {
        for j in i + 1..=n {
            push(c, A(i), A(j));
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                push(c, A(i), B(j));
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            push(c, B(i), B(j));
        }
    }
    for (x, &a) in ns.iter().enumerate() {
        for &b in &ns[x + 1..] {
            if shares_one(a, b) {
                push(c, a, b);
            }
        }
    }
    for &nl in &ns {
        let ObservableLabel::N(i, j) = nl else { unreachable!() };
        push(c, A(i), nl);
        push(c, A(j), nl);
        for k in (1..=n).filter(|&k| k != i && k != j) {
            push(c, B(k), nl);
        }
    }
    let a = Bracket::Anticommutator;
    for i in 1..=n {
        push(a, A(i), B(i));
    }
    for &nl in &ns {
        let ObservableLabel::N(j, k) = nl else { unreachable!() };
        for i in (1..=n).filter(|&i| i != j && i != k) {
            push(a, A(i), nl);
        }
        push(a, B(j), nl);
        push(a, B(k), nl);
    }
    out
}

/// `‖[M,M′]ψ‖` and `‖{M,M′}ψ‖` for every listed pair.
pub fn algebra_residuals(real: &Realization) -> Result<Residuals> {
    let psi = real.state();
    let values = bracket_pairs(real.n())
        .par_iter()
        .map(|p| {
            let l = real.get(p.left)?;
            let r = real.get(p.right)?;
            let lr = l.apply(&r.apply(psi)?)?;
            let rl = r.apply(&l.apply(psi)?)?;
            let v = lr.add(&rl.scale(p.kind.sign().into())).norm();
            Ok((p.id.clone(), v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(values.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{canonical_observables, canonical_pauli};

    #[test]
    fn pair_lists_match_pauli_structure() {
        for n in 3..=6 {
            for p in bracket_pairs(n) {
                let c = canonical_pauli(p.left, n).commutes(&canonical_pauli(p.right, n)).unwrap();
                assert_eq!(c, p.kind == Bracket::Commutator, "{}", p.id);
            }
        }
        let ids: Vec<String> = bracket_pairs(3).into_iter().map(|p| p.id).collect();
        assert!(ids.contains(&"comm:N12,N13".to_string()));
        assert!(ids.contains(&"anti:A3,N12".to_string()));
        assert!(ids.contains(&"comm:B3,N12".to_string()));
    }

    #[test]
    fn canonical_residuals_vanish() {
        let r = canonical_observables(4).unwrap();
        assert_eq!(algebra_residuals(&r).unwrap().max(), 0.0);
    }
}

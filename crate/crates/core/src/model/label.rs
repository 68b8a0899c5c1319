use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Name of one observable. Qubit indices are 1-based; `N` pairs are stored
/// sorted, so `N{i,j}` and `N{j,i}` are the same key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObservableLabel {
    A(usize),
    B(usize),
    N(usize, usize),
}

impl ObservableLabel {
    pub fn n(i: usize, j: usize) -> Self {
        assert_ne!(i, j, "N label needs two distinct qubits");
        ObservableLabel::N(i.min(j), i.max(j))
    }

    /// Largest qubit index mentioned.
    pub fn max_index(&self) -> usize {
        match *self {
            ObservableLabel::A(i) | ObservableLabel::B(i) => i,
            ObservableLabel::N(_, j) => j,
        }
    }

    pub fn is_valid_for(&self, n: usize) -> bool {
        match *self {
            ObservableLabel::A(i) | ObservableLabel::B(i) => (1..=n).contains(&i),
            ObservableLabel::N(i, j) => i >= 1 && i < j && j <= n,
        }
    }

    /// Every label of the `n`-qubit scenario: `A₁…Aₙ`, `B₁…Bₙ`, then `N_ij`.
    pub fn all(n: usize) -> Vec<ObservableLabel> {
        let mut out: Vec<_> = (1..=n).map(ObservableLabel::A).collect();
        out.extend((1..=n).map(ObservableLabel::B));
        for i in 1..=n {
            for j in i + 1..=n {
                out.push(ObservableLabel::N(i, j));
            }
        }
        out
    }
}

impl fmt::Display for ObservableLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ObservableLabel::A(i) => write!(f, "A{i}"),
            ObservableLabel::B(i) => write!(f, "B{i}"),
            // Two-digit indices would make "N<i><j>" ambiguous.
            ObservableLabel::N(i, j) if i >= 10 || j >= 10 => write!(f, "N{i}_{j}"),
            ObservableLabel::N(i, j) => write!(f, "N{i}{j}"),
        }
    }
}

impl FromStr for ObservableLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad observable label {s:?}"));
        let idx = |t: &str| -> Result<usize> {
            let v: usize = t.parse().map_err(|_| bad())?;
            if v == 0 {
                return Err(bad());
            }
            Ok(v)
        };
        let mut chars = s.chars();
        let kind = chars.next().ok_or_else(bad)?;
        let rest = chars.as_str();
        match kind {
            'A' => Ok(ObservableLabel::A(idx(rest)?)),
            'B' => Ok(ObservableLabel::B(idx(rest)?)),
            'N' | 'M' => {
                let (i, j) = match rest.split_once('_') {
                    Some((a, b)) => (idx(a)?, idx(b)?),
                    None if rest.len() == 2 && rest.is_ascii() => (idx(&rest[..1])?, idx(&rest[1..])?),
                    None => return Err(bad()),
                };
                if i == j {
                    return Err(bad());
                }
                Ok(ObservableLabel::n(i, j))
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for ObservableLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ObservableLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_is_symmetric() {
        assert_eq!(ObservableLabel::n(3, 1), ObservableLabel::n(1, 3));
        assert_eq!("N31".parse::<ObservableLabel>().unwrap(), ObservableLabel::N(1, 3));
        assert_eq!("M12".parse::<ObservableLabel>().unwrap(), ObservableLabel::N(1, 2));
    }

    #[test]
    fn render_and_parse() {
        for s in ["A1", "B7", "N12", "N3_11", "A12"] {
            assert_eq!(s.parse::<ObservableLabel>().unwrap().to_string(), s);
        }
        for s in ["", "A", "A0", "C1", "N11", "N123", "Nx2", "B-1"] {
            assert!(s.parse::<ObservableLabel>().is_err(), "{s}");
        }
    }

    #[test]
    fn counts() {
        assert_eq!(ObservableLabel::all(3).len(), 9);
        assert_eq!(ObservableLabel::all(5).len(), 20);
        assert!(ObservableLabel::all(4).iter().all(|l| l.is_valid_for(4)));
        assert!(!ObservableLabel::N(2, 5).is_valid_for(4));
    }
}

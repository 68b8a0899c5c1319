//! Signed Pauli strings in the symplectic (x-bits, z-bits, phase) layout.
//!
//! A string stores the letter of each qubit as a pair of bits packed into
//! 64-bit words, plus a global phase `i^e`. Letters are the Hermitian
//! single-qubit Paulis, with `(1,1)` decoding to `Y = i·X·Z`, so a string is
//! Hermitian exactly when its phase is ±1.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{DenseOperator, StateVector};

const WORD: usize = 64;

/// Global phase `i^k`, `k ∈ {0,1,2,3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    PlusOne,
    PlusI,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn from_exponent(e: u8) -> Self {
        match e & 3 {
            0 => Phase::PlusOne,
            1 => Phase::PlusI,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn exponent(self) -> u8 {
        match self {
            Phase::PlusOne => 0,
            Phase::PlusI => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        i_pow(self.exponent())
    }
}

fn i_pow(e: u8) -> Complex64 {
    match e & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Single-qubit letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Z => (false, true),
            Letter::Y => (true, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (false, true) => Letter::Z,
            (true, true) => Letter::Y,
        }
    }

    fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    width: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    /// Exponent of `i` in front of the letter product.
    phase: u8,
}

impl PauliString {
    pub fn identity(width: usize) -> Self {
        let words = width.div_ceil(WORD).max(1);
        PauliString {
            width,
            x: vec![0; words],
            z: vec![0; words],
            phase: 0,
        }
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut p = Self::identity(letters.len());
        for (q, l) in letters.iter().enumerate() {
            p.set_letter(q, *l);
        }
        p
    }

    /// `letter` on qubit `q`, identity elsewhere.
    pub fn single(width: usize, q: usize, letter: Letter) -> Self {
        let mut p = Self::identity(width);
        p.set_letter(q, letter);
        p
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn phase(&self) -> Phase {
        Phase::from_exponent(self.phase)
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase.exponent();
        self
    }

    pub fn negated(mut self) -> Self {
        self.phase = (self.phase + 2) & 3;
        self
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase & 1 == 0
    }

    pub fn x_bit(&self, q: usize) -> bool {
        (self.x[q / WORD] >> (q % WORD)) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        (self.z[q / WORD] >> (q % WORD)) & 1 == 1
    }

    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.x_bit(q), self.z_bit(q))
    }

    pub fn set_letter(&mut self, q: usize, letter: Letter) {
        assert!(q < self.width, "qubit {q} out of range for width {}", self.width);
        let (xb, zb) = letter.bits();
        let mask = 1u64 << (q % WORD);
        let w = q / WORD;
        if xb {
            self.x[w] |= mask;
        } else {
            self.x[w] &= !mask;
        }
        if zb {
            self.z[w] |= mask;
        } else {
            self.z[w] &= !mask;
        }
    }

    fn y_count(&self) -> u32 {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x & z).count_ones())
            .sum()
    }

    fn check_width(&self, other: &Self) -> Result<()> {
        if self.width != other.width {
            return Err(Error::WidthMismatch(self.width, other.width));
        }
        Ok(())
    }

    /// Operator product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_width(other)?;
        // In the raw form i^r X^x Z^z, Y contributes one power of i.
        // Moving Z^z1 past X^x2 costs (-1)^{z1·x2}.
        let swap: u32 = self
            .z
            .iter()
            .zip(&other.x)
            .map(|(z1, x2)| (z1 & x2).count_ones())
            .sum();
        let raw = self.phase as u32
            + self.y_count()
            + other.phase as u32
            + other.y_count()
            + 2 * swap;
        let mut out = PauliString {
            width: self.width,
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
            phase: 0,
        };
        let y = out.y_count();
        out.phase = ((raw + 4 * 64 - (y % 4)) % 4) as u8;
        Ok(out)
    }

    /// Inverse under multiplication; equals the adjoint.
    pub fn inverse(&self) -> Self {
        let mut p = self.clone();
        p.phase = (4 - self.phase) & 3;
        p
    }

    /// True iff the symplectic form vanishes mod 2.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_width(other)?;
        let form = self
            .x
            .iter()
            .zip(&self.z)
            .zip(other.x.iter().zip(&other.z))
            .fold(0u64, |acc, ((x1, z1), (x2, z2))| acc ^ (x1 & z2) ^ (z1 & x2));
        Ok(form.count_ones() % 2 == 0)
    }

    /// Kronecker product, `self` on the leading qubits.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::identity(self.width + other.width);
        for q in 0..self.width {
            out.set_letter(q, self.letter(q));
        }
        for q in 0..other.width {
            out.set_letter(self.width + q, other.letter(q));
        }
        out.phase = (self.phase + other.phase) & 3;
        out
    }

    /// Action on a state vector in the same index convention as
    /// [`to_dense`](Self::to_dense), without materialising the matrix.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        let n = self.width;
        if v.dim() != 1usize << n {
            return Err(Error::DimMismatch(1usize << n, v.dim()));
        }
        let (xm, zm) = self.index_masks();
        let base = i_pow(((self.phase as u32 + self.y_count()) % 4) as u8);
        let mut out = StateVector::zeros(v.dim());
        for col in 0..v.dim() {
            let sign = if (zm & col).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[col ^ xm] = base * sign * v[col];
        }
        Ok(out)
    }

    fn index_masks(&self) -> (usize, usize) {
        let n = self.width;
        let (mut xm, mut zm) = (0usize, 0usize);
        for q in 0..n {
            let bit = 1usize << (n - 1 - q);
            if self.x_bit(q) {
                xm |= bit;
            }
            if self.z_bit(q) {
                zm |= bit;
            }
        }
        (xm, zm)
    }

    pub fn to_dense(&self) -> Result<DenseOperator> {
        self.to_dense_with_limit(crate::dense_limit())
    }

    /// Dense matrix with qubit 0 as the most significant index bit, so the
    /// result equals the Kronecker product of the letters in string order.
    pub fn to_dense_with_limit(&self, limit: usize) -> Result<DenseOperator> {
        if self.width > limit {
            return Err(Error::DenseLimit {
                width: self.width,
                limit,
            });
        }
        let dim = 1usize << self.width;
        let (xm, zm) = self.index_masks();
        let raw = (self.phase as u32 + self.y_count()) % 4;
        let base = i_pow(raw as u8);
        let mut m = DenseOperator::zeros(dim);
        for col in 0..dim {
            let sign = if (zm & col).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            m[(col ^ xm, col)] = base * sign;
        }
        Ok(m)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase() {
            Phase::PlusOne => "+",
            Phase::MinusOne => "-",
            Phase::PlusI => "+i",
            Phase::MinusI => "-i",
        };
        f.write_str(prefix)?;
        for q in 0..self.width {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (mut phase, rest) = match s.as_bytes().first() {
            Some(b'+') => (0u8, &s[1..]),
            Some(b'-') => (2u8, &s[1..]),
            _ => (0u8, s),
        };
        let rest = match rest.strip_prefix('i') {
            Some(r) => {
                phase = (phase + 1) & 3;
                r
            }
            None => rest,
        };
        if rest.is_empty() {
            return Err(Error::Parse(format!("no qubit letters in {s:?}")));
        }
        let letters = rest
            .chars()
            .map(|c| match c {
                'I' => Ok(Letter::I),
                'X' => Ok(Letter::X),
                'Y' => Ok(Letter::Y),
                'Z' => Ok(Letter::Z),
                other => Err(Error::Parse(format!("bad Pauli letter {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::from_letters(&letters).with_phase(Phase::from_exponent(phase)))
    }
}

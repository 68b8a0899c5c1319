//! Dense complex linear algebra shared by evaluation and certification.
//!
//! Everything here is double precision and deterministic: matrix products use
//! a fixed summation order so results do not depend on threading.

mod eigen;
mod expm;
pub mod random;
mod sparse;

pub use eigen::{hermitian_eigen, HermitianEigen};
pub use expm::expm_i_hermitian;
pub use sparse::{Kernel, LinearMap, SparseOperator, SPARSE_DENSITY};

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Default relative rank tolerance for [`orthonormal_basis`].
pub const DEFAULT_RANK_TOLERANCE: f64 = 1e-7;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    data: Vec<Complex64>,
}

impl Index<(usize, usize)> for DenseOperator {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for DenseOperator {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Self {
        DenseOperator {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn scalar(dim: usize, value: f64) -> Self {
        Self::identity(dim).scale(Complex64::new(value, 0.0))
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Empty("matrix rows"));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimMismatch(dim, row.len()));
            }
            data.extend(row);
        }
        Ok(DenseOperator { dim, data })
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, v) in diag.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Matrix whose columns are the given vectors (must be `dim` of them).
    pub fn from_columns(cols: &[StateVector]) -> Result<Self> {
        let dim = cols.len();
        let mut m = Self::zeros(dim);
        for (c, v) in cols.iter().enumerate() {
            if v.dim() != dim {
                return Err(Error::DimMismatch(dim, v.dim()));
            }
            for r in 0..dim {
                m[(r, c)] = v[r];
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.dim.max(1))
    }

    pub fn column(&self, c: usize) -> StateVector {
        StateVector::new((0..self.dim).map(|r| self[(r, c)]).collect())
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            let row = &self.data[i * d..(i + 1) * d];
            let dst = &mut out.data[i * d..(i + 1) * d];
            for (k, a) in row.iter().enumerate() {
                if *a == ZERO {
                    continue;
                }
                let brow = &other.data[k * d..(k + 1) * d];
                for (o, b) in dst.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if self.dim != v.dim() {
            return Err(Error::DimMismatch(self.dim, v.dim()));
        }
        Ok(self.apply_unchecked(v))
    }

    pub(crate) fn apply_unchecked(&self, v: &StateVector) -> StateVector {
        let amps = self
            .rows()
            .map(|row| row.iter().zip(&v.amps).map(|(a, b)| a * b).sum())
            .collect();
        StateVector { amps }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        DenseOperator {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        DenseOperator {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for c in 0..d {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        let mut out = Self::zeros(a * b);
        for r1 in 0..a {
            for c1 in 0..a {
                let s = self[(r1, c1)];
                if s == ZERO {
                    continue;
                }
                for r2 in 0..b {
                    for c2 in 0..b {
                        out[(r1 * b + r2, c1 * b + c2)] = s * other[(r2, c2)];
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        let mut out = Self::zeros(a + b);
        for r in 0..a {
            for c in 0..a {
                out[(r, c)] = self[(r, c)];
            }
        }
        for r in 0..b {
            for c in 0..b {
                out[(a + r, a + c)] = other[(r, c)];
            }
        }
        out
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.matmul(self)?.matmul(&u.adjoint())
    }

    /// `‖M − M†‖_F`.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut acc = 0.0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                acc += (self[(r, c)] - self[(c, r)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `‖M² − 𝟙‖_F`.
    pub fn involution_residual(&self) -> f64 {
        let sq = self.matmul(self).expect("square");
        sq.sub(&Self::identity(self.dim)).expect("same dim").frobenius_norm()
    }

    /// `‖U U† − 𝟙‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        let p = self.matmul(&self.adjoint()).expect("square");
        p.sub(&Self::identity(self.dim)).expect("same dim").frobenius_norm()
    }

    /// Checks the measurement-observable constraints: Hermitian and `M² = 𝟙`.
    pub fn validate_observable(&self, tol: f64) -> std::result::Result<(), String> {
        if self.data.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err("non-finite entry".into());
        }
        let h = self.hermiticity_residual();
        if h > tol {
            return Err(format!("not Hermitian (‖M − M†‖ = {h:.3e})"));
        }
        let inv = self.involution_residual();
        if inv > tol {
            return Err(format!("not an involution (‖M² − 1‖ = {inv:.3e})"));
        }
        Ok(())
    }
}

/// Pure state amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl Index<usize> for StateVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.amps[i]
    }
}

impl IndexMut<usize> for StateVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.amps[i]
    }
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>) -> Self {
        StateVector { amps }
    }

    pub fn zeros(dim: usize) -> Self {
        StateVector { amps: vec![ZERO; dim] }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v[i] = ONE;
        v
    }

    pub fn from_real(values: &[f64]) -> Self {
        StateVector {
            amps: values.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        StateVector {
            amps: self.amps.iter().map(|a| a * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        StateVector {
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        StateVector {
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a - b).collect(),
        }
    }

    /// `self − s·other`, in place.
    fn axpy_neg(&mut self, s: Complex64, other: &Self) {
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a -= s * b;
        }
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        self.scale(Complex64::new(1.0 / n, 0.0))
    }

    /// `self` followed by `extra` zeros.
    pub fn padded(&self, extra: usize) -> Self {
        let mut amps = self.amps.clone();
        amps.extend(std::iter::repeat_n(ZERO, extra));
        StateVector { amps }
    }
}

/// Orthonormal vectors spanning a subspace of `C^ambient_dim`.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: Vec<StateVector>,
    rank_tolerance: f64,
    /// Residual norm (relative to the largest input) of every input vector
    /// after projecting out the partial basis, in input order.
    residuals: Vec<f64>,
}

impl SubspaceBasis {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn rank_tolerance(&self) -> f64 {
        self.rank_tolerance
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    /// Coordinates `B† v` of `v` in this basis.
    pub fn coordinates(&self, v: &StateVector) -> StateVector {
        StateVector::new(self.vectors.iter().map(|b| b.inner(v)).collect())
    }

    /// `B B† v`.
    pub fn project(&self, v: &StateVector) -> StateVector {
        let mut out = StateVector::zeros(self.ambient_dim);
        for b in &self.vectors {
            let c = b.inner(v);
            for (o, x) in out.amps.iter_mut().zip(&b.amps) {
                *o += c * x;
            }
        }
        out
    }

    /// `‖(𝟙 − B B†) v‖`.
    pub fn leakage(&self, v: &StateVector) -> f64 {
        v.sub(&self.project(v)).norm()
    }

    /// `‖B†B − 𝟙‖_F`.
    pub fn gram_residual(&self) -> f64 {
        let k = self.rank();
        let mut acc = 0.0;
        for i in 0..k {
            for j in 0..k {
                let g = self.vectors[i].inner(&self.vectors[j]);
                let target = if i == j { ONE } else { ZERO };
                acc += (g - target).norm_sqr();
            }
        }
        acc.sqrt()
    }
}

/// `AB + BA`.
pub fn anticommutator(a: &DenseOperator, b: &DenseOperator) -> Result<DenseOperator> {
    a.matmul(b)?.add(&b.matmul(a)?)
}

/// `AB − BA`.
pub fn commutator(a: &DenseOperator, b: &DenseOperator) -> Result<DenseOperator> {
    a.matmul(b)?.sub(&b.matmul(a)?)
}

/// Right-nested anticommutator `{M₁,{M₂,…,{M_{k−1},M_k}}}`.
pub fn nested_anticommutator(ops: &[&DenseOperator]) -> Result<DenseOperator> {
    let (last, rest) = ops.split_last().ok_or(Error::Empty("operator list"))?;
    let mut acc = (*last).clone();
    for m in rest.iter().rev() {
        acc = anticommutator(m, &acc)?;
    }
    Ok(acc)
}

/// Two-pass Gram–Schmidt in input order. A vector is dropped when its
/// residual after projection is at most `rank_tolerance · max input norm`.
pub fn orthonormal_basis(vectors: &[StateVector], rank_tolerance: f64) -> Result<SubspaceBasis> {
    let first = vectors.first().ok_or(Error::Empty("vector list"))?;
    let ambient_dim = first.dim();
    if let Some(v) = vectors.iter().find(|v| v.dim() != ambient_dim) {
        return Err(Error::DimMismatch(ambient_dim, v.dim()));
    }
    let scale = vectors.iter().map(StateVector::norm).fold(0.0, f64::max);
    let mut basis: Vec<StateVector> = Vec::new();
    let mut residuals = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = b.inner(&w);
                w.axpy_neg(c, b);
            }
        }
        let r = w.norm();
        let rel = if scale > 0.0 { r / scale } else { 0.0 };
        residuals.push(rel);
        if scale > 0.0 && rel > rank_tolerance && basis.len() < ambient_dim {
            basis.push(w.scale(Complex64::new(1.0 / r, 0.0)));
        }
    }
    Ok(SubspaceBasis {
        ambient_dim,
        vectors: basis,
        rank_tolerance,
        residuals,
    })
}

/// Compression `⟨bᵢ|M|bⱼ⟩` of `m` onto the basis.
pub fn project_operator(m: &DenseOperator, basis: &SubspaceBasis) -> Result<DenseOperator> {
    if m.dim() != basis.ambient_dim() {
        return Err(Error::DimMismatch(m.dim(), basis.ambient_dim()));
    }
    let images: Vec<StateVector> = basis.vectors.iter().map(|b| m.apply_unchecked(b)).collect();
    let k = basis.rank();
    let mut out = DenseOperator::zeros(k);
    for i in 0..k {
        for (j, img) in images.iter().enumerate() {
            out[(i, j)] = basis.vectors[i].inner(img);
        }
    }
    Ok(out)
}

/// `|⟨v|w⟩|²`.
pub fn fidelity(v: &StateVector, w: &StateVector) -> Result<f64> {
    if v.dim() != w.dim() {
        return Err(Error::DimMismatch(v.dim(), w.dim()));
    }
    Ok(v.inner(w).norm_sqr().clamp(0.0, 1.0))
}

/// JSON shape for matrices: rows of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixJson(pub Vec<Vec<[f64; 2]>>);

impl From<&DenseOperator> for MatrixJson {
    fn from(m: &DenseOperator) -> Self {
        MatrixJson(
            m.rows()
                .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        )
    }
}

impl TryFrom<MatrixJson> for DenseOperator {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<Self> {
        DenseOperator::from_rows(
            j.0.into_iter()
                .map(|row| row.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
                .collect(),
        )
    }
}

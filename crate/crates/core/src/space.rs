//! Indefinite inner product spaces and discrete space-time.
//!
//! A [`SignatureSpace`] is `C^d` with the form `<u|v> = (u|Sv)`, where `S` is
//! a diagonal matrix of `±1` entries and `(.|.)` is the canonical scalar
//! product, conjugate-linear in its first slot. A [`SpaceTimeStructure`]
//! splits such a space into `m` blocks of size `2n`, one per space-time
//! point, each of signature `(n,n)`.
//!
//! The basis is fixed: within every point block the signature reads
//! `(+1, -1, +1, -1, ...)`, and point `x` owns coordinates
//! `2n*x .. 2n*(x+1)`.

use std::ops::Range;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{CMatrix, CVector, C64};

/// Absolute tolerance used when an operation does not state its own.
pub const DEFAULT_TOL: f64 = 1e-10;

/// `C^d` together with a diagonal signature matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureSpace {
    signature: Vec<i8>,
}

impl SignatureSpace {
    pub fn new(signature: Vec<i8>) -> Result<Self> {
        if signature.is_empty() {
            return Err(Error::InvalidStructure("empty signature".into()));
        }
        if let Some(bad) = signature.iter().find(|s| **s != 1 && **s != -1) {
            return Err(Error::InvalidStructure(format!(
                "signature entries must be +1 or -1, found {bad}"
            )));
        }
        Ok(Self { signature })
    }

    /// The signature `(+1,-1)` repeated `pairs` times.
    pub fn alternating(pairs: usize) -> Self {
        let signature = (0..2 * pairs)
            .map(|i| if i % 2 == 0 { 1 } else { -1 })
            .collect();
        Self { signature }
    }

    pub fn dim(&self) -> usize {
        self.signature.len()
    }

    pub fn signature(&self) -> &[i8] {
        &self.signature
    }

    #[inline]
    pub fn sign(&self, i: usize) -> f64 {
        f64::from(self.signature[i])
    }

    /// Number of `+1` and `-1` entries, i.e. the signature `(p,q)`.
    pub fn counts(&self) -> (usize, usize) {
        let p = self.signature.iter().filter(|s| **s == 1).count();
        (p, self.dim() - p)
    }

    /// The signature matrix `S`.
    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.signature.iter().map(|s| C64::new(f64::from(*s), 0.0)),
        ))
    }

    /// `S * A` (scales rows).
    pub fn left_apply(&self, a: &CMatrix) -> CMatrix {
        let mut out = a.clone();
        for (i, mut row) in out.row_iter_mut().enumerate() {
            if self.signature[i] < 0 {
                row.neg_mut();
            }
        }
        out
    }

    /// `A * S` (scales columns).
    pub fn right_apply(&self, a: &CMatrix) -> CMatrix {
        let mut out = a.clone();
        for (j, mut col) in out.column_iter_mut().enumerate() {
            if self.signature[j] < 0 {
                col.neg_mut();
            }
        }
        out
    }

    fn check_vector(&self, v: &CVector) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::dims(self.dim(), v.len()));
        }
        Ok(())
    }

    pub(crate) fn check_square(&self, a: &CMatrix) -> Result<()> {
        if a.nrows() != self.dim() || a.ncols() != self.dim() {
            return Err(Error::dims(
                format!("{0}x{0}", self.dim()),
                format!("{}x{}", a.nrows(), a.ncols()),
            ));
        }
        Ok(())
    }

    /// `<u|v> = (u|Sv)`.
    pub fn inner_product(&self, u: &CVector, v: &CVector) -> Result<C64> {
        self.check_vector(u)?;
        self.check_vector(v)?;
        Ok(u.iter()
            .zip(v.iter())
            .zip(&self.signature)
            .map(|((a, b), s)| a.conj() * b * f64::from(*s))
            .sum())
    }

    /// `A* = S A^† S`.
    pub fn adjoint(&self, a: &CMatrix) -> Result<CMatrix> {
        self.check_square(a)?;
        let mut out = a.adjoint();
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                if self.signature[i] != self.signature[j] {
                    out[(i, j)] = -out[(i, j)];
                }
            }
        }
        Ok(out)
    }

    /// True iff `||A - A*|| <= tol * max(1, ||A||)` in the Frobenius norm.
    pub fn is_symmetric(&self, a: &CMatrix, tol: f64) -> Result<bool> {
        Ok(self.symmetry_defect(a)? <= tol * a.norm().max(1.0))
    }

    fn symmetry_defect(&self, a: &CMatrix) -> Result<f64> {
        Ok((a - self.adjoint(a)?).norm())
    }

    /// Positivity of a symmetric operator: `S A` is positive semi-definite.
    ///
    /// Returns [`Error::NotSymmetric`] when `A` is not symmetric within `tol`,
    /// so that non-symmetric input is reported apart from merely non-positive
    /// input.
    pub fn is_positive_operator(&self, a: &CMatrix, tol: f64) -> Result<bool> {
        Ok(self.positivity_margin(a, tol)? >= -tol)
    }

    /// Smallest eigenvalue of the Hermitian part of `S A`.
    pub fn positivity_margin(&self, a: &CMatrix, tol: f64) -> Result<f64> {
        let defect = self.symmetry_defect(a)?;
        if defect > tol * a.norm().max(1.0) {
            return Err(Error::NotSymmetric { deviation: defect });
        }
        Ok(min_hermitian_eigenvalue(&self.left_apply(a)))
    }
}

/// Smallest eigenvalue of the Hermitian part of `h`.
pub(crate) fn min_hermitian_eigenvalue(h: &CMatrix) -> f64 {
    if h.is_empty() {
        return 0.0;
    }
    let herm = (h + h.adjoint()) * C64::new(0.5, 0.0);
    herm.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Discrete space-time: `m` points with spin dimension `(n,n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceTimeStructure {
    m: usize,
    n: usize,
    space: SignatureSpace,
}

impl SpaceTimeStructure {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidStructure(format!(
                "need m >= 1 and n >= 1, got m = {m}, n = {n}"
            )));
        }
        Ok(Self {
            m,
            n,
            space: SignatureSpace::alternating(n * m),
        })
    }

    /// Infers the structure from a total dimension and half spin dimension.
    pub fn from_dim(dim: usize, n: usize) -> Result<Self> {
        if n == 0 || dim == 0 || !dim.is_multiple_of(2 * n) {
            return Err(Error::InvalidStructure(format!(
                "dimension {dim} is not a positive multiple of 2n = {}",
                2 * n
            )));
        }
        Self::new(dim / (2 * n), n)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n * self.m
    }

    pub fn block_dim(&self) -> usize {
        2 * self.n
    }

    pub fn space(&self) -> &SignatureSpace {
        &self.space
    }

    /// The signature space of a single point block, `E_x(H)`.
    pub fn block_space(&self) -> SignatureSpace {
        SignatureSpace::alternating(self.n)
    }

    fn check_point(&self, x: usize) -> Result<()> {
        if x >= self.m {
            return Err(Error::IndexOutOfRange {
                index: x,
                points: self.m,
            });
        }
        Ok(())
    }

    pub fn block_of(&self, x: usize) -> Result<Range<usize>> {
        self.check_point(x)?;
        let k = self.block_dim();
        Ok(k * x..k * (x + 1))
    }

    /// The space-time projector `E_x` as a diagonal 0/1 matrix.
    pub fn projector(&self, x: usize) -> Result<CMatrix> {
        let block = self.block_of(x)?;
        let d = self.dim();
        Ok(CMatrix::from_fn(d, d, |i, j| {
            if i == j && block.contains(&i) {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    /// The discrete kernel `A(x,y) = E_x A E_y` as a `2n x 2n` block.
    pub fn localize(&self, a: &CMatrix, x: usize, y: usize) -> Result<CMatrix> {
        self.space.check_square(a)?;
        let rows = self.block_of(x)?;
        let cols = self.block_of(y)?;
        let k = self.block_dim();
        Ok(a.view((rows.start, cols.start), (k, k)).into_owned())
    }

    /// Writes a `2n x 2n` block back into position `(x,y)`.
    pub fn set_block(&self, a: &mut CMatrix, x: usize, y: usize, block: &CMatrix) -> Result<()> {
        self.space.check_square(a)?;
        let k = self.block_dim();
        if block.nrows() != k || block.ncols() != k {
            return Err(Error::dims(
                format!("{k}x{k}"),
                format!("{}x{}", block.nrows(), block.ncols()),
            ));
        }
        let rows = self.block_of(x)?;
        let cols = self.block_of(y)?;
        a.view_mut((rows.start, cols.start), (k, k))
            .copy_from(block);
        Ok(())
    }

    /// The local trace `Tr(E_x P)`.
    pub fn local_trace(&self, p: &CMatrix, x: usize) -> Result<C64> {
        self.space.check_square(p)?;
        Ok(self.block_of(x)?.map(|i| p[(i, i)]).sum())
    }

    pub fn local_traces(&self, p: &CMatrix) -> Result<Vec<C64>> {
        (0..self.m).map(|x| self.local_trace(p, x)).collect()
    }

    /// Coordinates of the negative signature directions, point-major within
    /// each spin slot: `(x=0,j=0), (x=1,j=0), ..., (x=0,j=1), ...`.
    pub fn negative_directions(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n * self.m);
        for j in 0..self.n {
            for x in 0..self.m {
                out.push(self.block_dim() * x + 2 * j + 1);
            }
        }
        out
    }

    pub fn positive_directions(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n * self.m);
        for j in 0..self.n {
            for x in 0..self.m {
                out.push(self.block_dim() * x + 2 * j);
            }
        }
        out
    }
}

/// Real-valued helper: a complex matrix from real entries.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
    DMatrix::from_row_slice(rows, cols, data).map(|v| C64::new(v, 0.0))
}

/// Real-valued helper: a complex vector from real entries.
pub fn real_vector(data: &[f64]) -> CVector {
    DVector::from_iterator(data.len(), data.iter().map(|v| C64::new(*v, 0.0)))
}

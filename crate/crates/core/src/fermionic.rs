//! Fermionic projectors and class-`P^f` operators built from spanning frames.
//!
//! Operators are always handled through a frame `W` (a `d x f` matrix whose
//! columns span the image) together with a [`Mode`] telling how `P` is
//! recovered from `W`:
//!
//! * `projector`: `P = -W' W'^† S` with `W' = W G^{-1/2}` and `G = -W^† S W`,
//!   so that `P* = P = P²` and the image is negative definite;
//! * `class_pf`: `P = -c W W^† S` with `c = f / (-Tr(W^† S W))`, giving
//!   `Tr P = f`, `-P` positive and rank at most `f`;
//! * `rank_f_unnormalized`: `P = -W W^† S`, no trace condition.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{SignatureSpace, SpaceTimeStructure};
use crate::{CMatrix, C64};

/// Singular values below this fraction of the largest count as zero.
pub const RANK_THRESHOLD: f64 = 1e-9;

/// How an operator is recovered from its frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Projector,
    ClassPf,
    RankFUnnormalized,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Projector => "projector",
            Mode::ClassPf => "class_pf",
            Mode::RankFUnnormalized => "rank_f_unnormalized",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "projector" => Ok(Mode::Projector),
            "class_pf" => Ok(Mode::ClassPf),
            "rank_f_unnormalized" => Ok(Mode::RankFUnnormalized),
            other => Err(Error::Parse(format!(
                "unknown mode {other:?} (expected projector, class_pf or rank_f_unnormalized)"
            ))),
        }
    }
}

/// A frame `W` whose columns span the image of the operator.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanRepresentation {
    pub w: CMatrix,
    pub mode: Mode,
    /// Particle number. For `projector` and `class_pf` this is the trace.
    pub f: usize,
}

/// An operator together with the frame it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionicOperator {
    span: SpanRepresentation,
    p: CMatrix,
}

impl FermionicOperator {
    pub fn matrix(&self) -> &CMatrix {
        &self.p
    }

    pub fn into_matrix(self) -> CMatrix {
        self.p
    }

    pub fn span(&self) -> &SpanRepresentation {
        &self.span
    }

    pub fn mode(&self) -> Mode {
        self.span.mode
    }

    pub fn f(&self) -> usize {
        self.span.f
    }

    /// Pairs a frame with a matrix computed elsewhere, e.g. in closed form.
    pub(crate) fn with_matrix(span: SpanRepresentation, p: CMatrix) -> Self {
        Self { span, p }
    }
}

fn check_frame(space: &SignatureSpace, w: &CMatrix) -> Result<()> {
    if w.nrows() != space.dim() || w.ncols() == 0 {
        return Err(Error::dims(
            format!("{} x f frame with f >= 1", space.dim()),
            format!("{}x{}", w.nrows(), w.ncols()),
        ));
    }
    Ok(())
}

/// The Gram matrix `G = -W^† S W`, i.e. `G_ij = -<w_i|w_j>`.
pub fn gram(space: &SignatureSpace, w: &CMatrix) -> CMatrix {
    -(w.adjoint() * space.left_apply(w))
}

/// `-W W^† S`.
fn outer(space: &SignatureSpace, w: &CMatrix) -> CMatrix {
    -space.right_apply(&(w * w.adjoint()))
}

/// Hermitian inverse square root of a positive definite matrix.
fn inverse_sqrt(g: &CMatrix) -> Result<CMatrix> {
    let herm = (g + g.adjoint()) * C64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let min = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let max = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    if !(min > 1e-12 * max.max(1e-300)) {
        return Err(Error::GramNotPositiveDefinite {
            min_eigenvalue: min,
        });
    }
    let d = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|l| C64::new(l.powf(-0.5), 0.0)),
    );
    let v = &eig.eigenvectors;
    Ok(v * CMatrix::from_diagonal(&d) * v.adjoint())
}

/// Re-orthonormalizes a frame so that `-W^† S W = 1`.
pub fn orthonormalize_frame(space: &SignatureSpace, w: &CMatrix) -> Result<CMatrix> {
    check_frame(space, w)?;
    Ok(w * inverse_sqrt(&gram(space, w))?)
}

/// The fermionic projector onto the span of `W`.
pub fn projector_from_frame(space: &SignatureSpace, w: &CMatrix) -> Result<FermionicOperator> {
    let w = orthonormalize_frame(space, w)?;
    let f = w.ncols();
    Ok(FermionicOperator {
        p: outer(space, &w),
        span: SpanRepresentation {
            w,
            mode: Mode::Projector,
            f,
        },
    })
}

/// `P = -c W W^† S` with `c = f / (-Tr(W^† S W))`. The stored frame absorbs
/// `sqrt(c)`.
pub fn class_pf_from_frame(space: &SignatureSpace, w: &CMatrix) -> Result<FermionicOperator> {
    check_frame(space, w)?;
    let f = w.ncols();
    let neg_trace = gram(space, w).trace().re;
    if !(neg_trace > 0.0) {
        return Err(Error::InvalidNormalization(format!(
            "Tr(W^† S W) = {:.3e} is not negative",
            -neg_trace
        )));
    }
    let c = f as f64 / neg_trace;
    let w = w * C64::new(c.sqrt(), 0.0);
    Ok(FermionicOperator {
        p: outer(space, &w),
        span: SpanRepresentation {
            w,
            mode: Mode::ClassPf,
            f,
        },
    })
}

/// `P = -W W^† S` without normalization.
pub fn unnormalized_from_frame(space: &SignatureSpace, w: &CMatrix) -> Result<FermionicOperator> {
    check_frame(space, w)?;
    Ok(FermionicOperator {
        p: outer(space, w),
        span: SpanRepresentation {
            w: w.clone(),
            mode: Mode::RankFUnnormalized,
            f: w.ncols(),
        },
    })
}

/// Builds the operator a frame describes, according to its mode.
pub fn from_span(space: &SignatureSpace, span: &SpanRepresentation) -> Result<FermionicOperator> {
    if span.f != span.w.ncols() {
        return Err(Error::dims(
            format!("frame with f = {} columns", span.f),
            format!("{} columns", span.w.ncols()),
        ));
    }
    match span.mode {
        Mode::Projector => projector_from_frame(space, &span.w),
        Mode::ClassPf => class_pf_from_frame(space, &span.w),
        Mode::RankFUnnormalized => unnormalized_from_frame(space, &span.w),
    }
}

/// The closed chain `A_xy = P(x,y) P(y,x)` on `E_x(H)`.
pub fn closed_chain(st: &SpaceTimeStructure, p: &CMatrix, x: usize, y: usize) -> Result<CMatrix> {
    Ok(st.localize(p, x, y)? * st.localize(p, y, x)?)
}

/// Numerical rank with the relative singular value threshold
/// [`RANK_THRESHOLD`].
pub fn numerical_rank(a: &CMatrix) -> usize {
    if a.is_empty() {
        return 0;
    }
    let sv = a.singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > RANK_THRESHOLD * max).count()
}

/// `P* = P = P²` within `tol` (relative to `max(1, ||P||)`).
pub fn is_projector(space: &SignatureSpace, p: &CMatrix, tol: f64) -> Result<bool> {
    space.check_square(p)?;
    let scale = p.norm().max(1.0);
    Ok(space.is_symmetric(p, tol)? && (p * p - p).norm() <= tol * scale)
}

/// A projector of rank `f` whose image is negative definite.
pub fn is_fermionic_projector(
    space: &SignatureSpace,
    p: &CMatrix,
    f: usize,
    tol: f64,
) -> Result<bool> {
    if !is_projector(space, p, tol)? {
        return Ok(false);
    }
    if numerical_rank(p) != f {
        return Ok(false);
    }
    // -P positive and rank f together force a negative definite image
    space.is_positive_operator(&(-p), tol)
}

/// `-P` positive, `Tr P = f` and rank at most `f`.
pub fn is_class_pf(space: &SignatureSpace, p: &CMatrix, f: f64, tol: f64) -> Result<bool> {
    space.check_square(p)?;
    let tr = p.trace();
    if (tr.re - f).abs() > tol * f.abs().max(1.0) || tr.im.abs() > tol {
        return Ok(false);
    }
    if numerical_rank(p) as f64 > f + tol {
        return Ok(false);
    }
    match space.is_positive_operator(&(-p), tol) {
        Ok(b) => Ok(b),
        Err(Error::NotSymmetric { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub(crate) fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// A random frame spanning a negative definite `f`-dimensional subspace.
///
/// Every such subspace is the graph `{(T y, y)}` of a strict contraction `T`
/// from the negative to the positive coordinates, so the frame is drawn as
/// `B` (Gaussian, negative coordinates) stacked with `T B`, where `T` is a
/// Gaussian matrix rescaled to spectral norm uniform in `[0, 0.9)`.
pub fn random_negative_frame<R: Rng + ?Sized>(
    st: &SpaceTimeStructure,
    f: usize,
    rng: &mut R,
) -> Result<CMatrix> {
    let nm = st.n() * st.m();
    if f == 0 || f > nm {
        return Err(Error::Infeasible(format!(
            "a negative definite subspace of dimension {f} needs 1 <= f <= n*m = {nm}"
        )));
    }
    let b = gaussian_matrix(rng, nm, f);
    let mut t = gaussian_matrix(rng, nm, nm);
    let norm = t.singular_values().iter().copied().fold(0.0, f64::max);
    let target: f64 = rng.random_range(0.0..0.9);
    if norm > 0.0 {
        t *= C64::new(target / norm, 0.0);
    }
    let tb = &t * &b;
    let mut w = CMatrix::zeros(st.dim(), f);
    for (r, i) in st.negative_directions().into_iter().enumerate() {
        w.row_mut(i).copy_from(&b.row(r));
    }
    for (r, i) in st.positive_directions().into_iter().enumerate() {
        w.row_mut(i).copy_from(&tb.row(r));
    }
    Ok(w)
}

/// A random operator of the given mode, deterministic in `seed`.
pub fn random_operator(
    st: &SpaceTimeStructure,
    f: usize,
    mode: Mode,
    seed: u64,
) -> Result<FermionicOperator> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_operator_with(st, f, mode, &mut rng)
}

pub fn random_operator_with<R: Rng + ?Sized>(
    st: &SpaceTimeStructure,
    f: usize,
    mode: Mode,
    rng: &mut R,
) -> Result<FermionicOperator> {
    if f == 0 {
        return Err(Error::Infeasible("particle number must be positive".into()));
    }
    let space = st.space();
    match mode {
        Mode::Projector => projector_from_frame(space, &random_negative_frame(st, f, rng)?),
        Mode::ClassPf => {
            for _ in 0..256 {
                let w = gaussian_matrix(rng, st.dim(), f);
                if gram(space, &w).trace().re > 1e-3 {
                    return class_pf_from_frame(space, &w);
                }
            }
            Err(Error::Infeasible(
                "no frame with negative trace sampled".into(),
            ))
        }
        Mode::RankFUnnormalized => {
            unnormalized_from_frame(space, &gaussian_matrix(rng, st.dim(), f))
        }
    }
}

/// A random symmetric projector `P* = P = P²` of rank `f` whose image may
/// have mixed signature: `P = W (W^† S W)^{-1} W^† S` for a Gaussian frame.
///
/// Unlike fermionic projectors this exists for every `f <= dim`. Frames whose
/// Gram matrix has condition number above 20 are redrawn.
pub fn random_symmetric_projector<R: Rng + ?Sized>(
    space: &SignatureSpace,
    f: usize,
    rng: &mut R,
) -> Result<CMatrix> {
    if f == 0 || f > space.dim() {
        return Err(Error::Infeasible(format!(
            "rank {f} projector in dimension {}",
            space.dim()
        )));
    }
    for _ in 0..256 {
        let w = gaussian_matrix(rng, space.dim(), f);
        let g = -gram(space, &w);
        let eig = ((&g + g.adjoint()) * C64::new(0.5, 0.0)).symmetric_eigen();
        let abs = eig.eigenvalues.iter().map(|l| l.abs());
        let (lo, hi) = abs.fold((f64::INFINITY, 0.0f64), |(lo, hi), a| {
            (lo.min(a), hi.max(a))
        });
        if lo < hi / 20.0 {
            continue;
        }
        let inv = DVector::from_iterator(
            eig.eigenvalues.len(),
            eig.eigenvalues.iter().map(|l| C64::new(1.0 / l, 0.0)),
        );
        let v = &eig.eigenvectors;
        let ginv = v * CMatrix::from_diagonal(&inv) * v.adjoint();
        return Ok(space.right_apply(&(&w * ginv * w.adjoint())));
    }
    Err(Error::Infeasible(
        "no well-conditioned frame sampled".into(),
    ))
}

/// Frame that spreads `f` particles evenly over the negative directions.
///
/// Negative directions are enumerated point-major (see
/// [`SpaceTimeStructure::negative_directions`]) and cut into `f` contiguous
/// groups of near-equal size; particle `i` is the normalized sum of its
/// group. For `n = 1`, `m = 2`, `f = 1` this is `(0,1,0,1)/√2`.
pub fn even_spread_frame(st: &SpaceTimeStructure, f: usize) -> Result<CMatrix> {
    let dirs = st.negative_directions();
    if f == 0 || f > dirs.len() {
        return Err(Error::Infeasible(format!(
            "cannot spread {f} particles over {} negative directions",
            dirs.len()
        )));
    }
    let mut w = CMatrix::zeros(st.dim(), f);
    let base = dirs.len() / f;
    let extra = dirs.len() % f;
    let mut start = 0;
    for i in 0..f {
        let len = base + usize::from(i < extra);
        let amp = C64::new((1.0 / len as f64).sqrt(), 0.0);
        for &d in &dirs[start..start + len] {
            w[(d, i)] = amp;
        }
        start += len;
    }
    Ok(w)
}

/// Frame localizing particle `i` at point `i mod m` (spin slot `i / m`).
pub fn localized_frame(st: &SpaceTimeStructure, f: usize) -> Result<CMatrix> {
    let dirs = st.negative_directions();
    if f == 0 || f > dirs.len() {
        return Err(Error::Infeasible(format!(
            "cannot localize {f} particles in {} negative directions",
            dirs.len()
        )));
    }
    let mut w = CMatrix::zeros(st.dim(), f);
    for (i, &d) in dirs.iter().take(f).enumerate() {
        w[(d, i)] = C64::new(1.0, 0.0);
    }
    Ok(w)
}

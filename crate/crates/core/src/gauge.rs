//! Local gauge transformations `U ∈ U(n,n)^m`, gauge fixing by
//! Hilbert–Schmidt norm minimization, and homogeneity witnesses.
//!
//! A gauge transformation is block diagonal; its block `U(x)` preserves the
//! block signature, `U(x)^† S_x U(x) = S_x`. The Lie algebra at a point is
//! `{X : X^† S_x = -S_x X} = {S_x K : K^† = -K}`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermionic::gaussian_matrix;
use crate::space::{SignatureSpace, SpaceTimeStructure};
use crate::{CMatrix, C64};

/// One `2n x 2n` block per space-time point.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeTransformation {
    pub blocks: Vec<CMatrix>,
}

impl GaugeTransformation {
    pub fn identity(st: &SpaceTimeStructure) -> Self {
        let k = st.block_dim();
        Self {
            blocks: vec![CMatrix::identity(k, k); st.m()],
        }
    }

    fn check(&self, st: &SpaceTimeStructure) -> Result<()> {
        let k = st.block_dim();
        if self.blocks.len() != st.m() {
            return Err(Error::dims(
                format!("{} blocks", st.m()),
                format!("{} blocks", self.blocks.len()),
            ));
        }
        if let Some(b) = self
            .blocks
            .iter()
            .find(|b| b.nrows() != k || b.ncols() != k)
        {
            return Err(Error::dims(
                format!("{k}x{k} blocks"),
                format!("{}x{}", b.nrows(), b.ncols()),
            ));
        }
        Ok(())
    }

    /// The assembled block-diagonal matrix.
    pub fn assemble(&self, st: &SpaceTimeStructure) -> Result<CMatrix> {
        self.check(st)?;
        let mut u = CMatrix::zeros(st.dim(), st.dim());
        for (x, b) in self.blocks.iter().enumerate() {
            st.set_block(&mut u, x, x, b)?;
        }
        Ok(u)
    }

    /// The inverse, computed blockwise as `S_x U(x)^† S_x`.
    pub fn inverse(&self, st: &SpaceTimeStructure) -> Result<Self> {
        self.check(st)?;
        let bs = st.block_space();
        Ok(Self {
            blocks: self
                .blocks
                .iter()
                .map(|b| bs.adjoint(b))
                .collect::<Result<_>>()?,
        })
    }

    /// Largest `||U(x)^† S_x U(x) - S_x||` over the blocks.
    pub fn isometry_defect(&self, st: &SpaceTimeStructure) -> Result<f64> {
        self.check(st)?;
        let bs = st.block_space();
        let s = bs.matrix();
        Ok(self
            .blocks
            .iter()
            .map(|b| (b.adjoint() * bs.left_apply(b) - &s).norm())
            .fold(0.0, f64::max))
    }

    pub fn is_valid(&self, st: &SpaceTimeStructure, tol: f64) -> Result<bool> {
        Ok(self.isometry_defect(st)? <= tol)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }
}

/// The `U(1,1)` element
/// `e^{iα} [[e^{iβ} cosh ϑ, e^{iγ} sinh ϑ], [e^{-iγ} sinh ϑ, e^{-iβ} cosh ϑ]]`.
pub fn u11_block(alpha: f64, beta: f64, gamma: f64, theta: f64) -> CMatrix {
    let ph = |t: f64| C64::from_polar(1.0, t);
    let (ch, sh) = (theta.cosh(), theta.sinh());
    CMatrix::from_row_slice(
        2,
        2,
        &[
            ph(beta) * ch,
            ph(gamma) * sh,
            ph(-gamma) * sh,
            ph(-beta) * ch,
        ],
    ) * ph(alpha)
}

/// Random Lie algebra element `S_x K` with `K = spread (Z - Z^†)/2`.
fn random_algebra_element(bs: &SignatureSpace, rng: &mut ChaCha8Rng, spread: f64) -> CMatrix {
    let k = bs.dim();
    let z = gaussian_matrix(rng, k, k);
    let anti = (&z - z.adjoint()) * C64::new(0.5 * spread, 0.0);
    bs.left_apply(&anti)
}

/// `exp(X)` per block with `X` a Gaussian Lie algebra element scaled by
/// `spread`. Deterministic in `seed`.
pub fn random_gauge(
    st: &SpaceTimeStructure,
    spread: f64,
    seed: u64,
) -> Result<GaugeTransformation> {
    if !(spread >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "spread must be >= 0, got {spread}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bs = st.block_space();
    let blocks = (0..st.m())
        .map(|_| random_algebra_element(&bs, &mut rng, spread).exp())
        .collect();
    Ok(GaugeTransformation { blocks })
}

/// `U P U^{-1}`.
pub fn apply_gauge(
    st: &SpaceTimeStructure,
    p: &CMatrix,
    u: &GaugeTransformation,
) -> Result<CMatrix> {
    st.space().check_square(p)?;
    let inv = u.inverse(st)?;
    let mut out = CMatrix::zeros(st.dim(), st.dim());
    for x in 0..st.m() {
        for y in 0..st.m() {
            let block = &u.blocks[x] * st.localize(p, x, y)? * &inv.blocks[y];
            st.set_block(&mut out, x, y, &block)?;
        }
    }
    Ok(out)
}

/// Hilbert–Schmidt norm `(Tr Q^† Q)^{1/2}`.
pub fn hs_norm(q: &CMatrix) -> f64 {
    q.norm()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeFixOptions {
    /// Stop once the norm of the derivative of `||·||²` over unit algebra
    /// directions falls below this.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for GaugeFixOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iters: 5000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaugeFixResult {
    pub operator: CMatrix,
    /// The accumulated transformation, `operator = U P U^{-1}`.
    pub transformation: GaugeTransformation,
    pub norm: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
}

/// Blockwise gradient of `||P||²` along the gauge algebra.
///
/// For `X` block diagonal, `d/dt ||e^{tX} P e^{-tX}||² = 2 Re Tr(C X)` with
/// `C = P P^† - P^† P`. Projecting `C` onto the algebra gives
/// `G_x = (C_xx - S_x C_xx S_x)/2`, the part of `C_xx` anticommuting with
/// `S_x`; it is Hermitian, so `exp(-tG)` is a pure boost.
fn norm_gradient(st: &SpaceTimeStructure, p: &CMatrix) -> Result<Vec<CMatrix>> {
    let c = p * p.adjoint() - p.adjoint() * p;
    let bs = st.block_space();
    (0..st.m())
        .map(|x| {
            let cxx = st.localize(&c, x, x)?;
            let scs = bs.right_apply(&bs.left_apply(&cxx));
            Ok((cxx - scs) * C64::new(0.5, 0.0))
        })
        .collect()
}

/// Real basis of the boost directions: at each point the Hermitian
/// matrices `E_ij + E_ji` and `i(E_ij - E_ji)` with `i` positive and `j`
/// negative in the block signature.
fn boost_basis(st: &SpaceTimeStructure) -> Vec<(usize, CMatrix)> {
    let bs = st.block_space();
    let k = bs.dim();
    let mut basis = Vec::new();
    for x in 0..st.m() {
        for i in (0..k).filter(|&i| bs.sign(i) > 0.0) {
            for j in (0..k).filter(|&j| bs.sign(j) < 0.0) {
                for phase in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                    let mut b = CMatrix::zeros(k, k);
                    b[(i, j)] = phase;
                    b[(j, i)] = phase.conj();
                    basis.push((x, b));
                }
            }
        }
    }
    basis
}

/// `[X, P]` with `X` supported on the diagonal block of point `x`.
fn block_commutator(st: &SpaceTimeStructure, x: usize, b: &CMatrix, p: &CMatrix) -> CMatrix {
    let r = st.block_of(x).expect("point in range");
    let mut out = CMatrix::zeros(p.nrows(), p.ncols());
    let xp = b * p.rows(r.start, r.len());
    let px = p.columns(r.start, r.len()) * b;
    out.rows_mut(r.start, r.len()).copy_from(&xp);
    let mut cols = out.columns_mut(r.start, r.len());
    cols -= px;
    out
}

fn real_inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(u, v)| (u.conj() * v).re).sum()
}

/// Newton direction in boost coordinates, from the second-order expansion
/// `||e^X P e^{-X}||² = ||P||² + 2Re<P,[X,P]> + ||[X,P]||² + Re<P,[X,[X,P]]> + ...`.
/// The function is convex along these lines, so the Hessian is positive
/// semidefinite; a small shift handles flat directions.
fn newton_direction(
    st: &SpaceTimeStructure,
    p: &CMatrix,
    basis: &[(usize, CMatrix)],
) -> Option<(Vec<CMatrix>, f64)> {
    let k = basis.len();
    let d: Vec<CMatrix> = basis
        .iter()
        .map(|(x, b)| block_commutator(st, *x, b, p))
        .collect();
    let grad = nalgebra::DVector::from_fn(k, |i, _| 2.0 * real_inner(p, &d[i]));
    let mut h = nalgebra::DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        for j in 0..=i {
            let (xi, bi) = &basis[i];
            let (xj, bj) = &basis[j];
            let v = 2.0 * real_inner(&d[i], &d[j])
                + real_inner(p, &block_commutator(st, *xi, bi, &d[j]))
                + real_inner(p, &block_commutator(st, *xj, bj, &d[i]));
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    let mut shift = 1e-12 * h.trace().abs().max(f64::MIN_POSITIVE);
    for _ in 0..12 {
        let mut hs = h.clone();
        for i in 0..k {
            hs[(i, i)] += shift;
        }
        if let Some(chol) = hs.cholesky() {
            let delta = -chol.solve(&grad);
            let slope = grad.dot(&delta);
            if slope < 0.0 {
                let mut dir: Vec<CMatrix> = (0..st.m())
                    .map(|_| CMatrix::zeros(st.block_dim(), st.block_dim()))
                    .collect();
                for ((x, b), c) in basis.iter().zip(delta.iter()) {
                    dir[*x] += b * C64::new(*c, 0.0);
                }
                return Some((dir, slope));
            }
        }
        shift *= 100.0;
    }
    None
}

fn gradient_squared(st: &SpaceTimeStructure, p: &CMatrix) -> Result<f64> {
    Ok(norm_gradient(st, p)?.iter().map(|g| g.norm_squared()).sum())
}

/// Moves `P` along its gauge orbit to a (local) minimizer of the
/// Hilbert–Schmidt norm by damped Newton steps on the boost coordinates,
/// with steepest descent as fallback.
pub fn gauge_fix_hs_norm(
    st: &SpaceTimeStructure,
    p: &CMatrix,
    opts: &GaugeFixOptions,
) -> Result<GaugeFixResult> {
    st.space().check_square(p)?;
    let basis = boost_basis(st);
    let mut current = p.clone();
    let mut total = GaugeTransformation::identity(st);
    let mut value = current.norm_squared();
    let mut gradient_norm = f64::INFINITY;
    for iter in 0..=opts.max_iters {
        let grad = norm_gradient(st, &current)?;
        let g2: f64 = grad.iter().map(|g| g.norm_squared()).sum();
        // derivative along -G is -2||G||²; its size over unit directions is 2||G||
        gradient_norm = 2.0 * g2.sqrt();
        if gradient_norm < opts.tol {
            return Ok(GaugeFixResult {
                norm: value.sqrt(),
                operator: current,
                transformation: total,
                gradient_norm,
                iterations: iter,
            });
        }
        if iter == opts.max_iters {
            break;
        }
        let steepest = (grad.iter().map(|g| -g).collect::<Vec<_>>(), -2.0 * g2);
        let candidates = newton_direction(st, &current, &basis)
            .into_iter()
            .chain(std::iter::once(steepest));
        let mut accepted = None;
        'directions: for (dir, slope) in candidates {
            let mut t = 1.0;
            for _ in 0..60 {
                let u = GaugeTransformation {
                    blocks: dir.iter().map(|g| (g * C64::new(t, 0.0)).exp()).collect(),
                };
                let trial = apply_gauge(st, &current, &u)?;
                let tv = trial.norm_squared();
                // Near the minimum the decrease drops below the rounding of
                // `value`; a smaller gradient then decides.
                let armijo = -t * slope > 1e-11 * value && tv <= value + 1e-4 * t * slope;
                let flat = !armijo
                    && tv <= value * (1.0 + 1e-13)
                    && gradient_squared(st, &trial)? < 0.99 * g2;
                if armijo || flat {
                    accepted = Some((u, trial, tv));
                    break 'directions;
                }
                t *= 0.5;
            }
        }
        match accepted {
            Some((u, trial, tv)) => {
                total = u.compose(&total);
                current = trial;
                value = tv;
            }
            // no decrease representable any more: the gradient is at
            // rounding level relative to the norm
            None if gradient_norm <= 1e-6 * value.sqrt().max(1.0) => {
                return Ok(GaugeFixResult {
                    norm: value.sqrt(),
                    operator: current,
                    transformation: total,
                    gradient_norm,
                    iterations: iter,
                });
            }
            None => break,
        }
    }
    Err(Error::GaugeFixNotConverged {
        iterations: opts.max_iters,
        gradient_norm,
    })
}

/// Checks a homogeneity witness `(σ, U)`:
/// `P(σ(x), σ(y)) = U(x) P(x,y) U(y)^{-1}` for all `x, y`.
pub fn check_homogeneous(
    st: &SpaceTimeStructure,
    p: &CMatrix,
    sigma: &[usize],
    u: &GaugeTransformation,
    tol: f64,
) -> Result<bool> {
    st.space().check_square(p)?;
    let m = st.m();
    if sigma.len() != m {
        return Err(Error::dims(
            format!("permutation of {m} points"),
            sigma.len(),
        ));
    }
    let mut seen = vec![false; m];
    for &s in sigma {
        if s >= m || std::mem::replace(&mut seen[s], true) {
            return Err(Error::InvalidInput(format!(
                "{sigma:?} is not a permutation of 0..{m}"
            )));
        }
    }
    let inv = u.inverse(st)?;
    let scale = p.norm().max(1.0);
    for x in 0..m {
        for y in 0..m {
            let lhs = st.localize(p, sigma[x], sigma[y])?;
            let rhs = &u.blocks[x] * st.localize(p, x, y)? * &inv.blocks[y];
            if (lhs - rhs).norm() > tol * scale {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

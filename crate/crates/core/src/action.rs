//! The Lagrangian `L_μ[A] = |A²| - μ|A|²`, the action
//! `S_μ[P] = Σ_{x,y} L_μ[A_xy]`, the constraint functional
//! `Σ_{x,y} |A_xy|²`, and the local-trace lower bounds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermionic::closed_chain;
use crate::space::SpaceTimeStructure;
use crate::spectral::char_poly_roots;
use crate::{CMatrix, C64};

/// Slack used by every lower-bound assertion.
pub const BOUND_SLACK: f64 = 1e-9;

/// Roots with a larger imaginary part invalidate the second local bound.
pub const REAL_ROOT_TOL: f64 = 1e-8;

/// The critical coupling `μ = 1/2n`.
pub fn critical_mu(n: usize) -> f64 {
    1.0 / (2 * n) as f64
}

/// Named `(n, μ)` presets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuPreset {
    /// `μ = 1/2n` for the given structure.
    Critical,
    /// `n = 16`, `μ = 1/28`.
    StandardModel,
    /// `n = 2`, `μ = 1/4`.
    OneSector,
}

impl MuPreset {
    /// Returns `(n, μ)`; `Critical` keeps the caller's `n`.
    pub fn resolve(self, n: usize) -> (usize, f64) {
        match self {
            MuPreset::Critical => (n, critical_mu(n)),
            MuPreset::StandardModel => (16, 1.0 / 28.0),
            MuPreset::OneSector => (2, 0.25),
        }
    }
}

/// `(|A|, |A²|)` from the roots of `A`.
fn weights(a: &CMatrix) -> Result<(f64, f64)> {
    let roots = char_poly_roots(a)?;
    Ok((
        roots.iter().map(|z| z.norm()).sum(),
        roots.iter().map(|z| z.norm_sqr()).sum(),
    ))
}

/// `L_μ[A] = |A²| - μ|A|²`.
pub fn lagrangian(a: &CMatrix, mu: f64) -> Result<f64> {
    let (w, w2) = weights(a)?;
    Ok(w2 - mu * w * w)
}

/// The critical Lagrangian written as `(1/4n) Σ_{i,j} (|λ_i| - |λ_j|)²` for
/// a `2n x 2n` matrix.
pub fn critical_lagrangian_pairsum(a: &CMatrix) -> Result<f64> {
    let abs: Vec<f64> = char_poly_roots(a)?.iter().map(|z| z.norm()).collect();
    let k = abs.len() as f64;
    let mut sum = 0.0;
    for li in &abs {
        for lj in &abs {
            sum += (li - lj).powi(2);
        }
    }
    Ok(sum / (2.0 * k))
}

/// `Σ_{x,y} |A_xy²|` and `Σ_{x,y} |A_xy|²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainSums {
    pub weight_sq: f64,
    pub weight2: f64,
}

impl ChainSums {
    pub fn action(&self, mu: f64) -> f64 {
        self.weight_sq - mu * self.weight2
    }
}

/// Both sums over all `m²` closed chains. This is the hot path of the
/// optimizer and allocates no report.
pub fn chain_sums(st: &SpaceTimeStructure, p: &CMatrix) -> Result<ChainSums> {
    st.space().check_square(p)?;
    let mut sums = ChainSums {
        weight_sq: 0.0,
        weight2: 0.0,
    };
    for x in 0..st.m() {
        for y in 0..st.m() {
            let (w, w2) = weights(&closed_chain(st, p, x, y)?)?;
            sums.weight_sq += w2;
            sums.weight2 += w * w;
        }
    }
    Ok(sums)
}

/// Per-point local-trace bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalBound {
    /// `|Tr(E_x P)|⁴ / (256 n³)`.
    pub llb1: f64,
    /// `|Tr(E_x P)|² inf σ(A_xx) / (4n)`; `None` when `A_xx` has roots with
    /// `|Im| > 1e-8`.
    pub llb2: Option<f64>,
}

/// Everything the action evaluation produces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionReport {
    pub m: usize,
    pub n: usize,
    pub mu: f64,
    /// `L_μ[A_xy]`, row `x`, column `y`.
    pub lagrangians: Vec<Vec<f64>>,
    /// `S_μ[P]`.
    pub total: f64,
    /// `Σ_{x,y} |A_xy|²`.
    pub constraint_value: f64,
    /// `Σ_{x,y} |A_xy²|`.
    pub weight_sq_sum: f64,
    /// `Tr(E_x P)` as `[re, im]`.
    pub local_traces: Vec<[f64; 2]>,
    /// `f⁴ / (256 n³ m³)` with `f = Re Tr P`.
    pub bound_global: f64,
    pub bounds_local: Vec<LocalBound>,
}

fn local_bound(n: usize, local_trace: C64, a_xx: &CMatrix) -> Result<LocalBound> {
    let nf = n as f64;
    let t = local_trace.norm();
    let roots = char_poly_roots(a_xx)?;
    let llb2 = if roots.iter().all(|z| z.im.abs() <= REAL_ROOT_TOL) {
        let inf = roots.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        Some(t * t * inf / (4.0 * nf))
    } else {
        None
    };
    Ok(LocalBound {
        llb1: t.powi(4) / (256.0 * nf.powi(3)),
        llb2,
    })
}

/// Global bound `f⁴ / (256 n³ m³)`.
pub fn global_bound(f: f64, n: usize, m: usize) -> f64 {
    f.powi(4) / (256.0 * (n as f64).powi(3) * (m as f64).powi(3))
}

/// Evaluates `S_μ[P]` and fills a full [`ActionReport`].
pub fn action(st: &SpaceTimeStructure, p: &CMatrix, mu: f64) -> Result<ActionReport> {
    st.space().check_square(p)?;
    let m = st.m();
    let mut lagrangians = vec![vec![0.0; m]; m];
    let mut weight_sq_sum = 0.0;
    let mut constraint_value = 0.0;
    let mut bounds_local = Vec::with_capacity(m);
    let traces = st.local_traces(p)?;
    for (x, row) in lagrangians.iter_mut().enumerate() {
        for (y, l) in row.iter_mut().enumerate() {
            let a = closed_chain(st, p, x, y)?;
            let (w, w2) = weights(&a)?;
            *l = w2 - mu * w * w;
            weight_sq_sum += w2;
            constraint_value += w * w;
            if x == y {
                bounds_local.push(local_bound(st.n(), traces[x], &a)?);
            }
        }
    }
    let total = lagrangians.iter().flatten().sum();
    Ok(ActionReport {
        m,
        n: st.n(),
        mu,
        lagrangians,
        total,
        constraint_value,
        weight_sq_sum,
        local_traces: traces.iter().map(|z| [z.re, z.im]).collect(),
        bound_global: global_bound(p.trace().re, st.n(), m),
        bounds_local,
    })
}

/// Lower bounds together with the critical quantities they bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBounds {
    pub per_point: Vec<LocalBound>,
    pub global: f64,
    /// Critical Lagrangians `L[A_xx]`.
    pub diagonal_lagrangians: Vec<f64>,
    /// Critical action `S[P]`.
    pub critical_action: f64,
}

/// Computes the local-trace lower bounds for an operator with `-P` positive
/// and checks them against the critical Lagrangians, with absolute slack
/// [`BOUND_SLACK`].
pub fn lower_bounds(st: &SpaceTimeStructure, p: &CMatrix) -> Result<LowerBounds> {
    let tol = 1e-9 * p.norm().max(1.0);
    let margin = st.space().positivity_margin(&(-p), tol)?;
    if margin < -tol {
        return Err(Error::NotPositive {
            min_eigenvalue: margin,
        });
    }
    let report = action(st, p, critical_mu(st.n()))?;
    let diagonal_lagrangians: Vec<f64> = (0..st.m()).map(|x| report.lagrangians[x][x]).collect();
    for (x, (l, b)) in diagonal_lagrangians
        .iter()
        .zip(&report.bounds_local)
        .enumerate()
    {
        if *l < b.llb1 - BOUND_SLACK {
            return Err(Error::BoundViolated(format!(
                "L[A_xx] = {l:e} < {:e} at point {x}",
                b.llb1
            )));
        }
    }
    if report.total < report.bound_global - BOUND_SLACK {
        return Err(Error::BoundViolated(format!(
            "S[P] = {:e} < {:e}",
            report.total, report.bound_global
        )));
    }
    Ok(LowerBounds {
        per_point: report.bounds_local,
        global: report.bound_global,
        diagonal_lagrangians,
        critical_action: report.total,
    })
}

/// Closed form of the two-particle, two-point action surface
/// `(1/8)(2 + (cosh 2α - cosh 2β)²)(cosh 2α + cosh 2β)²`.
pub fn action_surface_example2(alpha: f64, beta: f64) -> f64 {
    let (ca, cb) = ((2.0 * alpha).cosh(), (2.0 * beta).cosh());
    (2.0 + (ca - cb).powi(2)) * (ca + cb).powi(2) / 8.0
}

//! Maps between discrete space-times with different numbers of points:
//! spreading an operator onto one additional point, and restricting it away
//! from a point with trace renormalization.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::action::action;
use crate::error::{Error, Result};
use crate::space::SpaceTimeStructure;
use crate::{CMatrix, C64};

/// Result of [`spread_point`].
#[derive(Clone, Debug, PartialEq)]
pub struct SpreadResult {
    /// Structure with `m + 1` points; the new point has index `m`.
    pub structure: SpaceTimeStructure,
    pub operator: CMatrix,
    /// The point whose row sum `Σ_y L_μ[A_xy]` was maximal.
    pub chosen_point: usize,
    pub row_sums: Vec<f64>,
    pub action_before: f64,
    pub action_after: f64,
}

/// Index of the largest row sum, lowest index on ties.
fn argmax_row(row_sums: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in row_sums.iter().enumerate() {
        if *v > row_sums[best] {
            best = i;
        }
    }
    best
}

/// Embeds `P` into `m + 1` points (zero on the new point) and rotates the
/// new point against the point `x` with the largest row sum by
/// `V = (1/√2) [[1, 1], [-1, 1]]` on `E_new ⊕ E_x`.
///
/// The kernel of `P̂ = V P V^{-1}` is written out directly:
/// `P̂(y,z) = P(y,z)` away from `{new, x}`, the mixed blocks pick up `1/√2`,
/// and all four blocks on `{new, x}` equal `P(x,x)/2`. For `μ ≤ 1/2n`,
/// `S_μ[P̂] ≤ (1 - 3/(4m)) S_μ[P]`.
pub fn spread_point(st: &SpaceTimeStructure, p: &CMatrix, mu: f64) -> Result<SpreadResult> {
    let before = action(st, p, mu)?;
    let row_sums: Vec<f64> = before.lagrangians.iter().map(|r| r.iter().sum()).collect();
    let x = argmax_row(&row_sums);
    let operator = spread_at(st, p, x)?;
    let structure = SpaceTimeStructure::new(st.m() + 1, st.n())?;
    let after = action(&structure, &operator, mu)?;
    Ok(SpreadResult {
        structure,
        operator,
        chosen_point: x,
        row_sums,
        action_before: before.total,
        action_after: after.total,
    })
}

/// The spreading map for a given point `x`, without choosing it.
pub fn spread_at(st: &SpaceTimeStructure, p: &CMatrix, x: usize) -> Result<CMatrix> {
    st.space().check_square(p)?;
    st.block_of(x)?;
    let m = st.m();
    let new = m;
    let big = SpaceTimeStructure::new(m + 1, st.n())?;
    let mut out = CMatrix::zeros(big.dim(), big.dim());
    let r = C64::new(FRAC_1_SQRT_2, 0.0);
    let half = C64::new(0.5, 0.0);
    let pxx = st.localize(p, x, x)? * half;
    for y in 0..m {
        for z in 0..m {
            if y == x || z == x {
                continue;
            }
            big.set_block(&mut out, y, z, &st.localize(p, y, z)?)?;
        }
    }
    for z in (0..m).filter(|z| *z != x) {
        let row = st.localize(p, x, z)? * r;
        let col = st.localize(p, z, x)? * r;
        for y in [new, x] {
            big.set_block(&mut out, y, z, &row)?;
            big.set_block(&mut out, z, y, &col)?;
        }
    }
    for y in [new, x] {
        for z in [new, x] {
            big.set_block(&mut out, y, z, &pxx)?;
        }
    }
    Ok(out)
}

/// Applies the spreading rotation to a frame: rows of point `x` are copied
/// to the new point and both are scaled by `1/√2`.
pub fn spread_frame(st: &SpaceTimeStructure, w: &CMatrix, x: usize) -> Result<CMatrix> {
    if w.nrows() != st.dim() {
        return Err(Error::dims(st.dim(), w.nrows()));
    }
    let block = st.block_of(x)?;
    let k = st.block_dim();
    let mut out = CMatrix::zeros(st.dim() + k, w.ncols());
    out.rows_mut(0, st.dim()).copy_from(w);
    let r = C64::new(FRAC_1_SQRT_2, 0.0);
    for (off, i) in block.enumerate() {
        let scaled = w.row(i) * r;
        out.row_mut(i).copy_from(&scaled);
        out.row_mut(st.dim() + off).copy_from(&scaled);
    }
    Ok(out)
}

/// The unitary `V` of the spreading map as a dense matrix on `m + 1` points.
pub fn spreading_unitary(st: &SpaceTimeStructure, x: usize) -> Result<CMatrix> {
    st.block_of(x)?;
    let big = SpaceTimeStructure::new(st.m() + 1, st.n())?;
    let k = st.block_dim();
    let mut v = CMatrix::identity(big.dim(), big.dim());
    let r = C64::new(FRAC_1_SQRT_2, 0.0);
    let id = CMatrix::identity(k, k) * r;
    let new = st.m();
    big.set_block(&mut v, new, new, &id)?;
    big.set_block(&mut v, new, x, &id)?;
    big.set_block(&mut v, x, new, &(-&id))?;
    big.set_block(&mut v, x, x, &id)?;
    Ok(v)
}

/// Result of [`restrict_renormalize`].
#[derive(Clone, Debug, PartialEq)]
pub struct Restriction {
    /// Structure with `m - 1` points (point `x` removed, later points shift
    /// down by one).
    pub structure: SpaceTimeStructure,
    pub operator: CMatrix,
    /// `c = f / Tr(F P)` with `F = 1 - E_x`.
    pub scale: f64,
}

/// `Q = c F P F` with `F = 1 - E_x` and `c = f / Tr(F P)`, viewed on the
/// remaining `m - 1` points. For `P` of class `P^f` the result is again of
/// that class whenever `Tr(F P) > 0`.
pub fn restrict_renormalize(
    st: &SpaceTimeStructure,
    p: &CMatrix,
    x: usize,
    f: f64,
) -> Result<Restriction> {
    st.space().check_square(p)?;
    st.block_of(x)?;
    if st.m() < 2 {
        return Err(Error::InvalidStructure(
            "cannot remove the only space-time point".into(),
        ));
    }
    let tr_fp = p.trace() - st.local_trace(p, x)?;
    if tr_fp.norm() <= 1e-12 {
        return Err(Error::InvalidNormalization(format!(
            "Tr(F P) = {:.3e} vanishes",
            tr_fp.norm()
        )));
    }
    let scale = f / tr_fp.re;
    let small = SpaceTimeStructure::new(st.m() - 1, st.n())?;
    let keep: Vec<usize> = (0..st.m()).filter(|y| *y != x).collect();
    let mut out = CMatrix::zeros(small.dim(), small.dim());
    let c = C64::new(scale, 0.0);
    for (i, &y) in keep.iter().enumerate() {
        for (j, &z) in keep.iter().enumerate() {
            small.set_block(&mut out, i, j, &(st.localize(p, y, z)? * c))?;
        }
    }
    Ok(Restriction {
        structure: small,
        operator: out,
        scale,
    })
}

//! Characteristic-polynomial roots and spectral weights of small complex
//! matrices.
//!
//! Closed chains are generally neither normal nor diagonalizable, so the
//! quantities here only ever use the zeros of `det(A - λ)`, counted with
//! multiplicity. Roots are computed by a complex Householder reduction to
//! Hessenberg form followed by Wilkinson-shifted QR sweeps with deflation.
//! The Faddeev–LeVerrier recursion supplies the characteristic polynomial
//! coefficients, and [`companion_roots`] runs the same QR iteration on the
//! companion matrix of those coefficients as an independent route.
//!
//! The QR path works on `A` itself rather than on its companion matrix:
//! rank-deficient chains carry structurally repeated zero roots, and rounding
//! in the coefficients moves a `k`-fold root by roughly `eps^(1/k)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::SignatureSpace;
use crate::{CMatrix, C64};

/// QR sweeps allowed per deflated eigenvalue before giving up.
pub const MAX_SWEEPS: usize = 200;

/// Subdiagonal entries below this fraction of `||H||_F` are accepted as zero
/// once a window has stalled.
pub const SUBDIAGONAL_RESIDUAL: f64 = 1e-12;

/// Sweeps without deflation after which the relaxed residual test applies.
const STALL_SWEEPS: usize = 30;

/// Roots of a square matrix together with `|A|` and `|A²|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralWeightReport {
    /// Roots of the characteristic polynomial as `[re, im]` pairs.
    pub roots: Vec<[f64; 2]>,
    /// `|A| = Σ|λ_j|`.
    pub weight: f64,
    /// `|A²| = Σ|λ_j|²`.
    pub weight_sq: f64,
}

impl SpectralWeightReport {
    pub fn from_roots(roots: &[C64]) -> Self {
        Self {
            roots: roots.iter().map(|z| [z.re, z.im]).collect(),
            weight: roots.iter().map(|z| z.norm()).sum(),
            weight_sq: roots.iter().map(|z| z.norm_sqr()).sum(),
        }
    }
}

fn check_square(a: &CMatrix) -> Result<()> {
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(Error::dims(
            "non-empty square matrix",
            format!("{}x{}", a.nrows(), a.ncols()),
        ));
    }
    Ok(())
}

/// Coefficients `[1, c_1, ..., c_k]` of `det(λ - A) = λ^k + c_1 λ^{k-1} + ... + c_k`
/// by the Faddeev–LeVerrier recursion.
pub fn char_poly_coefficients(a: &CMatrix) -> Result<Vec<C64>> {
    check_square(a)?;
    let k = a.nrows();
    let mut coeffs = Vec::with_capacity(k + 1);
    coeffs.push(C64::new(1.0, 0.0));
    let mut m = CMatrix::zeros(k, k);
    for j in 1..=k {
        m = a * &m;
        for i in 0..k {
            m[(i, i)] += coeffs[j - 1];
        }
        let am = a * &m;
        coeffs.push(-am.trace() / j as f64);
    }
    Ok(coeffs)
}

/// Companion matrix (upper Hessenberg) of a monic polynomial given as
/// `[1, c_1, ..., c_k]`.
pub fn companion_matrix(coeffs: &[C64]) -> Result<CMatrix> {
    if coeffs.len() < 2 {
        return Err(Error::InvalidInput("polynomial of degree 0".into()));
    }
    let k = coeffs.len() - 1;
    let lead = coeffs[0];
    let mut c = CMatrix::zeros(k, k);
    for j in 0..k {
        c[(0, j)] = -coeffs[j + 1] / lead;
    }
    for i in 1..k {
        c[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    Ok(c)
}

/// Reduces `a` to upper Hessenberg form by Householder reflections. The
/// result is unitarily similar to `a`.
pub fn hessenberg(a: &CMatrix) -> Result<CMatrix> {
    check_square(a)?;
    let k = a.nrows();
    let mut h = a.clone();
    if k < 3 {
        return Ok(h);
    }
    for j in 0..k - 2 {
        let len = k - j - 1;
        let mut v: Vec<C64> = (0..len).map(|i| h[(j + 1 + i, j)]).collect();
        let alpha = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let phase = if v[0].norm() > 0.0 {
            v[0] / v[0].norm()
        } else {
            C64::new(1.0, 0.0)
        };
        v[0] += phase * alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // H <- (I - 2 v v^†) H
        for col in 0..k {
            let dot: C64 = (0..len).map(|i| v[i].conj() * h[(j + 1 + i, col)]).sum();
            for i in 0..len {
                h[(j + 1 + i, col)] -= v[i] * dot * 2.0;
            }
        }
        // H <- H (I - 2 v v^†)
        for row in 0..k {
            let dot: C64 = (0..len).map(|i| h[(row, j + 1 + i)] * v[i]).sum();
            for i in 0..len {
                h[(row, j + 1 + i)] -= dot * v[i].conj() * 2.0;
            }
        }
        for i in j + 2..k {
            h[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    Ok(h)
}

/// Eigenvalues of `[[a, b], [c, d]]`, larger magnitude first.
fn eig2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let half_tr = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let disc = (half_diff * half_diff + b * c).sqrt();
    let (l1, l2) = (half_tr + disc, half_tr - disc);
    let det = a * d - b * c;
    // recover the small root from the determinant to avoid cancellation
    if l1.norm() >= l2.norm() {
        if l1.norm() > 0.0 {
            (l1, det / l1)
        } else {
            (l1, l2)
        }
    } else {
        (l2, det / l2)
    }
}

fn givens(a: C64, b: C64) -> (f64, C64) {
    // returns (c, s) with [c, s; -conj(s), c] [a; b] = [r; 0]
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    let c = na / r;
    let s = (a / na) * b.conj() / r;
    (c, s)
}

/// Roots of an upper Hessenberg matrix by shifted QR with deflation.
fn hessenberg_qr_roots(mut h: CMatrix) -> Result<Vec<C64>> {
    let k = h.nrows();
    let scale = h.norm();
    let mut roots = vec![C64::new(0.0, 0.0); k];
    if scale == 0.0 {
        return Ok(roots);
    }
    let eps = f64::EPSILON;
    let mut hi = k - 1;
    let mut its = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            roots[0] = h[(0, 0)];
            break;
        }
        // locate the start of the active unreduced window
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut tst = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if tst == 0.0 {
                tst = scale;
            }
            if sub <= eps * tst || (its >= STALL_SWEEPS && sub <= SUBDIAGONAL_RESIDUAL * scale) {
                h[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            roots[hi] = h[(hi, hi)];
            hi -= 1;
            its = 0;
            continue;
        }
        if lo + 1 == hi {
            let (l1, l2) = eig2(h[(lo, lo)], h[(lo, hi)], h[(hi, lo)], h[(hi, hi)]);
            roots[hi] = l1;
            roots[lo] = l2;
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            its = 0;
            continue;
        }
        its += 1;
        total += 1;
        if its > MAX_SWEEPS {
            let residual = (lo + 1..=hi)
                .map(|i| h[(i, i - 1)].norm())
                .fold(0.0, f64::max);
            return Err(Error::NonConvergence {
                sweeps: total,
                residual: residual / scale,
            });
        }
        let shift = if its.is_multiple_of(10) {
            // exceptional shift to break cycles
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            let (l1, l2) = eig2(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            );
            if (l1 - h[(hi, hi)]).norm() <= (l2 - h[(hi, hi)]).norm() {
                l1
            } else {
                l2
            }
        };
        qr_sweep(&mut h, lo, hi, shift);
    }
    Ok(roots)
}

/// One explicitly shifted QR step `H - σ = QR, H <- RQ + σ` on the window
/// `lo..=hi`.
fn qr_sweep(h: &mut CMatrix, lo: usize, hi: usize, shift: C64) {
    for i in lo..=hi {
        h[(i, i)] -= shift;
    }
    let mut rots = Vec::with_capacity(hi - lo);
    for j in lo..hi {
        let (c, s) = givens(h[(j, j)], h[(j + 1, j)]);
        for col in j..=hi {
            let a = h[(j, col)];
            let b = h[(j + 1, col)];
            h[(j, col)] = a * c + s * b;
            h[(j + 1, col)] = -s.conj() * a + b * c;
        }
        rots.push((c, s));
    }
    for (offset, (c, s)) in rots.into_iter().enumerate() {
        let j = lo + offset;
        let top = (j + 2).min(hi);
        for row in lo..=top {
            let a = h[(row, j)];
            let b = h[(row, j + 1)];
            h[(row, j)] = a * c + b * s.conj();
            h[(row, j + 1)] = -a * s + b * c;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += shift;
    }
}

/// Zeros of the characteristic polynomial of `a`, with multiplicity.
pub fn char_poly_roots(a: &CMatrix) -> Result<Vec<C64>> {
    check_square(a)?;
    match a.nrows() {
        1 => Ok(vec![a[(0, 0)]]),
        2 => {
            let (l1, l2) = eig2(a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
            Ok(vec![l1, l2])
        }
        _ => hessenberg_qr_roots(hessenberg(a)?),
    }
}

/// Roots via the companion matrix of the Faddeev–LeVerrier coefficients.
pub fn companion_roots(a: &CMatrix) -> Result<Vec<C64>> {
    let coeffs = char_poly_coefficients(a)?;
    let c = companion_matrix(&coeffs)?;
    if c.nrows() <= 2 {
        return char_poly_roots(&c);
    }
    hessenberg_qr_roots(c)
}

pub fn spectral_report(a: &CMatrix) -> Result<SpectralWeightReport> {
    Ok(SpectralWeightReport::from_roots(&char_poly_roots(a)?))
}

/// The spectral weight `|A| = Σ|λ_j|`.
pub fn spectral_weight(a: &CMatrix) -> Result<f64> {
    Ok(char_poly_roots(a)?.iter().map(|z| z.norm()).sum())
}

/// Splits the real spectrum of a positive operator on a `(p,q)` space into
/// its `q` nonpositive and `p` nonnegative roots, each sorted ascending.
///
/// Roots with `|Im| > tol`, or a split that does not match the signature,
/// mean the positivity precondition was violated.
pub fn positive_spectrum_split(
    space: &SignatureSpace,
    a: &CMatrix,
    tol: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    space.check_square(a)?;
    let roots = char_poly_roots(a)?;
    let scale = a.norm().max(1.0);
    let imag = roots.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag > tol * scale {
        return Err(Error::NonRealSpectrum { imag });
    }
    let mut re: Vec<f64> = roots.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    let (p, q) = space.counts();
    let positives = re.split_off(q);
    let negatives = re;
    debug_assert_eq!(positives.len(), p);
    if negatives.last().is_some_and(|v| *v > tol * scale)
        || positives.first().is_some_and(|v| *v < -tol * scale)
    {
        return Err(Error::NotPositive {
            min_eigenvalue: f64::NAN,
        });
    }
    Ok((negatives, positives))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::real_matrix;

    fn sorted(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn nilpotent_has_zero_weight() {
        let a = real_matrix(2, 2, &[1.0, 1.0, -1.0, -1.0]);
        let roots = char_poly_roots(&a).unwrap();
        assert!(roots.iter().all(|z| z.norm() == 0.0));
        assert_eq!(spectral_weight(&a).unwrap(), 0.0);
    }

    #[test]
    fn rotation_has_imaginary_roots() {
        let a = real_matrix(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let r = sorted(char_poly_roots(&a).unwrap());
        assert!((r[0] - C64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((r[1] - C64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn scalar_multiples_of_identity() {
        for n in 1..=4 {
            let k = 1.7;
            let a = CMatrix::identity(2 * n, 2 * n) * C64::new(k, 0.0);
            let rep = spectral_report(&a).unwrap();
            assert!((rep.weight_sq - 2.0 * n as f64 * k * k).abs() < 1e-12);
            assert!((rep.weight.powi(2) - 4.0 * (n * n) as f64 * k * k).abs() < 1e-11);
        }
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(spectral_weight(&CMatrix::zeros(4, 4)).unwrap(), 0.0);
        let (neg, pos) = positive_spectrum_split(
            &SignatureSpace::alternating(2),
            &CMatrix::zeros(4, 4),
            1e-10,
        )
        .unwrap();
        assert!(neg.iter().chain(&pos).all(|v| *v == 0.0));
    }

    #[test]
    fn faddeev_leverrier_diag() {
        let a = real_matrix(3, 3, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0]);
        let c = char_poly_coefficients(&a).unwrap();
        let expect = [1.0, -6.0, 11.0, -6.0];
        for (x, e) in c.iter().zip(expect) {
            assert!((x - C64::new(e, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn hessenberg_shape_and_trace() {
        let a = CMatrix::from_fn(5, 5, |i, j| {
            C64::new((i * 7 + j * 3) as f64 % 5.0 - 2.0, (i + 2 * j) as f64 % 3.0)
        });
        let h = hessenberg(&a).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                if i > j + 1 {
                    assert_eq!(h[(i, j)], C64::new(0.0, 0.0));
                }
            }
        }
        assert!((h.trace() - a.trace()).norm() < 1e-12);
        assert!((h.norm() - a.norm()).abs() < 1e-12);
    }

    #[test]
    fn jordan_block_roots() {
        // 4x4 Jordan block with eigenvalue 2: defective, single root of
        // multiplicity 4
        let mut a = CMatrix::identity(4, 4) * C64::new(2.0, 0.0);
        for i in 0..3 {
            a[(i, i + 1)] = C64::new(1.0, 0.0);
        }
        let roots = char_poly_roots(&a).unwrap();
        for r in roots {
            assert!((r - C64::new(2.0, 0.0)).norm() < 1e-3);
        }
    }

    #[test]
    fn positive_split_example() {
        let s = SignatureSpace::new(vec![1, -1]).unwrap();
        let a = real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let (neg, pos) = positive_spectrum_split(&s, &a, 1e-10).unwrap();
        assert_eq!(neg, vec![-1.0]);
        assert_eq!(pos, vec![1.0]);
    }

    #[test]
    fn positive_split_rejects_complex_spectrum() {
        let s = SignatureSpace::new(vec![1, -1]).unwrap();
        let a = real_matrix(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert!(matches!(
            positive_spectrum_split(&s, &a, 1e-10),
            Err(Error::NonRealSpectrum { .. })
        ));
    }

    #[test]
    fn rejects_non_square() {
        assert!(char_poly_roots(&CMatrix::zeros(2, 3)).is_err());
        assert!(char_poly_coefficients(&CMatrix::zeros(0, 0)).is_err());
    }
}

#![allow(dead_code)]

use ipvar::space::SignatureSpace;
use ipvar::{CMatrix, C64};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn gaussian_vector<R: Rng>(rng: &mut R, dim: usize) -> ipvar::CVector {
    ipvar::CVector::from_fn(dim, |_, _| gaussian(rng))
}

/// `S H` with `H` Hermitian Gaussian, scaled to norm of order one.
pub fn random_symmetric<R: Rng>(rng: &mut R, space: &SignatureSpace) -> CMatrix {
    let d = space.dim();
    let g = gaussian_matrix(rng, d, d);
    let h = (&g + g.adjoint()) * C64::new(0.5 / (d as f64).sqrt(), 0.0);
    space.left_apply(&h)
}

/// `S B B^†`, a positive operator.
pub fn random_positive<R: Rng>(rng: &mut R, space: &SignatureSpace) -> CMatrix {
    let d = space.dim();
    let k = rng.random_range(1..=d);
    let b = gaussian_matrix(rng, d, k);
    space.left_apply(&(&b * b.adjoint()))
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

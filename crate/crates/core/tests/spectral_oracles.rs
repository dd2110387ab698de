//! The root solver against independent oracles: the quadratic formula,
//! nalgebra's complex Schur form, Vieta's relations and similarity
//! invariance.

mod common;

use ipvar::spectral::{char_poly_coefficients, char_poly_roots, companion_roots, spectral_weight};
use ipvar::{CMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::gaussian_matrix;

/// Sorts roots by real part, then imaginary part, for pairing.
fn sorted(mut v: Vec<C64>) -> Vec<C64> {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}

/// Greedy matching distance between two root multisets.
fn match_distance(a: &[C64], b: &[C64]) -> f64 {
    let mut rest: Vec<C64> = b.to_vec();
    let mut worst: f64 = 0.0;
    for z in a {
        let (i, d) = rest
            .iter()
            .enumerate()
            .map(|(i, w)| (i, (z - w).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        worst = worst.max(d);
        rest.swap_remove(i);
    }
    worst
}

#[test]
fn quadratic_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..500 {
        let a = gaussian_matrix(&mut rng, 2, 2);
        let tr = a.trace();
        let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
        let disc = (tr * tr - det * 4.0).sqrt();
        let expected = [(tr + disc) / 2.0, (tr - disc) / 2.0];
        let roots = char_poly_roots(&a).unwrap();
        assert!(match_distance(&roots, &expected) < 1e-12 * (1.0 + a.norm()));
    }
}

#[test]
fn schur_cross_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let k = rng.random_range(3..=8);
        let a = gaussian_matrix(&mut rng, k, k);
        let schur = a.clone().schur().eigenvalues().unwrap();
        let ours = char_poly_roots(&a).unwrap();
        assert!(match_distance(&ours, schur.as_slice()) < 1e-9, "k = {k}");
    }
}

#[test]
fn vieta_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let k = rng.random_range(2..=6);
        let a = gaussian_matrix(&mut rng, k, k) * C64::new(0.7, 0.0);
        let roots = char_poly_roots(&a).unwrap();
        let sum: C64 = roots.iter().sum();
        let prod: C64 = roots.iter().product();
        assert!((sum - a.trace()).norm() < 1e-9);
        assert!((prod - a.determinant()).norm() < 1e-9);
        // elementary symmetric polynomials against the Faddeev-LeVerrier
        // coefficients of det(λ - A) = λ^k + c_1 λ^{k-1} + ... + c_k
        let coeffs = char_poly_coefficients(&a).unwrap();
        let mut e = vec![C64::new(1.0, 0.0)];
        for r in &roots {
            let mut next = vec![C64::new(0.0, 0.0); e.len() + 1];
            for (j, c) in e.iter().enumerate() {
                next[j] += c;
                next[j + 1] -= c * r;
            }
            e = next;
        }
        for (j, c) in coeffs.iter().enumerate() {
            let ej = e[e.len() - coeffs.len() + j];
            assert!((c - ej).norm() < 1e-8, "coefficient {j}: {c} vs {ej}");
        }
    }
}

#[test]
fn similarity_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let k = rng.random_range(2..=6);
        let a = gaussian_matrix(&mut rng, k, k);
        let t = CMatrix::identity(k, k) + gaussian_matrix(&mut rng, k, k) * C64::new(0.2, 0.0);
        let tinv = t.clone().try_inverse().unwrap();
        let b = &t * &a * tinv;
        let wa = spectral_weight(&a).unwrap();
        let wb = spectral_weight(&b).unwrap();
        assert!((wa - wb).abs() < 1e-8 * (1.0 + wa), "{wa} vs {wb}");
    }
}

#[test]
fn real_matrices_have_conjugate_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let k = rng.random_range(2..=7);
        let a = gaussian_matrix(&mut rng, k, k).map(|z| C64::new(z.re, 0.0));
        let roots = sorted(char_poly_roots(&a).unwrap());
        let conj: Vec<C64> = roots.iter().map(|z| z.conj()).collect();
        assert!(match_distance(&roots, &conj) < 1e-9);
    }
}

#[test]
fn repeated_zero_roots_of_rank_one_chains() {
    // rank-one 4x4 matrices have a triple zero root; the companion route
    // loses accuracy here while QR on the matrix does not
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut companion_worst: f64 = 0.0;
    for _ in 0..100 {
        let u = gaussian_matrix(&mut rng, 4, 1);
        let v = gaussian_matrix(&mut rng, 4, 1);
        let a = &u * v.adjoint();
        let lambda = (v.adjoint() * &u)[(0, 0)];
        let w = spectral_weight(&a).unwrap();
        assert!(
            (w - lambda.norm()).abs() < 1e-12 * (1.0 + a.norm()),
            "{w} vs {}",
            lambda.norm()
        );
        let c: f64 = companion_roots(&a).unwrap().iter().map(|z| z.norm()).sum();
        companion_worst = companion_worst.max((c - lambda.norm()).abs());
    }
    assert!(companion_worst > 0.0);
}

#[test]
fn jordan_block_roots() {
    let mut a = CMatrix::identity(3, 3) * C64::new(2.0, 0.0);
    a[(0, 1)] = C64::new(1.0, 0.0);
    a[(1, 2)] = C64::new(1.0, 0.0);
    let roots = char_poly_roots(&a).unwrap();
    for r in roots {
        // a perturbation of size eps moves a triple root by eps^(1/3)
        assert!((r - C64::new(2.0, 0.0)).norm() < 1e-4);
    }
}

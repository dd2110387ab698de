mod common;

use ipvar::action::action;
use ipvar::fermionic::{is_class_pf, is_fermionic_projector, random_operator, Mode};
use ipvar::gauge::{apply_gauge, gauge_fix_hs_norm, random_gauge, GaugeFixOptions};
use ipvar::io::{from_json_str, to_json_string, FrameJson, MatrixJson};
use ipvar::space::{SignatureSpace, SpaceTimeStructure};
use ipvar::transforms::{restrict_renormalize, spread_at};
use ipvar::{CMatrix, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::gaussian_matrix;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        -10.0..10.0f64,
        Just(0.0),
        Just(-0.0),
        Just(f64::MIN_POSITIVE),
    ]
}

fn structure() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..=3, 1usize..=2).prop_flat_map(|(m, n)| (Just(m), Just(n), 1..=n * m))
}

fn matrix(seed: u64, d: usize) -> CMatrix {
    gaussian_matrix(&mut ChaCha8Rng::seed_from_u64(seed), d, d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn matrix_json_round_trip_is_bit_exact(d in 1usize..5, vals in prop::collection::vec(finite(), 32)) {
        let a = CMatrix::from_fn(d, d, |i, j| {
            let k = 2 * (i * d + j);
            C64::new(vals[k % 32], vals[(k + 1) % 32])
        });
        let text = to_json_string(&MatrixJson::from_matrix(&a).unwrap()).unwrap();
        let back = from_json_str::<MatrixJson>(&text).unwrap().to_matrix().unwrap();
        for (x, y) in a.iter().zip(back.iter()) {
            prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
            prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn frame_json_round_trip_is_bit_exact((m, n, f) in structure(), seed in any::<u64>(), mode in 0usize..3) {
        let st = SpaceTimeStructure::new(m, n).unwrap();
        let mode = [Mode::Projector, Mode::ClassPf, Mode::RankFUnnormalized][mode];
        let w = gaussian_matrix(&mut ChaCha8Rng::seed_from_u64(seed), st.dim(), f);
        let fj = FrameJson { f, mode, w: w.iter().map(|z| [z.re, z.im]).collect(), structure: None };
        let back: FrameJson = from_json_str(&to_json_string(&fj).unwrap()).unwrap();
        prop_assert_eq!(&back, &fj);
        prop_assert_eq!(back.to_span().unwrap().w, w);
        prop_assert_eq!(back.resolve_structure(Some(m), Some(n)).unwrap(), st);
    }

    #[test]
    fn adjoint_is_an_anti_multiplicative_involution(k in 1usize..=4, seed in any::<u64>()) {
        let space = SignatureSpace::alternating(k);
        let d = space.dim();
        let a = matrix(seed, d);
        let b = matrix(seed.wrapping_add(1), d);
        let aa = space.adjoint(&space.adjoint(&a).unwrap()).unwrap();
        prop_assert!((aa - &a).norm() <= 1e-12 * a.norm());
        let lhs = space.adjoint(&(&a * &b)).unwrap();
        let rhs = space.adjoint(&b).unwrap() * space.adjoint(&a).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (a.norm() * b.norm()).max(1.0));
    }

    #[test]
    fn blocks_partition_the_matrix((m, n, _f) in structure(), seed in any::<u64>()) {
        let st = SpaceTimeStructure::new(m, n).unwrap();
        let a = matrix(seed, st.dim());
        let mut rebuilt = CMatrix::zeros(st.dim(), st.dim());
        for x in 0..m {
            for y in 0..m {
                st.set_block(&mut rebuilt, x, y, &st.localize(&a, x, y).unwrap()).unwrap();
            }
        }
        prop_assert_eq!(rebuilt, a);
        let mut sum = CMatrix::zeros(st.dim(), st.dim());
        for x in 0..m {
            let e = st.projector(x).unwrap();
            prop_assert_eq!(&e * &e, e.clone());
            prop_assert_eq!(st.space().adjoint(&e).unwrap(), e.clone());
            for y in (0..m).filter(|y| *y != x) {
                prop_assert_eq!(&e * st.projector(y).unwrap(), CMatrix::zeros(st.dim(), st.dim()));
            }
            sum += e;
        }
        prop_assert_eq!(sum, CMatrix::identity(st.dim(), st.dim()));
    }

    #[test]
    fn restriction_lands_in_the_class((m, n, f) in structure(), seed in any::<u64>(), x in 0usize..3) {
        prop_assume!(m >= 2);
        let st = SpaceTimeStructure::new(m, n).unwrap();
        let p = random_operator(&st, f, Mode::ClassPf, seed).unwrap();
        let r = restrict_renormalize(&st, p.matrix(), x % m, f as f64).unwrap();
        // a negative scale flips the sign of -Q
        prop_assume!(r.scale > 0.0);
        prop_assert!((r.operator.trace().re - f as f64).abs() <= 1e-9 * f as f64);
        prop_assert!(is_class_pf(r.structure.space(), &r.operator, f as f64, 1e-8).unwrap());
    }

    #[test]
    fn spreading_preserves_fermionic_projectors((m, n, f) in structure(), seed in any::<u64>(), x in 0usize..3) {
        let st = SpaceTimeStructure::new(m, n).unwrap();
        prop_assume!(f <= n * m);
        let p = random_operator(&st, f, Mode::Projector, seed).unwrap();
        let big = SpaceTimeStructure::new(m + 1, n).unwrap();
        let q = spread_at(&st, p.matrix(), x % m).unwrap();
        prop_assert!(is_fermionic_projector(big.space(), &q, f, 1e-9).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gauge_fixing_stays_on_the_orbit((m, n, f) in structure(), seed in any::<u64>()) {
        let st = SpaceTimeStructure::new(m, n).unwrap();
        let p = random_operator(&st, f, Mode::ClassPf, seed).unwrap();
        let boosted = apply_gauge(&st, p.matrix(), &random_gauge(&st, 0.8, seed ^ 1).unwrap()).unwrap();
        let fixed = gauge_fix_hs_norm(&st, &boosted, &GaugeFixOptions::default()).unwrap();
        prop_assert!(fixed.transformation.is_valid(&st, 1e-9).unwrap());
        prop_assert!(fixed.norm <= boosted.norm() * (1.0 + 1e-12));
        let mapped = apply_gauge(&st, &boosted, &fixed.transformation).unwrap();
        prop_assert!((mapped - &fixed.operator).norm() <= 1e-8 * fixed.norm.max(1.0));
        let mu = 1.0 / (2 * n) as f64;
        let s0 = action(&st, &boosted, mu).unwrap().total;
        let s1 = action(&st, &fixed.operator, mu).unwrap().total;
        prop_assert!((s0 - s1).abs() <= 1e-7 * s0.max(1.0));
    }
}

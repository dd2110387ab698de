//! Closed-form configurations used as reference points: the one- and
//! two-particle examples on two points, the four-point spreading example,
//! and a nilpotent closed chain.

use crate::error::Result;
use crate::fermionic::{
    even_spread_frame, localized_frame, projector_from_frame, FermionicOperator,
};
use crate::space::{real_matrix, SpaceTimeStructure};
use crate::CMatrix;

/// An operator together with the space-time it lives on.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    pub structure: SpaceTimeStructure,
    pub operator: FermionicOperator,
}

impl Configuration {
    pub fn matrix(&self) -> &CMatrix {
        self.operator.matrix()
    }
}

fn two_points() -> SpaceTimeStructure {
    SpaceTimeStructure::new(2, 1).expect("valid structure")
}

fn projector(st: SpaceTimeStructure, w: CMatrix) -> Result<Configuration> {
    let operator = projector_from_frame(st.space(), &w)?;
    Ok(Configuration {
        structure: st,
        operator,
    })
}

/// One particle at the first point: `P = diag(0, 1, 0, 0)`, action `1/2`.
pub fn example1_localized() -> Result<Configuration> {
    projector(two_points(), real_matrix(4, 1, &[0.0, 1.0, 0.0, 0.0]))
}

/// One particle spread over both points, action `1/8`.
pub fn example1_spread() -> Result<Configuration> {
    let st = two_points();
    let w = even_spread_frame(&st, 1)?;
    projector(st, w)
}

/// `u = (sinh φ, 0, 0, cosh φ)`.
pub fn example1_boost(phi: f64) -> Result<Configuration> {
    projector(
        two_points(),
        real_matrix(4, 1, &[phi.sinh(), 0.0, 0.0, phi.cosh()]),
    )
}

/// `½ (cosh⁴φ + sinh⁴φ)²`.
pub fn example1_boost_action(phi: f64) -> f64 {
    0.5 * (phi.cosh().powi(4) + phi.sinh().powi(4)).powi(2)
}

/// `u = (0, cos φ, 0, sin φ)`.
pub fn example1_rotation(phi: f64) -> Result<Configuration> {
    projector(
        two_points(),
        real_matrix(4, 1, &[0.0, phi.cos(), 0.0, phi.sin()]),
    )
}

/// `½ (cos⁴φ + sin⁴φ)² = ½ (2 sin⁴φ - 2 sin²φ + 1)²`.
pub fn example1_rotation_action(phi: f64) -> f64 {
    0.5 * (phi.cos().powi(4) + phi.sin().powi(4)).powi(2)
}

/// Two particles, one at each point: `P = diag(0, 1, 0, 1)`, action `1`.
pub fn example2_plocal() -> Result<Configuration> {
    projector(
        two_points(),
        real_matrix(4, 2, &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]),
    )
}

/// The two-parameter family of two-particle projectors. Its frame
/// `(sinh α, 0, 0, cosh α)`, `(0, cosh β, sinh β, 0)` is already
/// orthonormal, so the matrix is written out entrywise.
pub fn example2_family(alpha: f64, beta: f64) -> Result<Configuration> {
    let st = two_points();
    let (sa, ca) = (alpha.sinh(), alpha.cosh());
    let (sb, cb) = (beta.sinh(), beta.cosh());
    let w = real_matrix(4, 2, &[sa, 0.0, 0.0, cb, 0.0, sb, ca, 0.0]);
    let mut operator = projector_from_frame(st.space(), &w)?;
    #[rustfmt::skip]
    let p = real_matrix(
        4,
        4,
        &[
            -sa * sa, 0.0, 0.0, sa * ca,
            0.0, cb * cb, -sb * cb, 0.0,
            0.0, sb * cb, -sb * sb, 0.0,
            -sa * ca, 0.0, 0.0, ca * ca,
        ],
    );
    operator = FermionicOperator::with_matrix(operator.span().clone(), p);
    Ok(Configuration {
        structure: st,
        operator,
    })
}

fn example3(f: usize, m: usize, spread: bool) -> Result<Configuration> {
    let st = SpaceTimeStructure::new(m, 1)?;
    let w = if spread {
        even_spread_frame(&st, f)?
    } else {
        localized_frame(&st, f)?
    };
    projector(st, w)
}

/// `f` particles on distinct points of an `m`-point space-time with
/// `n = 1`; action `f/2`.
pub fn example3_localized(f: usize, m: usize) -> Result<Configuration> {
    example3(f, m, false)
}

/// Each particle evenly spread over `m/f` points; action `(f/2)(f/m)²`.
pub fn example3_spread(f: usize, m: usize) -> Result<Configuration> {
    example3(f, m, true)
}

/// A symmetric matrix for `S = diag(1, -1)` that is nilpotent and so has
/// spectral weight zero although it does not vanish.
pub fn nilpotent() -> CMatrix {
    real_matrix(2, 2, &[1.0, 1.0, -1.0, -1.0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::action;
    use crate::fermionic::is_fermionic_projector;

    #[test]
    fn family_matches_frame_projector() {
        for (a, b) in [(0.0, 0.0), (0.3, -0.7), (1.1, 0.4)] {
            let c = example2_family(a, b).unwrap();
            let from_frame =
                projector_from_frame(c.structure.space(), &c.operator.span().w).unwrap();
            assert!((from_frame.matrix() - c.matrix()).norm() < 1e-12);
            assert!(is_fermionic_projector(c.structure.space(), c.matrix(), 2, 1e-10).unwrap());
        }
    }

    #[test]
    fn family_at_origin_is_plocal() {
        let a = example2_family(0.0, 0.0).unwrap();
        let b = example2_plocal().unwrap();
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn reference_actions() {
        let c = example1_localized().unwrap();
        assert_eq!(action(&c.structure, c.matrix(), 0.5).unwrap().total, 0.5);
        let c = example3_spread(2, 4).unwrap();
        let s = action(&c.structure, c.matrix(), 0.5).unwrap().total;
        assert!((s - 0.25).abs() < 1e-12);
    }
}

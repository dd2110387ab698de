//! Built-in verification suite: every closed-form reference value the crate
//! knows about, evaluated through the public API and compared item by item.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::action::{
    action, action_surface_example2, critical_lagrangian_pairsum, lagrangian, lower_bounds,
};
use crate::catalog::{self, Configuration};
use crate::error::{Error, Result};
use crate::fermionic::{
    class_pf_from_frame, closed_chain, is_projector, random_operator, random_symmetric_projector,
    Mode,
};
use crate::gauge::{
    apply_gauge, check_homogeneous, gauge_fix_hs_norm, hs_norm, u11_block, GaugeFixOptions,
    GaugeTransformation,
};
use crate::optimize::{
    minimize_auxiliary, minimize_constrained, scan_infimum, MinimizeConfig, Objective,
};
use crate::space::{real_matrix, real_vector, SignatureSpace, SpaceTimeStructure, DEFAULT_TOL};
use crate::spectral::{char_poly_roots, positive_spectrum_split, spectral_weight};
use crate::transforms::{restrict_renormalize, spread_point};
use crate::{CMatrix, C64};

/// One compared quantity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub found: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn close(&mut self, name: impl Into<String>, found: Result<f64>, expected: f64, tol: f64) {
        let name = name.into();
        let check = match found {
            Ok(v) => Check {
                passed: (v - expected).abs() <= tol,
                name,
                expected,
                found: v,
                tolerance: tol,
                detail: None,
            },
            Err(e) => Check {
                name,
                expected,
                found: f64::NAN,
                tolerance: tol,
                passed: false,
                detail: Some(e.to_string()),
            },
        };
        self.checks.push(check);
    }

    /// Passes when `found <= limit`.
    fn at_most(&mut self, name: impl Into<String>, found: Result<f64>, limit: f64) {
        let name = name.into();
        let (v, detail) = match found {
            Ok(v) => (v, None),
            Err(e) => (f64::NAN, Some(e.to_string())),
        };
        self.checks.push(Check {
            name,
            expected: limit,
            found: v,
            tolerance: 0.0,
            passed: v <= limit,
            detail,
        });
    }

    fn holds(&mut self, name: impl Into<String>, found: Result<bool>, expected: bool) {
        let value = found.map(|b| if b { 1.0 } else { 0.0 });
        self.close(name, value, if expected { 1.0 } else { 0.0 }, 0.0);
    }
}

/// Reads a value out of a shared result without consuming it.
fn field<T>(r: &Result<T>, get: impl Fn(&T) -> f64) -> Result<f64> {
    match r {
        Ok(v) => Ok(get(v)),
        Err(e) => Err(Error::InvalidInput(e.to_string())),
    }
}

fn total(c: &Configuration, mu: f64) -> Result<f64> {
    Ok(action(&c.structure, c.matrix(), mu)?.total)
}

fn grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    (0..points).map(move |i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
}

fn diag2() -> SignatureSpace {
    SignatureSpace::alternating(1)
}

fn space_checks(r: &mut VerifyReport) -> Result<()> {
    let st = SpaceTimeStructure::new(2, 1)?;
    let u = real_vector(&[0.0, 1.0, 0.0, 0.0]);
    r.close(
        "inner product <u|u> of (0,1,0,0)",
        st.space().inner_product(&u, &u).map(|z| z.re),
        -1.0,
        0.0,
    );
    let a = real_matrix(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    r.close(
        "adjoint of [[0,1],[-1,0]] is itself",
        diag2().adjoint(&a).map(|b| (b - &a).norm()),
        0.0,
        0.0,
    );
    r.holds(
        "[[1,1],[-1,-1]] is symmetric",
        diag2().is_symmetric(&catalog::nilpotent(), DEFAULT_TOL),
        true,
    );
    r.holds(
        "diag(1,-1) is positive",
        diag2().is_positive_operator(&real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]), DEFAULT_TOL),
        true,
    );
    r.holds(
        "diag(0,-1) is positive",
        diag2().is_positive_operator(&real_matrix(2, 2, &[0.0, 0.0, 0.0, -1.0]), DEFAULT_TOL),
        true,
    );
    let loc = catalog::example1_localized()?;
    let spread = catalog::example1_spread()?;
    r.close(
        "localized kernel P(1,1) = diag(0,1)",
        st.localize(loc.matrix(), 0, 0)
            .map(|b| (b - real_matrix(2, 2, &[0.0, 0.0, 0.0, 1.0])).norm()),
        0.0,
        1e-15,
    );
    r.close(
        "spread kernel P(1,2) = [[0,0],[0,1/2]]",
        st.localize(spread.matrix(), 0, 1)
            .map(|b| (b - real_matrix(2, 2, &[0.0, 0.0, 0.0, 0.5])).norm()),
        0.0,
        1e-15,
    );
    r.close(
        "localized local trace at point 1",
        st.local_trace(loc.matrix(), 0).map(|z| z.re),
        1.0,
        1e-15,
    );
    r.close(
        "localized local trace at point 2",
        st.local_trace(loc.matrix(), 1).map(|z| z.norm()),
        0.0,
        0.0,
    );
    let plocal = catalog::example2_plocal()?;
    for x in 0..2 {
        r.close(
            format!("two-particle local trace at point {}", x + 1),
            st.local_trace(plocal.matrix(), x).map(|z| z.re),
            1.0,
            1e-15,
        );
    }
    Ok(())
}

fn spectral_checks(r: &mut VerifyReport) -> Result<()> {
    let nil = catalog::nilpotent();
    r.close(
        "nilpotent spectral weight",
        spectral_weight(&nil),
        0.0,
        1e-12,
    );
    r.close(
        "nilpotent roots vanish",
        char_poly_roots(&nil).map(|v| v.iter().map(|z| z.norm()).fold(0.0, f64::max)),
        0.0,
        1e-12,
    );
    let rot = real_matrix(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    r.close(
        "roots of [[0,1],[-1,0]] are +-i",
        char_poly_roots(&rot).map(|v| {
            let mut im: Vec<f64> = v.iter().map(|z| z.im).collect();
            im.sort_by(f64::total_cmp);
            (im[0] + 1.0).abs() + (im[1] - 1.0).abs() + v.iter().map(|z| z.re.abs()).sum::<f64>()
        }),
        0.0,
        1e-14,
    );
    let k = 3.0;
    let ak = CMatrix::identity(2, 2) * C64::new(k, 0.0);
    r.close("|A_k| for A_k = k 1", spectral_weight(&ak), 2.0 * k, 1e-12);
    r.close(
        "L_mu[A_k] = 2nk^2 - 4 mu n^2 k^2 at mu = 1",
        lagrangian(&ak, 1.0),
        2.0 * k * k - 4.0 * k * k,
        1e-10,
    );
    let a1 = real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    r.close(
        "spectrum split of diag(1,-1)",
        positive_spectrum_split(&diag2(), &a1, DEFAULT_TOL)
            .map(|(neg, pos)| (neg[0] + 1.0).abs() + (pos[0] - 1.0).abs()),
        0.0,
        0.0,
    );
    Ok(())
}

fn example1_checks(r: &mut VerifyReport) -> Result<()> {
    let loc = catalog::example1_localized()?;
    let spread = catalog::example1_spread()?;
    let st = &loc.structure;
    r.close("example 1 localized action", total(&loc, 0.5), 0.5, 1e-10);
    r.close("example 1 spread action", total(&spread, 0.5), 0.125, 1e-10);
    r.close(
        "example 1 localized A_11 weight",
        closed_chain(st, loc.matrix(), 0, 0).and_then(|a| spectral_weight(&a)),
        1.0,
        1e-12,
    );
    for (x, y) in [(0, 1), (1, 0), (1, 1)] {
        r.close(
            format!("example 1 localized A_{}{} vanishes", x + 1, y + 1),
            closed_chain(st, loc.matrix(), x, y).map(|a| a.norm()),
            0.0,
            0.0,
        );
    }
    for x in 0..2 {
        for y in 0..2 {
            let a = closed_chain(st, spread.matrix(), x, y)?;
            r.close(
                format!("example 1 spread |A_{}{}|^2", x + 1, y + 1),
                spectral_weight(&a).map(|w| w * w),
                1.0 / 16.0,
                1e-12,
            );
            r.close(
                format!("example 1 spread |A_{}{}^2|", x + 1, y + 1),
                lagrangian(&a, 0.0),
                1.0 / 16.0,
                1e-12,
            );
        }
    }
    r.holds(
        "example 1 localized is a projector",
        is_projector(st.space(), loc.matrix(), DEFAULT_TOL),
        true,
    );
    r.holds(
        "example 1 spread is a projector",
        is_projector(st.space(), spread.matrix(), DEFAULT_TOL),
        true,
    );
    r.close(
        "L[diag(0,1)] at mu = 1/2",
        lagrangian(&real_matrix(2, 2, &[0.0, 0.0, 0.0, 1.0]), 0.5),
        0.5,
        1e-15,
    );
    r.close(
        "pair-sum form of L[diag(0,1)]",
        critical_lagrangian_pairsum(&real_matrix(2, 2, &[0.0, 0.0, 0.0, 1.0])),
        0.5,
        1e-15,
    );
    let w = real_matrix(4, 1, &[0.0, 2.0, 0.0, 0.0]);
    r.close(
        "class P^f from (0,2,0,0) is diag(0,1,0,0)",
        class_pf_from_frame(st.space(), &w).map(|op| (op.matrix() - loc.matrix()).norm()),
        0.0,
        1e-15,
    );
    for phi in grid(-1.0, 1.0, 21) {
        r.close(
            format!("boost family at phi = {phi:.2}"),
            catalog::example1_boost(phi).and_then(|c| total(&c, 0.5)),
            catalog::example1_boost_action(phi),
            1e-8,
        );
    }
    for phi in grid(0.0, FRAC_PI_2, 21) {
        r.close(
            format!("rotation family at phi = {phi:.4}"),
            catalog::example1_rotation(phi).and_then(|c| total(&c, 0.5)),
            catalog::example1_rotation_action(phi),
            1e-8,
        );
    }
    r.close(
        "rotation family minimum at phi = pi/4",
        catalog::example1_rotation(FRAC_PI_4).and_then(|c| total(&c, 0.5)),
        0.125,
        1e-12,
    );
    Ok(())
}

fn example2_and_3_checks(r: &mut VerifyReport) -> Result<()> {
    let plocal = catalog::example2_plocal()?;
    r.close("example 2 local action", total(&plocal, 0.5), 1.0, 1e-10);
    r.close(
        "example 2 surface at origin",
        Ok(action_surface_example2(0.0, 0.0)),
        1.0,
        1e-15,
    );
    for alpha in grid(-1.0, 1.0, 5) {
        for beta in grid(-1.0, 1.0, 5) {
            let expected = action_surface_example2(alpha, beta);
            r.close(
                format!("example 2 surface at ({alpha:.1}, {beta:.1})"),
                catalog::example2_family(alpha, beta).and_then(|c| total(&c, 0.5)),
                expected,
                1e-8 * expected.max(1.0),
            );
        }
    }
    r.close(
        "example 3 localized action",
        catalog::example3_localized(2, 4).and_then(|c| total(&c, 0.5)),
        1.0,
        1e-8,
    );
    r.close(
        "example 3 spread action",
        catalog::example3_spread(2, 4).and_then(|c| total(&c, 0.5)),
        0.25,
        1e-8,
    );
    Ok(())
}

/// A fermionic projector when one exists (`f <= n`), otherwise a symmetric
/// projector of rank `f` with mixed-signature image.
pub fn one_point_projector(st: &SpaceTimeStructure, f: usize, seed: u64) -> Result<CMatrix> {
    if f <= st.n() * st.m() {
        return Ok(random_operator(st, f, Mode::Projector, seed)?.into_matrix());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_symmetric_projector(st.space(), f, &mut rng)
}

fn one_point_checks(r: &mut VerifyReport) -> Result<()> {
    for (n, f) in [(1, 1), (2, 1), (2, 3)] {
        let st = SpaceTimeStructure::new(1, n)?;
        let expected = f as f64 - (f * f) as f64 / (2 * n) as f64;
        for seed in 0..3 {
            let p = one_point_projector(&st, f, seed)?;
            r.close(
                format!("one-point action n={n} f={f} seed={seed}"),
                action(&st, &p, 1.0 / (2 * n) as f64).map(|a| a.total),
                expected,
                1e-9,
            );
        }
    }
    let st = SpaceTimeStructure::new(1, 1)?;
    let p = random_operator(&st, 1, Mode::Projector, 0)?;
    r.close(
        "one-point global bound",
        lower_bounds(&st, p.matrix()).map(|b| b.global),
        1.0 / 256.0,
        1e-15,
    );
    let loc = catalog::example1_localized()?;
    r.close(
        "example 1 localized first local bound",
        lower_bounds(&loc.structure, loc.matrix()).map(|b| b.per_point[0].llb1),
        1.0 / 256.0,
        1e-15,
    );
    Ok(())
}

fn gauge_checks(r: &mut VerifyReport) -> Result<()> {
    let spread = catalog::example1_spread()?;
    let st = &spread.structure;
    let theta = 0.7;
    let block = u11_block(0.0, 0.0, 0.0, theta);
    let expected = real_matrix(
        2,
        2,
        &[theta.cosh(), theta.sinh(), theta.sinh(), theta.cosh()],
    );
    r.close(
        "boost block form",
        Ok((&block - expected).norm()),
        0.0,
        1e-15,
    );
    let boost = |t: f64| GaugeTransformation {
        blocks: vec![u11_block(0.0, 0.0, 0.0, t), CMatrix::identity(2, 2)],
    };
    r.holds(
        "boost block is an isometry",
        boost(theta).is_valid(st, 1e-10),
        true,
    );
    let boosted = apply_gauge(st, spread.matrix(), &boost(2.0))?;
    r.close(
        "boosted spread action unchanged",
        action(st, &boosted, 0.5).map(|a| a.total),
        0.125,
        1e-7,
    );
    let norms: Vec<f64> = [0.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|t| apply_gauge(st, spread.matrix(), &boost(*t)).map(|q| hs_norm(&q)))
        .collect::<Result<_>>()?;
    r.holds(
        "boost orbit norms grow",
        Ok(norms.windows(2).all(|w| w[1] > w[0]) && norms[3] > 100.0),
        true,
    );
    let fixed = gauge_fix_hs_norm(st, &boosted, &GaugeFixOptions::default());
    r.close(
        "gauge fixing recovers the spread norm",
        fixed.map(|g| g.norm),
        hs_norm(spread.matrix()),
        1e-6,
    );
    let plocal = catalog::example2_plocal()?;
    r.close(
        "gauge fixing keeps the local projector",
        gauge_fix_hs_norm(st, plocal.matrix(), &GaugeFixOptions::default()).map(|g| g.norm),
        2f64.sqrt(),
        1e-12,
    );
    let id = GaugeTransformation::identity(st);
    r.holds(
        "local projector is homogeneous",
        check_homogeneous(st, plocal.matrix(), &[1, 0], &id, 1e-10),
        true,
    );
    let loc = catalog::example1_localized()?;
    r.holds(
        "localized projector is not homogeneous",
        check_homogeneous(st, loc.matrix(), &[1, 0], &id, 1e-10),
        false,
    );
    Ok(())
}

fn transform_checks(r: &mut VerifyReport) -> Result<()> {
    let loc = catalog::example1_localized()?;
    let sp = spread_point(&loc.structure, loc.matrix(), 0.5);
    r.at_most(
        "spreading example 1 localized",
        sp.map(|s| s.action_after),
        5.0 / 16.0 + 1e-9,
    );
    let plocal = catalog::example2_plocal()?;
    let q = restrict_renormalize(&plocal.structure, plocal.matrix(), 1, 2.0);
    r.close(
        "restriction scale for the local projector",
        field(&q, |q| q.scale),
        2.0,
        1e-15,
    );
    r.close(
        "restriction keeps the trace",
        q.map(|q| q.operator.trace().re),
        2.0,
        1e-15,
    );
    Ok(())
}

fn optimizer_checks(r: &mut VerifyReport) -> Result<()> {
    let base = MinimizeConfig::default();
    r.close(
        "minimum over one-particle projectors on two points",
        minimize_auxiliary(&base).map(|m| m.best_action),
        0.125,
        1e-4,
    );
    let two = minimize_auxiliary(&MinimizeConfig {
        f: 2,
        ..base.clone()
    });
    r.close(
        "minimum over two-particle projectors",
        field(&two, |m| m.best_action),
        1.0,
        1e-3,
    );
    for x in 0..2 {
        r.close(
            format!("two-particle minimizer local trace at point {}", x + 1),
            field(&two, |m| m.report.local_traces[x][0]),
            1.0,
            1e-3,
        );
    }
    r.close(
        "one-point optimizer value",
        minimize_auxiliary(&MinimizeConfig {
            m: 1,
            ..base.clone()
        })
        .map(|m| m.best_action),
        0.5,
        1e-12,
    );
    let unnorm = minimize_constrained(&MinimizeConfig {
        mode: Mode::RankFUnnormalized,
        objective: Objective::Constrained { kappa: 0.25 },
        ..base.clone()
    });
    r.close(
        "unnormalized minimizer action at mu-hat",
        unnorm.map(|m| m.best_action),
        0.0,
        1e-4,
    );
    let scan = scan_infimum(1, 1, &[1, 2], 0.5, &base)?;
    r.close("scan I(1,1)", Ok(scan.infimum[0].total), 0.5, 1e-9);
    r.at_most("scan I(1,2)", Ok(scan.infimum[1].total), 0.125 + 1e-6);
    r.holds(
        "scan rows above the global bound",
        Ok(scan.bound_violations.is_empty()),
        true,
    );
    // the class P^f column converges slowly here, so fewer restarts
    let scan2 = scan_infimum(
        2,
        1,
        &[2],
        0.5,
        &MinimizeConfig {
            restarts: 8,
            ..base
        },
    )?;
    r.close("scan J(2,2)", Ok(scan2.projector[0].total), 1.0, 1e-3);
    Ok(())
}

/// Runs the whole suite. Failures to even set up a group are recorded as a
/// failing check rather than returned.
pub fn run_verification() -> VerifyReport {
    let mut report = VerifyReport::default();
    type Group = fn(&mut VerifyReport) -> Result<()>;
    let groups: [(&str, Group); 8] = [
        ("space", space_checks),
        ("spectral", spectral_checks),
        ("example 1", example1_checks),
        ("examples 2 and 3", example2_and_3_checks),
        ("one-point", one_point_checks),
        ("gauge", gauge_checks),
        ("transforms", transform_checks),
        ("optimizer", optimizer_checks),
    ];
    for (name, group) in groups {
        if let Err(e) = group(&mut report) {
            report.close(format!("{name} setup"), Err::<f64, Error>(e), 0.0, 0.0);
        }
    }
    report
}

//! Boosts a random operator by a local gauge transformation and undoes the
//! boost by minimizing the Hilbert-Schmidt norm over the gauge orbit.

use ipvar::action::action;
use ipvar::fermionic::{random_operator, Mode};
use ipvar::gauge::{apply_gauge, gauge_fix_hs_norm, hs_norm, random_gauge, GaugeFixOptions};
use ipvar::space::SpaceTimeStructure;

fn main() -> ipvar::Result<()> {
    let st = SpaceTimeStructure::new(3, 1)?;
    let p = random_operator(&st, 2, Mode::Projector, 7)?;
    let boosted = apply_gauge(&st, p.matrix(), &random_gauge(&st, 1.5, 8)?)?;
    let fixed = gauge_fix_hs_norm(&st, &boosted, &GaugeFixOptions::default())?;

    println!(
        "norm: original {:.6}, boosted {:.6}, fixed {:.6}",
        hs_norm(p.matrix()),
        hs_norm(&boosted),
        fixed.norm
    );
    println!(
        "{} iterations, gradient {:.2e}",
        fixed.iterations, fixed.gradient_norm
    );
    for (name, q) in [
        ("original", p.matrix()),
        ("boosted", &boosted),
        ("fixed", &fixed.operator),
    ] {
        println!("action of {name}: {:.12}", action(&st, q, 0.5)?.total);
    }
    Ok(())
}

//! Repeatedly spreads the localized one-particle projector onto a new point
//! and compares each step with the guaranteed factor `1 - 3/(4m)`.

use ipvar::catalog;
use ipvar::fermionic::is_projector;
use ipvar::transforms::spread_point;

fn main() -> ipvar::Result<()> {
    let c = catalog::example1_localized()?;
    let mut p = c.matrix().clone();
    let mut st = c.structure;
    for _ in 0..4 {
        let m = st.m();
        let s = spread_point(&st, &p, 0.5)?;
        let factor = 1.0 - 3.0 / (4.0 * m as f64);
        println!(
            "m = {m} -> {}: spread point {}, action {:.6} -> {:.6} (bound {:.6}), projector: {}",
            m + 1,
            s.chosen_point,
            s.action_before,
            s.action_after,
            factor * s.action_before,
            is_projector(s.structure.space(), &s.operator, 1e-10)?
        );
        st = s.structure;
        p = s.operator;
    }
    Ok(())
}

//! Evaluates the action of the two Example 1 configurations and prints the
//! Lagrangian matrix of each.

use ipvar::action::action;
use ipvar::catalog;

fn main() -> ipvar::Result<()> {
    for (name, c) in [
        ("localized", catalog::example1_localized()?),
        ("spread", catalog::example1_spread()?),
    ] {
        let r = action(&c.structure, c.matrix(), 0.5)?;
        println!(
            "{name}: S = {:.6}, sum |A_xy|^2 = {:.6}",
            r.total, r.constraint_value
        );
        for row in &r.lagrangians {
            println!("  {row:?}");
        }
    }
    Ok(())
}

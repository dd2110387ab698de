//! Prints the action of the two-parameter family of two-particle projectors
//! on a grid, next to its closed form.

use ipvar::action::{action, action_surface_example2};
use ipvar::catalog;

fn main() -> ipvar::Result<()> {
    println!("alpha   beta    action        closed form");
    for alpha in [-0.5, 0.0, 0.5] {
        for beta in [-0.5, 0.0, 0.5] {
            let c = catalog::example2_family(alpha, beta)?;
            let s = action(&c.structure, c.matrix(), 0.5)?.total;
            println!(
                "{alpha:>5.2}  {beta:>5.2}   {s:.10}  {:.10}",
                action_surface_example2(alpha, beta)
            );
        }
    }
    Ok(())
}

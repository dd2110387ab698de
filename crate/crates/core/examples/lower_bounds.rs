//! Compares the critical action of random class `P^f` operators with the
//! local-trace and global lower bounds.

use ipvar::action::lower_bounds;
use ipvar::fermionic::{random_operator, Mode};
use ipvar::space::SpaceTimeStructure;

fn main() -> ipvar::Result<()> {
    let st = SpaceTimeStructure::new(3, 2)?;
    for seed in 0..5 {
        let p = random_operator(&st, 3, Mode::ClassPf, seed)?;
        let b = lower_bounds(&st, p.matrix())?;
        let local: f64 = b.per_point.iter().map(|l| l.llb1).sum();
        println!(
            "seed {seed}: S = {:.6}, sum of local bounds = {:.3e}, global bound = {:.3e}",
            b.critical_action, local, b.global
        );
    }
    Ok(())
}

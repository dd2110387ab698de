//! Solves the constrained problem over unnormalized rank-one operators and
//! shows that the action vanishes at the estimated multiplier.

use ipvar::fermionic::Mode;
use ipvar::optimize::{minimize_constrained, MinimizeConfig, Objective};

fn main() -> ipvar::Result<()> {
    for kappa in [0.25, 1.0, 4.0] {
        let r = minimize_constrained(&MinimizeConfig {
            m: 2,
            n: 1,
            f: 1,
            mode: Mode::RankFUnnormalized,
            objective: Objective::Constrained { kappa },
            restarts: 8,
            seed: 1,
            ..MinimizeConfig::default()
        })?;
        println!(
            "kappa {kappa}: sum |A^2| = {:.8}, mu-hat = {:.6}, S at mu-hat = {:.2e}, residual {:.1e}",
            r.objective_value,
            r.mu_hat.unwrap_or(f64::NAN),
            r.best_action,
            r.constraint_residual.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}

//! Minimizes the critical action for one particle on two points and prints
//! the best value per restart.

use ipvar::optimize::{minimize_auxiliary, MinimizeConfig};

fn main() -> ipvar::Result<()> {
    let cfg = MinimizeConfig {
        m: 2,
        n: 1,
        f: 1,
        restarts: 8,
        seed: 42,
        ..MinimizeConfig::default()
    };
    let r = minimize_auxiliary(&cfg)?;
    for t in &r.restarts {
        println!(
            "restart {:>2} ({:>6}): {:.10} after {} iterations",
            t.index, t.start, t.final_value, t.iterations
        );
    }
    println!(
        "best action {:.12} (the spread configuration gives 0.125)",
        r.best_action
    );
    println!("local traces {:?}", r.report.local_traces);
    Ok(())
}

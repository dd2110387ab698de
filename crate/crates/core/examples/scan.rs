//! Tabulates estimated minimal actions for one particle on one to four
//! points, over class `P^1` and over projectors.

use ipvar::optimize::{scan_infimum, MinimizeConfig};

fn main() -> ipvar::Result<()> {
    let base = MinimizeConfig {
        restarts: 8,
        seed: 3,
        ..MinimizeConfig::default()
    };
    let t = scan_infimum(1, 1, &[1, 2, 3, 4], 0.5, &base)?;
    println!("m   class P^1       projectors");
    for (i, j) in t.infimum.iter().zip(&t.projector) {
        println!("{}   {:.10}   {:.10}", i.m, i.total, j.total);
    }
    for v in t.lemma_violations.iter().chain(&t.bound_violations) {
        println!("warning: {v}");
    }
    Ok(())
}

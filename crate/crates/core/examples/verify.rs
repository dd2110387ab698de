//! Runs the built-in reference suite and lists any failing check.

use ipvar::verify::run_verification;

fn main() {
    let report = run_verification();
    for c in report.failures() {
        println!(
            "FAIL {}: found {}, expected {}",
            c.name, c.found, c.expected
        );
    }
    println!(
        "{} checks, {} failed",
        report.checks.len(),
        report.failures().count()
    );
}

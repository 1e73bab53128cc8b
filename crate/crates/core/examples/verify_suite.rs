//! Runs the numerical and exact checks and prints a summary per criterion.

use torus_structures::verify::{run_suite, Suite, VerifyConfig};

fn main() {
    let suite = std::env::args().nth(1).and_then(|s| Suite::parse(&s)).unwrap_or(Suite::All);
    let reports = run_suite(suite, &VerifyConfig::default());
    for r in &reports {
        println!("{}", r.summary_line());
    }
    if reports.iter().any(|r| !r.passed()) {
        std::process::exit(1);
    }
}

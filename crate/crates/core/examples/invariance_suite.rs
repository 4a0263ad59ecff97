//! Runs the default invariance suite and prints one line per case.
use std::time::Instant;

use spt_index::fixtures::{run_invariance_suite, SuiteConfig};

fn main() -> spt_index::Result<()> {
    let start = Instant::now();
    let report = run_invariance_suite(&SuiteConfig::default())?;
    for c in &report.cases {
        println!(
            "{:<24} {:<6} depth={} seed={} residual={:.1e} {}",
            c.fixture,
            c.route,
            c.depth,
            c.seed,
            c.residual,
            if c.passed { "ok".to_string() } else { format!("FAIL {}", c.error.clone().unwrap_or_default()) }
        );
    }
    for s in &report.stacks {
        println!("stack {} x {}: {}", s.first, s.second, s.product_law);
    }
    println!("passed={} in {:.1}s", report.passed(), start.elapsed().as_secs_f64());
    Ok(())
}

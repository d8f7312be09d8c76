//! Runs the fast verification suites and prints one line per check.
use cyclering::verify::run_suite;

fn main() -> cyclering::Result<()> {
    for name in ["truncation-hom", "orbit-sum", "siegel-e8", "product-formula"] {
        let r = run_suite(name)?;
        for c in &r.checks {
            println!("[{}] {}: {} ({})", if c.passed { "pass" } else { "FAIL" }, r.suite, c.name, c.detail);
        }
    }
    Ok(())
}

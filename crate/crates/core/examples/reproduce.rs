//! Regenerates the threshold tables and prints each check.

fn main() -> primetuples::Result<()> {
    let start = std::time::Instant::now();
    let report = primetuples::reproduce::reproduce_tables()?;
    for c in &report.checks {
        println!("{} {}: expected {}, got {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.expected, c.actual);
    }
    println!("{} in {:.2?}", if report.all_pass { "all checks pass" } else { "some checks fail" }, start.elapsed());
    Ok(())
}

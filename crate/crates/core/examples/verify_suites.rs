//! Running the randomized verification suites.

use toric_roots::cli::verify::{run, Options, Suite};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    for name in ["prop36", "famous-remark", "subset-lemma", "normalization", "sl-family", "algebra"] {
        let suite: Suite = name.parse().unwrap();
        let report = run(suite, &Options::new(seed, 40));
        println!("{:<14} seed {seed}: {} checks, {} failures", suite.name(), report.checks, report.failures.len());
    }
    let mut corrupt = Options::new(seed, 10);
    corrupt.corrupt_derivation = true;
    let report = run(Suite::Algebra, &corrupt);
    println!("corrupted derivation caught: {}", !report.passed());
    if let Some(f) = report.failures.first() {
        println!("  {}: {}", f.instance, f.message);
    }
}

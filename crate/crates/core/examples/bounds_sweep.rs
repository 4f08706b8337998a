//! Runs one verification suite in-process and prints a verdict tally per row kind.
//!
//! ```text
//! cargo run --release --example bounds_sweep -- [suite] [fields] [points]
//! ```

use std::collections::BTreeMap;

use ballschwarz::harness::{run_suite, FieldSelection, RunConfig, Suite};
use ballschwarz::bounds::Verdict;

fn main() -> ballschwarz::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let suite: Suite = args.first().map(String::as_str).unwrap_or("thm3").parse()?;
    let fields = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(10);
    let points = args.get(2).and_then(|a| a.parse().ok()).unwrap_or(10);
    let cfg = RunConfig {
        suite,
        fields: FieldSelection::Catalog(fields),
        points: Some(points),
        ..RunConfig::default()
    };
    let rows = run_suite(&cfg)?;

    let mut by_id: BTreeMap<(String, usize), [usize; 4]> = BTreeMap::new();
    let mut tightest: BTreeMap<String, f64> = BTreeMap::new();
    for r in &rows {
        let slot = match r.verdict {
            Verdict::Pass => 0,
            Verdict::Inconclusive => 1,
            Verdict::Fail => 2,
            Verdict::NotApplicable => 3,
        };
        by_id.entry((r.id.clone(), r.n)).or_default()[slot] += 1;
        if r.verdict == Verdict::Pass && r.rhs > 0.0 {
            let ratio = r.lhs / r.rhs;
            let t = tightest.entry(r.id.clone()).or_insert(0.0);
            *t = t.max(ratio);
        }
    }
    println!("{:<16} {:>2} {:>6} {:>6} {:>5} {:>5}", "id", "n", "pass", "incon", "fail", "n/a");
    for ((id, n), c) in &by_id {
        println!("{id:<16} {n:>2} {:>6} {:>6} {:>5} {:>5}", c[0], c[1], c[2], c[3]);
    }
    println!("\nlargest lhs/rhs among passing rows");
    for (id, t) in tightest {
        println!("  {id:<16} {t:.4}");
    }
    Ok(())
}

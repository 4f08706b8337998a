//! Writes the curves U, phi, sup_C and the n = 4 closed form as CSV files,
//! one per curve, ready for any plotting tool.
//!
//! ```text
//! cargo run --release --example plot_data -- [out_dir]
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use ballschwarz::harness::{emit_plot_data, write_records, Format, RunConfig};

fn main() -> ballschwarz::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "plot-data".into()));
    std::fs::create_dir_all(&dir)?;
    let cfg = RunConfig { dims: vec![3, 4, 5, 6], ..RunConfig::default() };
    let mut curves: BTreeMap<String, Vec<_>> = BTreeMap::new();
    for row in emit_plot_data(&cfg)? {
        curves.entry(row.curve.clone()).or_default().push(row);
    }
    for (name, rows) in curves {
        let path = dir.join(format!("{name}.csv"));
        write_records(&rows, Format::Csv, std::fs::File::create(&path)?)?;
        println!("{} ({} rows)", path.display(), rows.len());
    }
    Ok(())
}

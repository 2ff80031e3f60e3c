//! A full report for a coproduct read from a spec file.

use std::collections::BTreeMap;
use std::path::PathBuf;

use coprod::cli::load_spec;
use coprod::report::{run, AnalysisConfig};

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs/k_z2.json"));
    let entry = load_spec(&path, None, &BTreeMap::new()).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let config = AnalysisConfig { depth: 4, ..AnalysisConfig::default() };
    let report = run(&entry, &config).unwrap();
    print!("{}", report.to_text());
    println!("all expectations met: {}", report.all_met());
}

//! Regenerates the frozen catalog.
//!
//! Usage: `cargo run -p conesphere --bin gen-catalog [out.json]`
//! Writes the catalog JSON to the given path (default
//! `crates/conesphere/data/catalog.json` relative to the workspace root) and
//! prints the generation report to stderr.

use conesphere::catalog::gen::generate;
use conesphere::catalog::serialize_catalog;

fn main() {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "crates/conesphere/data/catalog.json".to_string());
    let (catalog, report) = generate();
    let text = serialize_catalog(&catalog);
    std::fs::write(&out, &text).expect("write catalog");
    eprintln!(
        "wrote {} entries, {} pairs to {out}",
        catalog.entries.len(),
        catalog.pairs.len()
    );
    if !report.unrealized.is_empty() {
        eprintln!("unrealized pairs: {}", report.unrealized.join(", "));
    }
    for m in &report.messages {
        eprintln!("note: {m}");
    }
}

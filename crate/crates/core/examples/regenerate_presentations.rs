//! Rewrites the shipped presentation files from the brute-force generator.
//!
//! cargo run --example regenerate_presentations [output-dir]

use std::path::PathBuf;

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/presentations"));
    let names = dko::presentation::generate::write_all(&dir).expect("write presentations");
    println!("wrote {} presentations to {}", names.len(), dir.display());
}

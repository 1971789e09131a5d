//! Prints the Atiyah-Hirzebruch pages of a built-in space.
//!
//! `cargo run --example ahss_pages -- RP4 topological`

use dko::ahss::{compute, default_rows, render, Variant};
use dko::presentation::builtin;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "RP4".into());
    let variant: Variant = args.next().unwrap_or_else(|| "topological".into()).parse()?;
    let p = builtin(&name)?;
    let ss = compute(&p, variant, default_rows(variant, p.top_degree()))?;
    print!("{}", render::sequence_text(&ss));
    Ok(())
}

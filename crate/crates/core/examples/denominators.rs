//! Universal odd denominators of the Pontrjagin character, and the admissible
//! pairs a small synthetic space contributes at p = 3.

use dko::integrality::{admissible_pairs, ph_denominator, PairReading};
use dko::presentation::CohomologyPresentation;

const SYNTHETIC: &str = include_str!("../tests/fixtures/synthetic_odd.json");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for k in 1..=12 {
        let r = ph_denominator(k)?;
        println!("k = {k:>2}  degree {:>2}  odd part {:>6} = {}", 4 * k, r.odd_part, r.odd_factored);
    }
    let p = CohomologyPresentation::load_json(SYNTHETIC)?;
    for reading in [PairReading::Proof, PairReading::Statement] {
        let r = admissible_pairs(12, 3, &p, reading)?;
        println!("{reading:?}: pairs {:?}, s = {}", r.pairs.iter().map(|c| (c.r, c.k)).collect::<Vec<_>>(), r.s);
    }
    Ok(())
}

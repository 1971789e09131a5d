//! KO^0 of spheres from the spectral sequence, and the differential refinement.

use dko::ahss::{ko_hat_of_sphere, ko_of_sphere};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in 1..=16 {
        let top = ko_of_sphere(n)?;
        let diff = ko_hat_of_sphere(n)?;
        println!("S^{n:<3} KO: {:<4}  differential: {}", top.to_string(), diff.render());
    }
    Ok(())
}

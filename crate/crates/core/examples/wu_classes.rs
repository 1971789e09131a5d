//! Wu classes and total Stiefel-Whitney classes of projective spaces.

use dko::presentation::builtin;
use dko::steenrod::{sw_from_wu, wu_classes};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["RP2", "RP3", "RP4", "RP5", "RP6", "CP2", "CP3"] {
        let p = builtin(name)?;
        let dim = p.top_degree();
        let v = wu_classes(&p, dim)?;
        let w = sw_from_wu(&v, &p)?;
        let wu: Vec<String> = v.iter().map(|c| c.render(&p)).filter(|s| s != "0").collect();
        println!("{name:<4} v = {:<16} w = {}", wu.join(" + "), w.render(&p));
    }
    Ok(())
}

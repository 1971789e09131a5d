//! Arithmetic in KO^*(pt) and K^*(pt): products, complexification and
//! realification, and the coefficient tables.

use dko::ko::{complexify, flat_coefficient_group, ko_coefficient_group, ko_mul, realify, KoElement};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = KoElement::parse("alpha")?;
    println!("alpha^2          = {}", ko_mul(&a, &a));
    println!("eta^3            = {}", ko_mul(&KoElement::eta(), &ko_mul(&KoElement::eta(), &KoElement::eta())));
    for x in ["1", "eta", "alpha", "beta", "alpha*beta^-1"] {
        let e = KoElement::parse(x)?;
        let c = complexify(&e);
        println!("c({x:<14}) = {c:<12} r(c({x})) = {}", realify(&c));
    }
    println!();
    println!("{:>4}  {:<14} flat KO^{{-i}}", "i", "KO^i");
    for i in -8..=8 {
        println!("{i:>4}  {:<14} {}", ko_coefficient_group(i).to_string(), flat_coefficient_group(i));
    }
    Ok(())
}

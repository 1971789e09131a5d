//! Adams operations: on coefficients, on a bundle given by roots, and the
//! two lambda recursions compared against the roots.

use dko::adams::{adams_coefficient, adams_newton_recursion, adams_root_model, divergence_table, FormalBundle, RecursionVariant};
use dko::ko::KoElement;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for x in ["eta", "alpha", "beta", "beta^-1", "alpha*beta"] {
        let e = KoElement::parse(x)?;
        println!("psi^3({x}) = {}", adams_coefficient(3, &e)?);
    }
    let e = FormalBundle::parse_roots("x, y, x+y")?;
    for r in 1..=3 {
        let roots = adams_root_model(r, &e)?;
        let newton = adams_newton_recursion(r, &e, RecursionVariant::Newton)?;
        println!("psi^{r}: roots {}  newton agrees: {}", roots.render_roots().unwrap_or_default(), Some(newton) == roots.class());
    }
    println!();
    for row in divergence_table(4, 3).iter().filter(|r| !r.paper_agrees) {
        println!("printed recursion off at r = {}, rank {}: {}", row.r, row.rank, row.paper_error);
    }
    Ok(())
}

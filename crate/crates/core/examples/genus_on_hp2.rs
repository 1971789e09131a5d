//! A-hat of the quaternionic projective plane and the degree-8 obstruction.
//!
//! With p = 1 + 2x + 7x^2 and <x^2, [HP^2]> = 1, A-hat vanishes while
//! (p2 - p1^2/4)/48 is x^2/8.

use dko::integrality::obstruction_examples;

fn main() {
    let r = obstruction_examples();
    println!("Ph_4                  = {}", r.ph4);
    println!("Ph_8 at p1 = 0        = {}", r.ph8_without_p1);
    println!("Ph_12/2 at p1 = p2 = 0 = {}", r.half_ph12_without_p1_p2);
    println!("A-hat[HP^2]           = {}", r.hp2_a_hat);
    println!("(p2 - p1^2/4)/48      = {} x^2", r.hp2_obstruction);
}

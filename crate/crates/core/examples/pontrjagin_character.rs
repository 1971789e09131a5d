//! Pontrjagin character and A-hat genus in Pontrjagin classes, with the
//! denominators that appear degree by degree.
//!
//! `cargo run --example pontrjagin_character -- 24`

use dko::genera::{a_hat, pontrjagin_character};

fn main() {
    let top: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(16);
    let ph = pontrjagin_character(top, 0);
    let ahat = a_hat(top);
    for d in (4..=top).step_by(4) {
        let c = ph.component(d);
        println!("Ph_{d:<3} [den {:>8}]  {c}", c.denominator_lcm());
    }
    println!();
    for d in (4..=top).step_by(4) {
        println!("A-hat_{d:<3} {}", ahat.component(d));
    }
}

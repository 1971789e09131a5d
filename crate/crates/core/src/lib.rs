//! Exact computations around real and differential KO-theory.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`]: rationals, graded polynomials with truncation, integer lattices
//! * [`genera`]: Newton identities, multiplicative sequences, the Pontrjagin
//!   character and the A-hat genus
//! * [`ko`]: the coefficient rings of KO and K, complexification, realification
//! * [`steenrod`]: Sq^1 on Stiefel-Whitney classes, Wu classes, Cartan formula
//! * [`presentation`]: finite cohomology presentations of spaces
//! * [`ahss`]: Atiyah-Hirzebruch pages for KO and its differential refinement
//! * [`integrality`]: denominators of the Pontrjagin character
//! * [`adams`]: Adams operations on coefficients and on formal bundles
//! * [`cli`]: the command dispatcher behind the `dko` binary

pub mod exact;
pub mod genera;
pub mod group;
pub mod ko;
pub mod presentation;
pub mod steenrod;
pub mod ahss;
pub mod integrality;
pub mod adams;
pub mod cli;

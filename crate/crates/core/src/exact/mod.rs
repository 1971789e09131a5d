//! Exact arithmetic: rationals, graded polynomials, one-variable series and
//! integer lattices.

pub mod lattice;
pub mod poly;
pub mod rational;
pub mod series;

pub use poly::{invert_unit, poly_add, poly_mul, DegreeRule, Family, Field, GeneratorScheme, GradedPolynomial, Monomial, PolyError, Var};
pub use rational::{q, Rational};
pub use series::Series;

//! Exact coefficient field, combinatorial helpers and one-variable Laurent
//! polynomials with residue extraction.

mod laurent;
mod rational;

pub use laurent::LaurentPoly;
pub use rational::{double_factorial, factorial, format_rational, parse_rational, rat, Rational};

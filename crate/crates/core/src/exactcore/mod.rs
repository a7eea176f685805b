//! Exact arithmetic: rationals, dense polynomials, matrices, finite fields,
//! resultants and factorization over prime fields.

pub mod factor;
pub mod gf;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod resultant;
pub mod ring;

pub use gf::{gf_trace, Gf, GfElem, GfField};
pub use matrix::{mat_pow, MatQ, Matrix};
pub use poly::{qpoly, BiPoly, QPoly, UniPoly};
pub use rational::{int, parse_rational, rat, rat_to_string, rat_val, Rational};
pub use resultant::resultant;
pub use ring::{Field, QAlgebra, Ring};

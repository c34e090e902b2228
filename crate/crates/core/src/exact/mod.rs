//! Exact arithmetic: rationals, homogeneous polynomials, matrices and
//! integer lattices.

pub mod intlat;
pub mod matrix;
pub mod poly;
pub mod rational;

pub use matrix::{multiplication_matrix, rank_kernel, Matrix};
pub use poly::{monomial_basis, HomogPoly, PolyMatrix};
pub use rational::{fmt_rational, parse_rational, q, qi, Rational};

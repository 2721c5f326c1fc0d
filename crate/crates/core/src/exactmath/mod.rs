//! Exact rationals, dense matrices and sparse polynomials.

pub mod matrix;
pub mod poly;
pub mod rat;

pub use matrix::{kernel_basis, nilpotent_exp, rank_exact, rref, solve, span_rank, LinOp, RatMatrix};
pub use poly::{monomials_of_degree, poly_mul, poly_partial, same_span, Monomial, PolyTerm, SparsePoly};
pub use rat::{format_rat, int, parse_rat, rat, ParseRatError, Rat, RatVec};

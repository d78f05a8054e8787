//! Exact multivariate polynomials and rational functions over Q.

pub mod error;
pub mod gcd;
pub mod linalg;
pub mod loglin;
pub mod parse;
pub mod point;
pub mod poly;
pub mod ratfunc;
pub mod real;

pub use error::{SymError, SymResult};
pub use gcd::{gcd, lcm};
pub use loglin::LogLinearExpr;
pub use parse::{parse_loglinear, parse_polynomial, parse_q, parse_rational};
pub use point::{shares_noninvertible_factor, Differentiate, Evaluate, Point};
pub use poly::{q, qr, vars, Monomial, Polynomial, Vars, Q};
pub use ratfunc::RationalFunction;
pub use real::{bits_for_digits, CompiledF64, CompiledRational, Real};

/// `order(p)`: smallest total degree among the terms of `p`.
pub fn order_at_origin(p: &Polynomial) -> SymResult<u32> {
    p.order_at_origin()
}

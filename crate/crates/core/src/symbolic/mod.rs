//! Exact arithmetic over the rationals: linear forms, polynomials in the
//! coordinates `x1..xn`, and quotients by products of linear forms.

mod interp;
mod linear;
mod parse;
mod poly;
mod rational;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub use interp::{
    elementary_symmetric, elementary_symmetric_omitting, lagrange_interpolate, vandermonde, vandermonde_inverse,
    vandermonde_inverse_power_form, Interpolant,
};
pub use linear::{in_span, rank, rho, LinearForm, Projection};
pub use parse::{parse_polynomial, parse_rational};
pub use poly::{Monomial, Polynomial};
pub use rational::RationalExpr;

pub type Rational = BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical `p/q` rendering, with `p` alone for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Default variable names `x1..xn`.
pub fn coordinate_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("division by the zero linear form")]
    ZeroForm,
    #[error("projection along a weight that vanishes on xi")]
    DegenerateProjection,
    #[error("repeated interpolation nodes {0} and {1}")]
    RepeatedNodes(usize, usize),
    #[error("index {r} out of range 0..={n}")]
    OutOfRange { r: usize, n: usize },
    #[error("expression does not reduce to a polynomial: {0}")]
    NotPolynomial(String),
    #[error("polynomial does not lie in the requested subring")]
    NotRepresentable,
    #[error("parse error at {pos}: {message}")]
    Parse { pos: usize, message: String },
}

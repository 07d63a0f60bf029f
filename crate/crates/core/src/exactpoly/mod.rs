//! Sparse multivariate polynomials over the rationals.

mod monomial;
mod polynomial;
pub mod text;
mod upoly;

pub use monomial::Monomial;
pub use polynomial::{ArithOp, Polynomial};
pub use text::{parse_polynomial, parse_rational};
pub use upoly::UPoly;

/// Exact rational numbers; always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `poly_arith` with explicit dimension checking.
pub fn poly_arith(p: &Polynomial, q: &Polynomial, op: ArithOp) -> crate::Result<Polynomial> {
    p.arith(q, op)
}

//! Exact arithmetic: sparse graded polynomials over ℤ or ℚ, coefficient rings
//! with quotient presentations, integer matrices and lattice normal forms.

pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod ring;

pub use lattice::{lattice_normal_form, LatticeReduction};
pub use matrix::{smith_normal_form, IntegerMatrix, SmithForm};
pub use poly::{
    parse_polynomial, parse_rational, poly_arith, ArithOp, Domain, GradedPolynomial, Integer, Monomial,
    PolyRing, PolynomialJson, Rational, TermJson, Variable,
};
pub use ring::{monomials_of_degree, CoefficientRing, PolyHom, Reducer};

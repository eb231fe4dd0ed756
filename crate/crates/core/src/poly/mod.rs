//! Exact multivariate polynomials over ℚ and Gröbner bases.

mod division;
mod groebner;
mod monomial;
mod multipoly;
mod order;
mod text;

pub use division::{reduce, reduce_in_order, s_polynomial, Division};
pub use groebner::{
    buchberger, buchberger_with, eliminate, eliminate_with, GroebnerBasis, GroebnerConfig,
    GroebnerStats, DEFAULT_PAIR_BUDGET,
};
pub use monomial::Monomial;
pub use multipoly::{rat_to_f64, MultiPoly, Ring};
pub use order::MonomialOrder;

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("no generators given")]
    EmptyGenerators,
    #[error("S-pair budget of {budget} exhausted (basis size {basis_size})")]
    PairBudget { budget: usize, basis_size: usize },
}

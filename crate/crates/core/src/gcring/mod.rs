//! Exact normal forms in finitely presented graded-commutative algebras.
//!
//! A presentation lists generators (with cohomological degrees) in
//! increasing termination order together with quadratic rewrite rules
//! `x*y -> rhs`. Odd-degree generators square to zero implicitly; even-degree
//! generators may carry a truncation `x^t = 0`. Monomials are kept sorted,
//! with the Koszul sign of the sorting permutation folded into the
//! coefficient, so each product has a single canonical representative.

mod confluence;
mod element;
mod poincare;
mod presentation;
mod sample;
mod serial;

use thiserror::Error;

pub use confluence::{ConfluenceReport, CriticalPairFailure};
pub use element::{ElementDegree, GenIndex, GradedElement, Monomial};
pub use presentation::{Generator, Parity, RewriteRule, RingPresentation, RuleSpec};
pub use serial::{PresentationDoc, RuleDoc, TermDoc, FORMAT_VERSION};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("element belongs to a different presentation")]
    PresentationMismatch,
    #[error("duplicate generator id `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` must have positive degree")]
    ZeroDegree(String),
    #[error("invalid generator `{0}`: {1}")]
    InvalidGenerator(String, String),
    #[error("invalid rule {0}: {1}")]
    InvalidRule(String, String),
    #[error("presentation is not confluent ({0} failing critical pairs)")]
    NonConfluent(usize),
    #[error("cannot parse element: {0}")]
    Parse(String),
    #[error("malformed presentation document: {0}")]
    Format(String),
}

#[cfg(test)]
mod tests;

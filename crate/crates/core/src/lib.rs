//! Certified cohomological lower bounds for sequential parametrized
//! distributional topological complexity, and executable distributed
//! navigation algorithms on spheres, projective spaces and the Hopf bundle.
//!
//! * [`gcring`]: exact normal forms in presented graded-commutative algebras.
//! * [`presentations`]: cohomology rings of configuration spaces, their
//!   Fadell–Neuwirth fiber products, and sphere-bundle towers.
//! * [`bounds`]: zero-divisor cup-length certificates.
//! * [`measures`]: finitely supported probability measures and the
//!   Lévy–Prokhorov metric.
//! * [`navplan`]: measure-valued path planners and their verifiers.

pub mod bounds;
pub mod gcring;
pub mod measures;
pub mod navplan;
pub mod presentations;
pub mod rational;

pub use gcring::{GradedElement, Monomial, RingError, RingPresentation};
pub use rational::Rational;

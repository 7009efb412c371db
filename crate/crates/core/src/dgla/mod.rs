//! Differential graded Lie algebras and their deformation functors.
//!
//! The bracket and differential are given on a basis through
//! [`LieStructure`]; the same code serves finite DGLAs ([`Dgla`]) and the
//! infinite-dimensional Lie algebras of vector fields used by `geometry`.

mod lifting;
mod nilpotent;
mod structure;

pub use lifting::{lift_order_by_order, LiftError, LiftOutcome};
pub use nilpotent::{bernoulli, Deformations, NilpotentElement, NilpotentError};
pub use structure::{
    check_axioms, examples, AxiomReport, AxiomViolation, Dgla, DglaMorphism, LieStructure, MorphismError,
};

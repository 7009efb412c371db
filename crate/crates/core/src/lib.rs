//! Exact computations with differential graded Lie algebras, their
//! Maurer-Cartan and deformation functors, and the simplicial/Thom-Whitney
//! constructions that compute deformations of projective varieties and
//! their subschemes.
//!
//! The algebra is generic over a [`Scalar`] field; the aliases below fix it
//! to exact rationals, which is what every reported number uses.

pub mod apl;
pub mod bisimplicial;
pub mod coefficients;
pub mod dgla;
pub mod geometry;
pub mod graded;
pub mod hilb;
pub mod linalg;
pub mod scalar;
pub mod simplicial;
pub mod tw;

pub use coefficients::ArtinianAlgebra;
pub use scalar::{q, qi, ExactScalar, Scalar, Q};

/// Rational DGLA.
pub type QDgla = dgla::Dgla<Q>;
/// Rational cochain complex.
pub type QComplex = graded::CochainComplex<Q>;
/// Rational sparse matrix.
pub type QMatrix = linalg::SparseMatrix<Q>;
/// Rational sparse vector indexed by basis position.
pub type QVec = linalg::SparseVec<usize, Q>;

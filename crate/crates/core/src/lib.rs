//! Exact computation of derivation-type spaces of ω-Lie algebras over the
//! Gaussian rationals.

pub mod algebra;
pub mod catalog;
pub mod checks;
pub mod cli;
pub mod embedding;
pub mod error;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod spaces;
pub mod spec_file;

pub use algebra::{Algebra, AlgebraSpec, ValidationReport};
pub use error::{Error, Result};
pub use linalg::{LinMap, Matrix, Subspace};
pub use scalar::Scalar;
pub use spaces::{DerSpace, SpaceKind};

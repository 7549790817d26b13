//! Exact computations with trivectors in a 9-dimensional vector space.

pub mod acceptance;
pub mod e8;
pub mod error;
pub mod fast;
pub mod field;
pub mod flags;
pub mod heisenberg;
pub mod json;
pub mod loci;
pub mod matrix;
pub mod poly;
pub mod stability;
pub mod trivector;

pub use error::{Error, Result};
pub use field::{AnyField, Field, FieldSpec, FiniteField, Gf, Rationals};
pub use matrix::DenseMatrix;
pub use poly::{MultiPoly, UniPoly};

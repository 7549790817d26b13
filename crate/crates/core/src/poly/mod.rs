//! Univariate and sparse multivariate polynomials.

mod multi;
mod resultant;
mod search;
mod uni;

pub use multi::MultiPoly;
pub use resultant::resultant;
pub use search::{singular_point_search, PointSolution};
pub use uni::UniPoly;

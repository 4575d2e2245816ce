//! Exact rational convex geometry in the positive orthant: upward-closed
//! regions with bounded complement, Newton regions of monomial ideals,
//! Minkowski sums and bounded hulls.

mod hull;
pub mod linalg;
mod polytope;
mod region;

pub use hull::{hull_region, kt_check, limit_newton_region, minkowski_sum, multiplicity_exact, upward_hull};
pub use polytope::Polytope;
pub use region::{ConvexRegion, CovolMethod, CovolResult, Halfspace};
pub(crate) use region::for_each_subset;

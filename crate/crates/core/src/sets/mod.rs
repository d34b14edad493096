//! Point clouds, convex polytopes and their M- and L_p additions.

mod coefficients;
mod hull;
pub mod io;
mod ops;
mod point_set;

pub use coefficients::{inverse_conjugate, lambda_grid, CoefficientKind, CoefficientSet};
pub use hull::{convex_hull_2d, shoelace, ConvexPolytope, Halfspace};
pub use ops::{
    circle_directions, hausdorff, lp_pointwise_sum, lp_support_sum, m_add, support_function, volume_hull,
    SupportTable,
};
pub use point_set::{DiscreteSet, DEDUP_TOL};

pub(crate) use coefficients::check_p;

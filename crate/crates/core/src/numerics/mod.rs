//! Shared numerical substrate: axis-aligned boxes and uniform grids, trapezoidal
//! quadrature, the gamma function and unit-ball volumes, seeded Monte Carlo, and
//! nested refinement sweeps.

mod gamma;
mod grid;
mod montecarlo;
mod quadrature;
mod refine;

pub use gamma::{gamma, kappa};
pub use grid::{Bounds, Grid};
pub use montecarlo::{mc_volume, MonteCarloEstimate, RandomSource};
pub use quadrature::{integrate_grid, trapezoid_weight};
pub use refine::{is_nondecreasing, refinement_sweep, Nesting};
pub(crate) use grid::EDGE_SLACK;

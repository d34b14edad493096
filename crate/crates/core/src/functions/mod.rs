//! Nonnegative functions on grids: power means, s-concavity, the scaling
//! `lambda x_{p,s} f`, sup-convolutions and lifted bodies.

mod concavity;
mod grid_fn;
pub mod io;
mod lift;
mod means;
mod param;
mod scale;
mod supconv;

pub use concavity::{is_s_concave, ConcavityCheck};
pub use grid_fn::GridFunction;
pub use lift::{lift_membership, lift_volume, LiftedBody};
pub use means::{alpha_mean, MeanSpec};
pub use param::SParam;
pub use scale::scale_fn;
pub use supconv::{
    fit_lp_out_grid, fit_out_grid, lp_sum_bounds, m_sum_bounds, sup_conv_m, sup_conv_m_brute, sup_conv_p,
};

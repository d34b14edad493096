//! Numerical calculus for L_p and M-addition of sets and s-concave functions, and
//! verifiers for the Brunn-Minkowski family of inequalities built on it.
//!
//! * [`numerics`]: grids, trapezoidal quadrature, unit-ball volumes, seeded Monte Carlo.
//! * [`sets`]: point clouds, convex polytopes, coefficient sets, M-addition and L_p sums.
//! * [`functions`]: grid functions, power means, s-concavity, the scaling
//!   `lambda x_{p,s}`, sup-convolutions and lifted bodies.
//! * [`harness`]: verification reports and one verifier per inequality or lemma.

pub mod error;
pub mod functions;
pub mod harness;
pub mod numerics;
pub mod sets;

pub use error::{Error, Result};

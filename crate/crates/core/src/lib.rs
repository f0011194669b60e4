//! Numerical laboratory for the nonlinear Cauchy-Riemann equation
//! `df/dz̄ = |f|^alpha` on the unit disk and the quasilinear differential
//! inequalities that force its solutions to be large.
//!
//! The crate provides:
//!
//! * closed-form constants (`params`): sup lower bounds, comparison bounds,
//!   ball-volume ratios, pseudohyperbolic disk geometry;
//! * discrete fields on polar and Cartesian grids with finite-difference
//!   Wirtinger derivatives, Laplacians and quadrature (`grid`);
//! * exact piecewise-power solution families of `u'' = B|u|^eps` and
//!   `u' = B|u|^alpha` with closed-form derivatives (`solutions`);
//! * a Picard solver for `df/dz̄ = |f|^alpha` built on a discrete
//!   Cauchy/Pompeiu transform, and J-holomorphic disk assembly (`dbar`);
//! * quantitative holomorphic inverses: Schwarz-Pick bounds, winding-number
//!   root counting, certified Newton inversion (`inverse`);
//! * a verification harness that runs the bound and residual checks and
//!   emits structured reports (`verify`).

// Validation guards use the negated form `!(x > 0.0)` on purpose: it
// rejects NaN, which `x <= 0.0` would silently accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dbar;
pub mod error;
pub mod grid;
pub mod inverse;
pub mod params;
pub mod report;
pub mod solutions;
pub mod verify;

pub use error::{Error, Result};

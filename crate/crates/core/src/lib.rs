//! Lipschitz-aware one-dimensional regression with continuous piecewise-linear
//! (CPWL) models.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised in three layers:
//!
//! * [`cpwl`] and [`relu`]: exact analysis of CPWL functions (evaluation,
//!   Lipschitz constant, second-order total variation, canonical interpolation)
//!   and the equivalence with two-layer ReLU networks with a skip connection.
//! * [`operator`], [`prox`], [`banded`] and [`admm`]: the finite-dimensional
//!   stage. Both regression problems reduce to a problem over the vector `z` of
//!   model values at the sample locations, which is solved with ADMM.
//! * [`sparsify`]: closed-form optimal costs, the envelope of the solution set,
//!   and the sparsest CPWL interpolant of a vector `z`, together with an
//!   exhaustive oracle for the minimal number of knots.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod admm;
pub mod banded;
pub mod cpwl;
mod error;
pub mod operator;
pub mod prox;
pub mod relu;
pub mod sparsify;
pub mod tol;

pub use admm::{
    admm_hybrid, admm_lipschitz, empirical_loss, hybrid_objective, lipschitz_objective,
    solve_z_update, AdmmConfig, AdmmReport, SplitTerm,
};
pub use cpwl::{canonical_interpolant, CpwlFunction, DataSet, LipTvBound};
pub use error::{Error, Result};
pub use operator::DifferenceOperator;
pub use prox::{project_l1_ball, project_linf_ball, prox_l1_norm, prox_linf_norm};
pub use relu::{cpwl_to_relu_network, relu_network_to_cpwl, ReluNetParams};
pub use sparsify::{
    brute_force_min_knots, envelope_band, lmin, sparsest_interpolant, tvmin, EnvelopeBand,
    InterpolationInstance,
};

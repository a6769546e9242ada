//! conekit: a conic-optimization toolkit for block-structured semidefinite
//! programs.
//!
//! Three solver back-ends share one problem representation:
//!
//! - [`ipm`]: primal-dual interior-point method with Nesterov–Todd scaling,
//!   wide-neighborhood path following, and a dense Schur-complement solve;
//! - [`admm`]: first-order alternating-direction solver with closed-form
//!   y/S/X updates and residual-balancing penalty adaptation;
//! - [`lowrank`]: interior-point back-end that solves the Schur complement
//!   equation iteratively with a low-rank-plus-well-conditioned
//!   preconditioner, for problems whose solution rank is known to be small.
//!
//! The [`relax`] module reduces nonconvex source problems (QCQP, matrix
//! completion, rank minimization, graphical lasso, state estimation, small
//! polynomial hierarchies) to the standard block-SDP form the solvers accept.

// Index loops mirror the matrix formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod admm;
pub mod cones;
pub mod error;
pub mod ipm;
pub mod linalg;
pub mod lowrank;
pub mod relax;
pub mod report;

pub use cones::{
    assemble_operator, inner, kron_apply, residuals, smat, svec, BlockStructure, BlockSymMatrix,
    ConicProblem, ConstraintOperator, PrimalDualPoint, Residuals,
};
pub use error::{Error, Result};
pub use report::{SolveReport, SolveStatus};

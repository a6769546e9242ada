//! Convexification front-ends: reductions from nonconvex source problems to
//! the standard block-SDP form, plus solution-recovery and certificate
//! utilities.

pub mod completion;
pub mod glasso;
pub mod krivine;
pub mod poly;
pub mod qcqp;
pub mod rankmin;
pub mod sos;
pub mod stateest;

pub use completion::{completion_sdp, penalized_sdp, Extension, PartialMatrix};
pub use glasso::{graphical_lasso_solve, stationarity_violation};
pub use krivine::krivine_lp;
pub use poly::Polynomial;
pub use qcqp::{lasserre1_sdp, qcqp_to_sdp, recover_rank1, Qcqp, Rank1Recovery};
pub use rankmin::{extract_y, rankmin_to_sdp};
pub use sos::sos_verify;
pub use stateest::{measurement_residuals, state_est_sdp, StateEstProblem};

//! Shared numerical kernels: dense matrices, symmetric eigendecomposition,
//! PSD projection, Nesterov–Todd scaling, cached normal-equation solves, and
//! preconditioned conjugate gradients.

pub mod block;
pub mod dense;
pub mod eig;
pub mod normal;
pub mod pcg;

pub use block::{
    congruence, eig_sym, log_det, min_eig_symmetrized_product, min_eigenvalue, nt_scaling,
    psd_project, BlockEig, EigenPair,
};
pub use dense::Mat;
pub use normal::NormalEqSolver;
pub use pcg::{pcg, pcg_iteration_bound, PcgOutcome};

//! Per-solve outcome reporting shared by all three solver back-ends.

use crate::cones::Residuals;

/// Terminal state of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// All residuals met their tolerances.
    Optimal,
    /// Iteration cap reached first.
    MaxIter,
    /// An iterate left the cone interior (or a factorization detected it).
    LostInteriority,
    /// The constraint operator is rank deficient.
    DegenerateData,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::MaxIter => "max_iter",
            SolveStatus::LostInteriority => "lost_interiority",
            SolveStatus::DegenerateData => "degenerate_data",
        }
    }
}

/// Solve outcome: objective values, residual history, iteration counts and
/// timing. `newton_iters` counts outer iterations (Newton steps for the
/// interior-point back-ends, sweeps for ADMM); `inner_iters` counts total
/// conjugate-gradient iterations (zero for direct back-ends).
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub primal_obj: f64,
    pub dual_obj: f64,
    pub residual_history: Vec<Residuals>,
    pub newton_iters: usize,
    pub inner_iters: usize,
    /// Conjugate-gradient iterations per Newton step (iterative back-end only).
    pub inner_per_step: Vec<usize>,
    /// Smallest neighborhood margin `λ_min(X^{1/2}SX^{1/2})·n/(X∙S)` seen at
    /// any accepted iterate (interior-point back-ends only).
    pub neighborhood_margin_min: f64,
    /// Final penalty parameter (ADMM only).
    pub final_penalty: Option<f64>,
    /// Number of Newton steps where the iterative back-end fell back to a
    /// dense solve after a preconditioner failure.
    pub preconditioner_fallbacks: usize,
    /// Wall-clock seconds.
    pub wall_time: f64,
}

impl SolveReport {
    pub fn final_residuals(&self) -> Option<&Residuals> {
        self.residual_history.last()
    }
}

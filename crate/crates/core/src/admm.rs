//! First-order ADMM solver on the augmented dual: closed-form y-update via
//! the cached normal equations, S-update by projection onto the
//! semidefinite cone, X-update as the scaled multiplier step (which keeps
//! `X ⪰ 0` for any penalty `t > 0`), plus residual-balancing penalty
//! adaptation.

use std::time::Instant;

use crate::cones::{
    assemble_operator, residuals, BlockSymMatrix, ConicProblem, ConstraintOperator,
    PrimalDualPoint, Residuals,
};
use crate::error::{Error, Result};
use crate::linalg::psd_project;
use crate::report::{SolveReport, SolveStatus};

/// ADMM configuration.
#[derive(Debug, Clone, Copy)]
pub struct AdmmConfig {
    /// Stopping tolerance on the combined scaled residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Initial penalty parameter.
    pub t0: f64,
    /// Multiplicative factor of the penalty adaptation.
    pub adapt_eta: f64,
    /// Imbalance ratio that triggers adaptation.
    pub adapt_rho: f64,
}

impl Default for AdmmConfig {
    fn default() -> Self {
        AdmmConfig { tol: 1e-6, max_iter: 20_000, t0: 1.0, adapt_eta: 2.0, adapt_rho: 10.0 }
    }
}

const T_MIN: f64 = 1e-6;
const T_MAX: f64 = 1e6;

/// Mutable ADMM iteration state.
#[derive(Debug, Clone)]
pub struct AdmmState {
    pub x: BlockSymMatrix,
    pub y: Vec<f64>,
    pub s: BlockSymMatrix,
    /// Penalty parameter.
    pub t: f64,
    /// Iteration counter.
    pub k: usize,
}

impl AdmmState {
    /// Cold start: `X = 0`, `S = [C]₊`, `y = 0`.
    pub fn cold(p: &ConicProblem, t0: f64) -> Result<Self> {
        Ok(AdmmState {
            x: BlockSymMatrix::zeros(p.structure()),
            y: vec![0.0; p.num_constraints()],
            s: psd_project(p.c())?,
            t: t0,
            k: 0,
        })
    }
}

/// Closed-form minimizer of the augmented Lagrangian in `y`:
/// `y = (𝐀ᵀ𝐀)⁻¹ [ (1/t)(b − 𝐀ᵀvec X) + 𝐀ᵀvec(C − S) ]`.
pub fn y_update(p: &ConicProblem, op: &ConstraintOperator, st: &AdmmState) -> Vec<f64> {
    let ax = op.apply(&st.x);
    let c_minus_s = p.c().sub(&st.s);
    let acs = op.apply(&c_minus_s);
    let rhs: Vec<f64> = p
        .b()
        .iter()
        .zip(ax.iter().zip(&acs))
        .map(|(bi, (axi, acsi))| (bi - axi) / st.t + acsi)
        .collect();
    op.solve_normal(&rhs)
}

/// Projection step `S = [D]₊` with `D = C − Σ yᵢAᵢ − X/t`.
pub fn s_update(
    p: &ConicProblem,
    op: &ConstraintOperator,
    st: &AdmmState,
    y_new: &[f64],
) -> Result<BlockSymMatrix> {
    let mut d = p.c().clone();
    d.add_assign_scaled(-1.0, &op.adjoint(y_new));
    d.add_assign_scaled(-1.0 / st.t, &st.x);
    psd_project(&d)
}

/// Multiplier step `X⁺ = X + t(Σ yᵢAᵢ + S − C)`, which equals
/// `t([D]₊ − D) ⪰ 0`.
pub fn x_update(
    p: &ConicProblem,
    op: &ConstraintOperator,
    st: &AdmmState,
    y_new: &[f64],
    s_new: &BlockSymMatrix,
) -> BlockSymMatrix {
    let mut step = op.adjoint(y_new);
    step.add_assign_scaled(1.0, s_new);
    step.add_assign_scaled(-1.0, p.c());
    let mut x = st.x.clone();
    x.add_assign_scaled(st.t, &step);
    x
}

/// Residual-balancing update of the penalty parameter, clamped to
/// `[1e-6, 1e6]`.
pub fn penalty_update(cfg: &AdmmConfig, t: f64, primal_res: f64, dual_res: f64) -> f64 {
    let t_new = if dual_res > cfg.adapt_rho * primal_res {
        t * cfg.adapt_eta
    } else if primal_res > cfg.adapt_rho * dual_res {
        t / cfg.adapt_eta
    } else {
        t
    };
    t_new.clamp(T_MIN, T_MAX)
}

/// One full sweep (y, S, X) in place. Returns the residuals of the updated
/// iterate.
pub fn sweep(
    p: &ConicProblem,
    op: &ConstraintOperator,
    st: &mut AdmmState,
) -> Result<Residuals> {
    let y_new = y_update(p, op, st);
    let s_new = s_update(p, op, st, &y_new)?;
    let x_new = x_update(p, op, st, &y_new, &s_new);
    st.y = y_new;
    st.s = s_new;
    st.x = x_new;
    st.k += 1;
    let pt = PrimalDualPoint::new(st.x.clone(), st.y.clone(), st.s.clone())?;
    Ok(residuals(p, &pt))
}

/// Solve from a cold start.
pub fn admm_solve(p: &ConicProblem, cfg: &AdmmConfig) -> Result<(PrimalDualPoint, SolveReport)> {
    let st = AdmmState::cold(p, cfg.t0)?;
    admm_solve_from(p, cfg, st)
}

/// Solve from a caller-supplied state (warm start).
pub fn admm_solve_from(
    p: &ConicProblem,
    cfg: &AdmmConfig,
    mut st: AdmmState,
) -> Result<(PrimalDualPoint, SolveReport)> {
    let start = Instant::now();
    let mut report = SolveReport {
        status: SolveStatus::MaxIter,
        primal_obj: 0.0,
        dual_obj: 0.0,
        residual_history: Vec::new(),
        newton_iters: 0,
        inner_iters: 0,
        inner_per_step: Vec::new(),
        neighborhood_margin_min: f64::INFINITY,
        final_penalty: Some(st.t),
        preconditioner_fallbacks: 0,
        wall_time: 0.0,
    };

    let op = match assemble_operator(p) {
        Ok(op) => op,
        Err(Error::DegenerateData { .. }) => {
            report.status = SolveStatus::DegenerateData;
            report.wall_time = start.elapsed().as_secs_f64();
            let pt = PrimalDualPoint::new(st.x, st.y, st.s)?;
            return Ok((pt, report));
        }
        Err(e) => return Err(e),
    };

    for _ in 0..cfg.max_iter {
        let res = sweep(p, &op, &mut st)?;
        report.residual_history.push(res);
        report.newton_iters += 1;
        if res.combined() <= cfg.tol {
            report.status = SolveStatus::Optimal;
            break;
        }
        // Adaptation freezes close to convergence, preserving the fixed-t
        // convergence guarantee.
        if res.combined() >= 100.0 * cfg.tol {
            st.t = penalty_update(cfg, st.t, res.primal, res.dual);
        }
    }

    report.final_penalty = Some(st.t);
    report.primal_obj = p.primal_objective(&st.x);
    report.dual_obj = p.dual_objective(&st.y);
    report.wall_time = start.elapsed().as_secs_f64();
    let pt = PrimalDualPoint::new(st.x, st.y, st.s)?;
    Ok((pt, report))
}

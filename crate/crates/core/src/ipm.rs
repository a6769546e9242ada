//! Primal-dual interior-point solver: wide-neighborhood path following with
//! Nesterov–Todd scaling and a Schur-complement solve, either dense
//! (Cholesky) or iterative (preconditioned conjugate gradients, see
//! [`crate::lowrank`]).

use std::time::Instant;

use crate::cones::{
    assemble_operator, inner, residuals, BlockSymMatrix, ConicProblem, ConstraintOperator,
    PrimalDualPoint,
};
use crate::error::{Error, Result};
use crate::linalg::dense::{cholesky, cholesky_solve_refined, norm_inf, Mat};
use crate::linalg::{congruence, eig_sym, log_det, min_eig_symmetrized_product, nt_scaling};
use crate::lowrank;
use crate::report::{SolveReport, SolveStatus};

/// Which back-end solves the Schur complement equation at each Newton step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HessianSolver {
    /// Form the m×m Hessian densely and factor it.
    DenseCholesky,
    /// Never form the Hessian; run preconditioned conjugate gradients with
    /// the low-rank scaling split. `theta` is the a-priori bound on the rank
    /// of the primal solution.
    PcgLowRank { theta: usize },
}

/// Interior-point configuration.
#[derive(Debug, Clone, Copy)]
pub struct IpmConfig {
    /// Wide-neighborhood parameter γ ∈ (0,1).
    pub gamma: f64,
    /// Centering parameter σ ∈ (0,1).
    pub sigma: f64,
    pub tol_gap: f64,
    pub tol_primal: f64,
    pub tol_dual: f64,
    pub max_newton: usize,
    pub hessian_solver: HessianSolver,
}

impl Default for IpmConfig {
    fn default() -> Self {
        IpmConfig {
            gamma: 1e-3,
            sigma: 0.1,
            tol_gap: 1e-8,
            tol_primal: 1e-8,
            tol_dual: 1e-8,
            max_newton: 200,
            hessian_solver: HessianSolver::DenseCholesky,
        }
    }
}

impl IpmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::InvalidArgument("gamma must lie in (0,1)".into()));
        }
        if !(self.sigma > 0.0 && self.sigma < 1.0) {
            return Err(Error::InvalidArgument("sigma must lie in (0,1)".into()));
        }
        if self.tol_gap <= 0.0 || self.tol_primal <= 0.0 || self.tol_dual <= 0.0 {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Cold start `X = ρ_p·I`, `S = ρ_d·I`, `y = 0` with the scales set from the
/// data norms, so that the starting point dominates the data magnitude.
pub fn initial_point(p: &ConicProblem) -> PrimalDualPoint {
    let rho_p = 1.0 + norm_inf(p.b());
    let max_a = p.constraints().iter().map(|a| a.frob_norm()).fold(0.0f64, f64::max);
    let rho_d = 1.0 + max_a + p.c().frob_norm();
    let structure = p.structure();
    PrimalDualPoint::new(
        BlockSymMatrix::scaled_identity(structure, rho_p),
        vec![0.0; p.num_constraints()],
        BlockSymMatrix::scaled_identity(structure, rho_d),
    )
    .expect("identity blocks share the problem structure")
}

/// Barrier objective `C∙X − μ Σ_blocks log det Xⱼ`.
pub fn barrier_objective(p: &ConicProblem, x: &BlockSymMatrix, mu: f64) -> Result<f64> {
    Ok(p.primal_objective(x) - mu * log_det(x)?)
}

/// Wide-neighborhood membership: `λ_min(X^{1/2} S X^{1/2}) ≥ (γ/n)·X∙S`.
pub fn neighborhood_check(x: &BlockSymMatrix, s: &BlockSymMatrix, gamma: f64) -> Result<bool> {
    let (min_eig, xs) = min_eig_symmetrized_product(x, s)?;
    let n = x.structure().total_dim() as f64;
    Ok(min_eig >= gamma / n * xs)
}

/// Margin `λ_min(X^{1/2}SX^{1/2})·n / (X∙S)`; membership in the
/// γ-neighborhood is `margin ≥ γ`.
pub fn neighborhood_margin(x: &BlockSymMatrix, s: &BlockSymMatrix) -> Result<f64> {
    let (min_eig, xs) = min_eig_symmetrized_product(x, s)?;
    let n = x.structure().total_dim() as f64;
    Ok(min_eig * n / xs)
}

/// Dense Schur-complement matrix `H = 𝐀ᵀ(W⊗W)𝐀` in svec space:
/// `H_ij = Aᵢ ∙ (W Aⱼ W)`.
pub fn dense_hessian(
    p: &ConicProblem,
    op: &ConstraintOperator,
    w: &BlockSymMatrix,
) -> Mat {
    let m = p.num_constraints();
    let mut h = Mat::zeros(m, m);
    for j in 0..m {
        let col = op.apply(&congruence(w, &p.constraints()[j]));
        for i in 0..m {
            h[(i, j)] = col[i];
        }
    }
    h.symmetrize()
}

/// One Newton step of the scaled subproblem: solves the Schur complement
/// equation `[𝐀ᵀ(W⊗W)𝐀] y = r` with `rᵢ = bᵢ + Aᵢ∙W(C−Z)W`, then recovers
/// `S = C − Σ yᵢAᵢ` (dual equation exact by construction) and
/// `X = W(Z−S)W` (primal equation exact by construction).
///
/// The system is solved in step form, `H·dy = r − H·y_current`: the defect
/// right-hand side stays O(data) while `r` itself grows like ‖W‖², so a
/// relative inner tolerance keeps the recovered X's feasibility at the
/// working accuracy all the way down the central path.
///
/// Returns the full-step target `(y, S, X)` plus the inner iteration count
/// (zero for the dense back-end) and whether a preconditioner fallback was
/// taken.
pub fn newton_direction(
    p: &ConicProblem,
    op: &ConstraintOperator,
    y_current: &[f64],
    w: &BlockSymMatrix,
    z: &BlockSymMatrix,
    solver: HessianSolver,
    inner_eps: f64,
) -> Result<(Vec<f64>, BlockSymMatrix, BlockSymMatrix, usize, bool)> {
    // defect = r − H·y_current = b + A(W(C − Z − Σ y_i A_i)W)
    let mut target = p.c().sub(z);
    target.add_assign_scaled(-1.0, &op.adjoint(y_current));
    let defect: Vec<f64> = p
        .b()
        .iter()
        .zip(op.apply(&congruence(w, &target)))
        .map(|(bi, ai)| bi + ai)
        .collect();

    let (dy, inner_iters, fallback) = match solver {
        HessianSolver::DenseCholesky => {
            let h = dense_hessian(p, op, w);
            (schur_solve_regularized(&h, &defect)?, 0, false)
        }
        HessianSolver::PcgLowRank { theta } => {
            lowrank::pcg_hessian_solve(p, op, w, &defect, theta, inner_eps)?
        }
    };

    let y: Vec<f64> = y_current.iter().zip(&dy).map(|(yc, d)| yc + d).collect();
    let s_new = {
        let mut s = p.c().clone();
        s.add_assign_scaled(-1.0, &op.adjoint(&y));
        s
    };
    let x_new = congruence(w, &z.sub(&s_new));
    Ok((y, s_new, x_new, inner_iters, fallback))
}

fn is_pd(m: &BlockSymMatrix) -> bool {
    (0..m.structure().block_count()).all(|blk| cholesky(&m.block_dense(blk), 0.0).is_ok())
}

/// Factor-and-solve for the Schur system with a ridge retry: degenerate
/// problems (non-unique optima, strict-complementarity failure) drive the
/// Schur complement numerically singular late in the path, and a tiny
/// diagonal shift keeps the direction usable where a bare factorization
/// gives up. Refinement runs against the unshifted matrix.
pub(crate) fn schur_solve_regularized(h: &Mat, rhs: &[f64]) -> Result<Vec<f64>> {
    let m = h.rows();
    match cholesky(h, 1e-14) {
        Ok(l) => Ok(cholesky_solve_refined(h, &l, rhs)),
        Err(_) => {
            let diag_max = (0..m).fold(0.0f64, |acc, i| acc.max(h[(i, i)].abs()));
            let mut shifted = h.clone();
            for i in 0..m {
                shifted[(i, i)] += 1e-12 * diag_max.max(f64::MIN_POSITIVE);
            }
            let l = cholesky(&shifted, 1e-16).map_err(|_| Error::LostInteriority {
                context: "dense Schur complement factorization",
            })?;
            Ok(cholesky_solve_refined(h, &l, rhs))
        }
    }
}

/// Solve a standard-form problem with the interior-point method.
///
/// Data-level failures (rank-deficient operator, lost interiority, iteration
/// cap) are reported through [`SolveStatus`], not as errors.
pub fn ipm_solve(p: &ConicProblem, cfg: &IpmConfig) -> Result<(PrimalDualPoint, SolveReport)> {
    cfg.validate()?;
    let start = Instant::now();
    let mut pt = initial_point(p);
    let n = p.total_dim() as f64;

    let mut report = SolveReport {
        status: SolveStatus::MaxIter,
        primal_obj: p.primal_objective(&pt.x),
        dual_obj: p.dual_objective(&pt.y),
        residual_history: Vec::new(),
        newton_iters: 0,
        inner_iters: 0,
        inner_per_step: Vec::new(),
        neighborhood_margin_min: f64::INFINITY,
        final_penalty: None,
        preconditioner_fallbacks: 0,
        wall_time: 0.0,
    };

    let op = match assemble_operator(p) {
        Ok(op) => op,
        Err(Error::DegenerateData { .. }) => {
            report.status = SolveStatus::DegenerateData;
            report.wall_time = start.elapsed().as_secs_f64();
            return Ok((pt, report));
        }
        Err(e) => return Err(e),
    };

    report.neighborhood_margin_min = neighborhood_margin(&pt.x, &pt.s)?;

    // Track the best iterate seen. Near the floating-point floor the primal
    // residual can drift back up while the gap keeps shrinking; reporting
    // the best point (and stopping once progress stalls) is strictly better
    // than returning whatever iterate the loop died on.
    let mut best_pt = pt.clone();
    let mut best_combined = f64::INFINITY;
    let mut best_iter = 0usize;

    for k in 0..cfg.max_newton {
        let res = residuals(p, &pt);
        report.residual_history.push(res);
        if res.combined() < best_combined {
            best_combined = res.combined();
            best_pt = pt.clone();
            best_iter = k;
        }
        if res.gap <= cfg.tol_gap && res.primal <= cfg.tol_primal && res.dual <= cfg.tol_dual {
            report.status = SolveStatus::Optimal;
            break;
        }
        if k >= best_iter + 12 {
            // a dozen iterations without a new best: numerical floor reached
            report.status = SolveStatus::LostInteriority;
            break;
        }

        let w = match nt_scaling(&pt.x, &pt.s) {
            Ok(w) => w,
            Err(Error::LostInteriority { .. }) => {
                report.status = SolveStatus::LostInteriority;
                break;
            }
            Err(e) => return Err(e),
        };

        // Close to the target the centering parameter aims just inside the
        // tolerance instead of overshooting by a full factor σ: the Schur
        // solve's backward error grows as the gap shrinks, so driving μ far
        // below tol_gap erodes feasibility for no benefit.
        let sigma = if res.gap <= 100.0 * cfg.tol_gap {
            (0.3 * cfg.tol_gap / res.gap).clamp(cfg.sigma, 0.9)
        } else {
            cfg.sigma
        };

        // Newton target: Z = σμX⁻¹ + S reproduces the textbook scaled step
        // toward XS = σμI (the recovered X then satisfies
        // X_new = σμS⁻¹ + X − W S_new W).
        let mu = pt.mu;
        let ex = eig_sym(&pt.x)?;
        let x_max = ex.max_value().max(f64::MIN_POSITIVE);
        let x_inv = ex.map(|v| 1.0 / v.max(1e-14 * x_max));
        let mut z = x_inv.scale(sigma * mu);
        z.add_assign_scaled(1.0, &pt.s);

        // Inexact-Newton forcing term: the inner solve only needs to be as
        // accurate as the current KKT residual, so the tolerance starts
        // loose and tightens with convergence.
        let loose_eps = (0.1 * res.combined()).clamp(1e-10, 1e-2);
        let mut tries = 0;
        let mut accepted: Option<PrimalDualPoint> = None;
        loop {
            tries += 1;
            let eps = if tries == 1 { loose_eps } else { 1e-10 };
            let (y_t, s_t, x_t, inner_iters, fallback) =
                match newton_direction(p, &op, &pt.y, &w, &z, cfg.hessian_solver, eps) {
                    Ok(v) => v,
                    Err(Error::LostInteriority { .. }) => {
                        report.status = SolveStatus::LostInteriority;
                        break;
                    }
                    Err(e) => return Err(e),
                };
            report.inner_iters += inner_iters;
            report.inner_per_step.push(inner_iters);
            if fallback {
                report.preconditioner_fallbacks += 1;
            }

            let mut alpha = 1.0f64;
            while alpha > 1e-7 {
                let mut x_a = pt.x.clone();
                x_a.add_assign_scaled(alpha, &x_t.sub(&pt.x));
                let mut s_a = pt.s.clone();
                s_a.add_assign_scaled(alpha, &s_t.sub(&pt.s));
                if is_pd(&x_a) && is_pd(&s_a) {
                    let mu_a = inner(&x_a, &s_a)? / n;
                    let decrease_ok = mu_a <= (1.0 - 0.01 * alpha * (1.0 - sigma)) * mu;
                    if decrease_ok && neighborhood_check(&x_a, &s_a, cfg.gamma)? {
                        let y_a: Vec<f64> = pt
                            .y
                            .iter()
                            .zip(&y_t)
                            .map(|(yo, yn)| yo + alpha * (yn - yo))
                            .collect();
                        accepted = Some(PrimalDualPoint::new(x_a, y_a, s_a)?);
                        break;
                    }
                }
                alpha *= 0.8;
            }

            if accepted.is_some() {
                break;
            }
            // Inexact-Newton safeguard: one retry at tight inner tolerance.
            let retryable = matches!(cfg.hessian_solver, HessianSolver::PcgLowRank { .. })
                && tries == 1
                && eps > 1e-10;
            if !retryable {
                report.status = SolveStatus::LostInteriority;
                break;
            }
        }

        match accepted {
            Some(next) => {
                report.newton_iters += 1;
                let margin = neighborhood_margin(&next.x, &next.s)?;
                report.neighborhood_margin_min = report.neighborhood_margin_min.min(margin);
                pt = next;
            }
            None => break, // status already set
        }
    }

    if report.status == SolveStatus::MaxIter {
        let res = residuals(p, &pt);
        report.residual_history.push(res);
        if res.combined() < best_combined {
            best_pt = pt.clone();
        }
        if res.gap <= cfg.tol_gap && res.primal <= cfg.tol_primal && res.dual <= cfg.tol_dual {
            report.status = SolveStatus::Optimal;
        }
    }

    // On anything but a clean exit, hand back the best iterate seen.
    let mut final_pt = if report.status == SolveStatus::Optimal { pt } else { best_pt };

    if report.status == SolveStatus::Optimal {
        // Terminal feasibility polish: a least-norm correction through the
        // cached normal equations pulls A(X) = b down to working precision.
        // (During the solve this would contaminate the μ-scaled eigenvalues,
        // but the final point has no further steps to take.) Kept only when
        // it leaves every residual within tolerance.
        let resid: Vec<f64> =
            p.b().iter().zip(op.apply(&final_pt.x)).map(|(bi, axi)| bi - axi).collect();
        let mut x_polished = final_pt.x.clone();
        x_polished.add_assign_scaled(1.0, &op.adjoint(&op.solve_normal(&resid)));
        let polished = PrimalDualPoint::new(x_polished, final_pt.y.clone(), final_pt.s.clone())?;
        let res = residuals(p, &polished);
        if res.gap <= cfg.tol_gap && res.primal <= cfg.tol_primal && res.dual <= cfg.tol_dual {
            report.residual_history.push(res);
            final_pt = polished;
        }
    }

    report.primal_obj = p.primal_objective(&final_pt.x);
    report.dual_obj = p.dual_objective(&final_pt.y);
    report.wall_time = start.elapsed().as_secs_f64();
    Ok((final_pt, report))
}

//! Preconditioned conjugate gradients for symmetric positive definite
//! operators given as closures.

use crate::error::{Error, Result};
use crate::linalg::dense::{axpy, dot, norm2};

/// Outcome of a PCG run.
#[derive(Debug, Clone)]
pub struct PcgOutcome {
    pub solution: Vec<f64>,
    pub iterations: usize,
    /// Final `‖H y − r‖ / ‖r‖`.
    pub rel_residual: f64,
    pub converged: bool,
}

/// Solve `H y = r` by preconditioned conjugate gradients.
///
/// `apply_h` and `apply_precond` must both be symmetric positive definite as
/// operators. Returns the first iterate whose true residual satisfies
/// `‖H y − r‖ ≤ eps·‖r‖`, or a non-converged outcome after `max_iter`
/// iterations. Detection of non-positive curvature (`pᵀHp ≤ 1e-14‖p‖²`)
/// aborts with an error: the operator is not positive definite, which for
/// interior-point callers signals lost interiority upstream.
pub fn pcg(
    apply_h: &dyn Fn(&[f64]) -> Vec<f64>,
    apply_precond: &dyn Fn(&[f64]) -> Vec<f64>,
    r: &[f64],
    eps: f64,
    max_iter: usize,
) -> Result<PcgOutcome> {
    let n = r.len();
    let rnorm0 = norm2(r);
    if rnorm0 == 0.0 {
        return Ok(PcgOutcome { solution: vec![0.0; n], iterations: 0, rel_residual: 0.0, converged: true });
    }

    let mut y = vec![0.0; n];
    let mut resid = r.to_vec();
    let mut z = apply_precond(&resid);
    let mut p = z.clone();
    let mut rz = dot(&resid, &z);

    for k in 1..=max_iter {
        let hp = apply_h(&p);
        let php = dot(&p, &hp);
        let pn = dot(&p, &p);
        if php <= 1e-14 * pn {
            return Err(Error::LostInteriority { context: "conjugate gradients (operator not positive definite)" });
        }
        let alpha = rz / php;
        axpy(alpha, &p, &mut y);
        axpy(-alpha, &hp, &mut resid);

        let rel = norm2(&resid) / rnorm0;
        if rel <= eps {
            return Ok(PcgOutcome { solution: y, iterations: k, rel_residual: rel, converged: true });
        }

        z = apply_precond(&resid);
        let rz_new = dot(&resid, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }

    let rel = norm2(&resid) / rnorm0;
    Ok(PcgOutcome { solution: y, iterations: max_iter, rel_residual: rel, converged: false })
}

/// Iteration ceiling `⌈(√κ/2)·log(2√κ/ε)⌉` for a system with joint condition
/// number `κ` solved to relative accuracy `ε`.
pub fn pcg_iteration_bound(kappa: f64, eps: f64) -> usize {
    let sk = kappa.sqrt();
    ((sk / 2.0) * (2.0 * sk / eps).ln()).ceil().max(1.0) as usize
}

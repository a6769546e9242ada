//! Solver selection shared by `solve` and `bench`.

use conekit::admm::{admm_solve, AdmmConfig};
use conekit::ipm::{ipm_solve, IpmConfig};
use conekit::lowrank::lr_ipm_solve;
use conekit::report::SolveReport;
use conekit::{ConicProblem, PrimalDualPoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverKind {
    Ipm,
    Admm,
    LrIpm,
}

impl SolverKind {
    pub fn parse(name: &str) -> Option<SolverKind> {
        match name {
            "ipm" => Some(SolverKind::Ipm),
            "admm" => Some(SolverKind::Admm),
            "lr-ipm" => Some(SolverKind::LrIpm),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SolverKind::Ipm => "ipm",
            SolverKind::Admm => "admm",
            SolverKind::LrIpm => "lr-ipm",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub solver: SolverKind,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub theta: Option<usize>,
}

pub fn run_solver(
    p: &ConicProblem,
    opts: &SolveOptions,
) -> conekit::Result<(PrimalDualPoint, SolveReport)> {
    match opts.solver {
        SolverKind::Ipm | SolverKind::LrIpm => {
            let mut cfg = IpmConfig::default();
            if let Some(tol) = opts.tol {
                cfg.tol_gap = tol;
                cfg.tol_primal = tol;
                cfg.tol_dual = tol;
            }
            if let Some(mi) = opts.max_iter {
                cfg.max_newton = mi;
            }
            if opts.solver == SolverKind::LrIpm {
                let theta = opts.theta.expect("lr-ipm requires theta; validated by the caller");
                lr_ipm_solve(p, &cfg, theta)
            } else {
                ipm_solve(p, &cfg)
            }
        }
        SolverKind::Admm => {
            let mut cfg = AdmmConfig::default();
            if let Some(tol) = opts.tol {
                cfg.tol = tol;
            }
            if let Some(mi) = opts.max_iter {
                cfg.max_iter = mi;
            }
            admm_solve(p, &cfg)
        }
    }
}

/// Canonical (key, value) pairs feeding the config hash.
pub fn config_parts(opts: &SolveOptions, seed: Option<u64>) -> Vec<(&'static str, String)> {
    let mut parts = vec![("solver", opts.solver.as_str().to_string())];
    if let Some(tol) = opts.tol {
        parts.push(("tol", format!("{tol:e}")));
    }
    if let Some(mi) = opts.max_iter {
        parts.push(("max_iter", mi.to_string()));
    }
    if let Some(th) = opts.theta {
        parts.push(("theta", th.to_string()));
    }
    if let Some(s) = seed {
        parts.push(("seed", s.to_string()));
    }
    parts
}

//! Solver-level integration checks: Newton-system oracles, neighborhood
//! discipline, ADMM fixed-point characterization and invariants, and
//! agreement across back-ends.

mod support;

use conekit::admm::{admm_solve, sweep, AdmmConfig, AdmmState};
use conekit::cones::{
    assemble_operator, inner, residuals, smat, svec, BlockStructure, BlockSymMatrix,
    PrimalDualPoint,
};
use conekit::ipm::{ipm_solve, newton_direction, HessianSolver, IpmConfig};
use conekit::linalg::{min_eigenvalue, nt_scaling, psd_project, Mat};
use conekit::lowrank::lr_ipm_solve;
use conekit::report::SolveStatus;
use support::{random_block_pd, random_feasible_problem, TestRng};

/// Dense svec-space assembly of `𝐀ᵀ(W⊗W)𝐀` built entirely from basis
/// vectors, independent of the solver's congruence path.
fn dense_hessian_oracle(
    p: &conekit::ConicProblem,
    w: &BlockSymMatrix,
) -> (Mat, Mat) {
    let st = p.structure();
    let len = st.svec_len();
    let m = p.num_constraints();
    // K: svec-space matrix of M ↦ W M W
    let mut k = Mat::zeros(len, len);
    for col in 0..len {
        let mut e = vec![0.0; len];
        e[col] = 1.0;
        let basis = smat(&e, st).unwrap();
        let wmw = conekit::linalg::congruence(w, &basis);
        let v = svec(&wmw);
        for row in 0..len {
            k[(row, col)] = v[row];
        }
    }
    let a_dense = Mat::from_fn(len, m, |i, j| svec(&p.constraints()[j])[i]);
    let h = a_dense.transpose().mul(&k).mul(&a_dense);
    (h, a_dense)
}

#[test]
fn newton_system_residual_against_dense_kronecker_assembly() {
    let mut rng = TestRng::new(55);
    for trial in 0..4 {
        let m = 4 + trial;
        let p = random_feasible_problem(&mut rng, &[3, 2], m);
        let op = assemble_operator(&p).unwrap();
        let w = random_block_pd(&mut rng, p.structure(), 0.8);
        let z = support::random_block_sym(&mut rng, p.structure());
        let y_cur: Vec<f64> = (0..m).map(|_| rng.unit()).collect();
        let (y, s_new, x_new, _, _) =
            newton_direction(&p, &op, &y_cur, &w, &z, HessianSolver::DenseCholesky, 1e-12)
                .unwrap();

        let (h, _) = dense_hessian_oracle(&p, &w);
        let rhs: Vec<f64> = p
            .b()
            .iter()
            .zip(op.apply(&conekit::linalg::congruence(&w, &p.c().sub(&z))))
            .map(|(bi, ai)| bi + ai)
            .collect();
        let hy = h.mul_vec(&y);
        let rhs_norm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        let resid = hy
            .iter()
            .zip(&rhs)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(resid <= 1e-8 * (1.0 + rhs_norm), "Newton residual {resid}");

        // dual equation holds exactly by construction
        let mut dual = op.adjoint(&y);
        dual.add_assign_scaled(1.0, &s_new);
        dual.add_assign_scaled(-1.0, p.c());
        assert!(dual.frob_norm() <= 1e-12 * (1.0 + p.c().frob_norm()));
        // recovered X is primal feasible
        let ax = op.apply(&x_new);
        for (axi, bi) in ax.iter().zip(p.b()) {
            assert!((axi - bi).abs() <= 1e-8 * (1.0 + bi.abs()));
        }
    }
}

#[test]
fn ipm_neighborhood_discipline_and_gap_decrease() {
    let mut rng = TestRng::new(808);
    for trial in 0..5 {
        let p = random_feasible_problem(&mut rng, &[4 + trial % 3, 1], 5 + trial);
        // the gap tolerance sits a shade above the f64 floor of the Schur
        // solve so that all random instances terminate cleanly
        let cfg = IpmConfig { tol_gap: 3e-8, ..IpmConfig::default() };
        let (pt, rep) = ipm_solve(&p, &cfg).unwrap();
        assert_eq!(rep.status, SolveStatus::Optimal, "trial {trial}");
        // every accepted iterate stayed inside the γ-neighborhood
        assert!(rep.neighborhood_margin_min >= cfg.gamma);
        // gap decreases monotonically along the path (terminal polish entries
        // past the first in-tolerance iterate are exempt)
        let converged = |r: &conekit::Residuals| {
            r.gap <= cfg.tol_gap && r.primal <= cfg.tol_primal && r.dual <= cfg.tol_dual
        };
        for w in rep.residual_history.windows(2) {
            if converged(&w[0]) {
                break;
            }
            assert!(w[1].gap <= w[0].gap * (1.0 - 0.001) + 1e-14, "gap stalled: {w:?}");
        }
        // one-sided suboptimality bracket at termination
        let n_mu = p.total_dim() as f64 * pt.mu;
        let gap_abs = rep.primal_obj - rep.dual_obj;
        assert!(gap_abs <= n_mu + 1e-8, "bracket violated: {gap_abs} vs {n_mu}");
        // the lower side holds up to the feasibility cross terms
        let last = rep.final_residuals().unwrap();
        let y_l1: f64 = pt.y.iter().map(|v| v.abs()).sum();
        let slack = last.primal * (1.0 + p.b().iter().fold(0.0f64, |m, v| m.max(v.abs()))) * y_l1;
        assert!(gap_abs >= -(1e-8 + 2.0 * slack), "lower bracket violated: {gap_abs}");
    }
}

#[test]
fn dense_and_lowrank_backends_agree() {
    let mut rng = TestRng::new(3003);
    for trial in 0..4 {
        let p = random_feasible_problem(&mut rng, &[5], 6 + trial);
        let cfg = IpmConfig::default();
        let (_, dense) = ipm_solve(&p, &cfg).unwrap();
        let (_, lr) = lr_ipm_solve(&p, &cfg, 2).unwrap();
        assert_eq!(dense.status, SolveStatus::Optimal);
        assert_eq!(lr.status, SolveStatus::Optimal);
        assert!(
            (dense.primal_obj - lr.primal_obj).abs()
                <= 10.0 * cfg.tol_gap * (1.0 + dense.primal_obj.abs()),
            "objectives diverge: {} vs {}",
            dense.primal_obj,
            lr.primal_obj
        );
    }
}

#[test]
fn admm_iterates_stay_in_the_cone() {
    // randomized states and problems; every sweep must leave X and S PSD
    let mut rng = TestRng::new(606);
    let mut checked = 0;
    while checked < 1000 {
        let m = 3 + rng.below(3);
        let n = 3 + rng.below(3);
        let p = random_feasible_problem(&mut rng, &[n], m);
        let op = assemble_operator(&p).unwrap();
        let mut st = AdmmState::cold(&p, 10f64.powf(rng.range(-2.0, 2.0))).unwrap();
        // random PSD warm start
        st.x = psd_project(&support::random_block_sym(&mut rng, p.structure())).unwrap();
        for _ in 0..25 {
            sweep(&p, &op, &mut st).unwrap();
            let lx = min_eigenvalue(&st.x).unwrap();
            let ls = min_eigenvalue(&st.s).unwrap();
            assert!(lx >= -1e-10 * st.x.frob_norm().max(1.0), "X left the cone: {lx}");
            assert!(ls >= -1e-10 * st.s.frob_norm().max(1.0), "S left the cone: {ls}");
            checked += 1;
        }
    }
}

/// Construct a problem with a known KKT triple: complementary PSD X*, S*
/// with orthogonal ranges, b = A(X*), C = Σ y*ᵢAᵢ + S*.
fn problem_with_known_optimum(
    rng: &mut TestRng,
    n: usize,
    m: usize,
) -> (conekit::ConicProblem, BlockSymMatrix, Vec<f64>, BlockSymMatrix) {
    let st = BlockStructure::new(vec![n]).unwrap();
    // orthonormal frame from a random symmetric eigenbasis
    let base = support::random_symmetric(rng, n);
    let (_, q) = conekit::linalg::eig::sym_eig(&base).unwrap();
    let rank_x = 1 + rng.below(n - 1);
    let mut x_dense = Mat::zeros(n, n);
    for k in 0..rank_x {
        let lam = 0.5 + rng.unit().abs();
        for i in 0..n {
            for j in 0..n {
                x_dense[(i, j)] += lam * q[(i, k)] * q[(j, k)];
            }
        }
    }
    let mut s_dense = Mat::zeros(n, n);
    for k in rank_x..n {
        let lam = 0.5 + rng.unit().abs();
        for i in 0..n {
            for j in 0..n {
                s_dense[(i, j)] += lam * q[(i, k)] * q[(j, k)];
            }
        }
    }
    let x_star = BlockSymMatrix::from_dense_blocks(&st, &[x_dense]).unwrap();
    let s_star = BlockSymMatrix::from_dense_blocks(&st, &[s_dense]).unwrap();
    let mut a = Vec::with_capacity(m);
    for _ in 0..m {
        a.push(support::random_block_sym(rng, &st));
    }
    let b: Vec<f64> = a.iter().map(|ai| inner(ai, &x_star).unwrap()).collect();
    let y_star: Vec<f64> = (0..m).map(|_| rng.unit()).collect();
    let mut c = s_star.clone();
    for (ai, &yi) in a.iter().zip(&y_star) {
        c.add_assign_scaled(yi, ai);
    }
    let p = conekit::ConicProblem::new(st, c, a, b).unwrap();
    (p, x_star, y_star, s_star)
}

#[test]
fn admm_fixed_point_iff_kkt() {
    let mut rng = TestRng::new(777);
    for _ in 0..6 {
        let (p, x_star, y_star, s_star) = problem_with_known_optimum(&mut rng, 5, 4);
        let op = assemble_operator(&p).unwrap();

        // KKT point → one sweep is a fixed point
        let mut st = AdmmState { x: x_star.clone(), y: y_star.clone(), s: s_star.clone(), t: 1.7, k: 0 };
        sweep(&p, &op, &mut st).unwrap();
        assert!(st.x.sub(&x_star).frob_norm() <= 1e-10 * (1.0 + x_star.frob_norm()));
        assert!(st.s.sub(&s_star).frob_norm() <= 1e-10 * (1.0 + s_star.frob_norm()));
        let dy: f64 = st.y.iter().zip(&y_star).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        assert!(dy <= 1e-10 * (1.0 + 1.0));

        // fixed point → KKT residuals vanish
        let pt = PrimalDualPoint::new(st.x.clone(), st.y.clone(), st.s.clone()).unwrap();
        let r = residuals(&p, &pt);
        assert!(r.combined() <= 1e-10);

        // a perturbed point is NOT a fixed point (sanity for the converse)
        let mut st2 = AdmmState { x: x_star.clone(), y: y_star.clone(), s: s_star.clone(), t: 1.7, k: 0 };
        st2.x.set(0, 0, 0, st2.x.get(0, 0, 0) + 0.1);
        let before = st2.x.clone();
        sweep(&p, &op, &mut st2).unwrap();
        assert!(st2.x.sub(&before).frob_norm() > 1e-6);
    }
}

#[test]
fn admm_residuals_settle_after_burn_in() {
    let mut rng = TestRng::new(2111);
    let p = random_feasible_problem(&mut rng, &[5], 6);
    // fixed penalty: adaptation is disabled by an unreachable imbalance ratio
    let cfg = AdmmConfig { tol: 1e-8, adapt_rho: f64::INFINITY, ..AdmmConfig::default() };
    let (_, rep) = admm_solve(&p, &cfg).unwrap();
    assert_eq!(rep.status, SolveStatus::Optimal);
    // combined residual is non-increasing after a burn-in, up to small noise
    let combined: Vec<f64> = rep.residual_history.iter().map(|r| r.combined()).collect();
    for w in combined.windows(2).skip(10) {
        assert!(
            w[1] <= w[0] * 1.05 + 1e-12,
            "combined residual rose sharply after burn-in: {w:?}"
        );
    }
}

#[test]
fn admm_and_ipm_objectives_agree() {
    let mut rng = TestRng::new(915);
    for trial in 0..3 {
        let p = random_feasible_problem(&mut rng, &[4], 5 + trial);
        let (_, ipm_rep) = ipm_solve(&p, &IpmConfig::default()).unwrap();
        let (_, admm_rep) = admm_solve(&p, &AdmmConfig::default()).unwrap();
        assert_eq!(ipm_rep.status, SolveStatus::Optimal);
        assert_eq!(admm_rep.status, SolveStatus::Optimal);
        assert!(
            (ipm_rep.primal_obj - admm_rep.primal_obj).abs()
                <= 1e-4 * (1.0 + ipm_rep.primal_obj.abs()),
            "trial {trial}: ipm {} admm {}",
            ipm_rep.primal_obj,
            admm_rep.primal_obj
        );
    }
}

#[test]
fn ipm_iteration_cap_reports_max_iter() {
    let mut rng = TestRng::new(5150);
    let p = random_feasible_problem(&mut rng, &[4], 5);
    let cfg = IpmConfig { max_newton: 3, ..Default::default() };
    let (_, rep) = ipm_solve(&p, &cfg).unwrap();
    assert_eq!(rep.status, SolveStatus::MaxIter);
    assert_eq!(rep.newton_iters, 3);
    assert!(rep.residual_history.len() >= 3);
}

#[test]
fn ipm_stalls_cleanly_past_the_floating_point_floor() {
    // demanding residuals beyond what f64 supports must end in a clean
    // non-optimal status with the best iterate reported, not a panic or an
    // endless loop
    let mut rng = TestRng::new(866);
    let p = random_feasible_problem(&mut rng, &[4], 5);
    let cfg = IpmConfig {
        tol_gap: 1e-15,
        tol_primal: 1e-15,
        tol_dual: 1e-15,
        max_newton: 500,
        ..Default::default()
    };
    let (_, rep) = ipm_solve(&p, &cfg).unwrap();
    assert!(matches!(rep.status, SolveStatus::LostInteriority | SolveStatus::MaxIter));
    // stall detection keeps the run far below the iteration cap
    assert!(rep.newton_iters < 200, "stall exit did not engage: {}", rep.newton_iters);
    // the best iterate is still a high-quality approximate solution
    let last = rep.residual_history.iter().map(|r| r.combined()).fold(f64::INFINITY, f64::min);
    assert!(last < 1e-6);
}

#[test]
fn nt_scaling_and_neighborhood_on_the_central_path() {
    // along X = Q diag(eλ) Qᵀ, S = μ X⁻¹ the neighborhood margin is exactly 1
    let mut rng = TestRng::new(12);
    let st = BlockStructure::new(vec![4]).unwrap();
    let x = random_block_pd(&mut rng, &st, 0.5);
    let ex = conekit::linalg::eig_sym(&x).unwrap();
    for &mu in &[1.0, 1e-2, 1e-4] {
        let s = ex.map(|v| mu / v);
        let margin = conekit::ipm::neighborhood_margin(&x, &s).unwrap();
        assert!((margin - 1.0).abs() < 1e-8);
        let w = nt_scaling(&x, &s).unwrap();
        let wsw = conekit::linalg::congruence(&w, &s);
        assert!(wsw.sub(&x).frob_norm() <= 1e-8 * x.frob_norm());
    }
}

#[test]
fn hessian_operator_matches_dense_assembly() {
    // matrix-free Hessian application agrees with the basis-built svec
    // assembly of the scaled operator
    let mut rng = TestRng::new(6161);
    for trial in 0..3 {
        let p = random_feasible_problem(&mut rng, &[3, 2], 6 + trial);
        let op = assemble_operator(&p).unwrap();
        let w = random_block_pd(&mut rng, p.structure(), 0.4);
        let (h, _) = dense_hessian_oracle(&p, &w);
        let m = p.num_constraints();
        for probe in 0..3 {
            let v: Vec<f64> = (0..m).map(|i| ((probe * 31 + i) as f64 * 0.7).sin()).collect();
            let fast = conekit::lowrank::apply_hessian(&op, &w, &v);
            let slow = h.mul_vec(&v);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()), "trial {trial}: {a} vs {b}");
            }
        }
    }
}

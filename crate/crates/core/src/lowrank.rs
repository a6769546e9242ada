//! Iterative back-end for the interior-point Schur complement equation:
//! split the scaling matrix into a well-conditioned part plus a low-rank
//! term, precondition with the Sherman–Morrison–Woodbury inverse of
//! `τ²𝐀ᵀ𝐀 + ŨŨᵀ`, and run conjugate gradients on the exact Hessian.

use crate::cones::{ConicProblem, ConstraintOperator, BlockSymMatrix, PrimalDualPoint};
use crate::error::{Error, Result};
use crate::ipm::{dense_hessian, ipm_solve, HessianSolver, IpmConfig};
use crate::linalg::dense::{cholesky, cholesky_solve, Mat};
use crate::linalg::eig::sym_eig;
use crate::linalg::{congruence, eig_sym, pcg};
use crate::report::SolveReport;

/// One column of the low-rank factor `U`, supported on a single block.
#[derive(Debug, Clone)]
pub struct UColumn {
    pub block: usize,
    pub values: Vec<f64>,
}

/// Decomposition `W = W₀ + UUᵀ` of the interior-point scaling matrix, with
/// `τ` bracketed by the spectrum of `W₀` and `Z Zᵀ = 2·W₀ + UUᵀ` per block.
#[derive(Debug, Clone)]
pub struct ScalingSplit {
    pub w0: BlockSymMatrix,
    pub u: Vec<UColumn>,
    pub tau: f64,
    /// Per-block lower-triangular factors with `ZⱼZⱼᵀ = 2·W₀ⱼ + (UUᵀ)ⱼ`.
    pub z: Vec<Mat>,
}

/// Split the scaling matrix, steering the top of its spectrum into `UUᵀ`.
///
/// Columns are built from eigenpairs whose eigenvalues exceed ten times the
/// median eigenvalue, capped at `theta` columns; each selected eigenvalue is
/// flattened down to the largest non-selected one, so `W₀` keeps the
/// conditioning of the bottom of the spectrum.
pub fn split_scaling(w: &BlockSymMatrix, theta: usize) -> Result<ScalingSplit> {
    let n = w.structure().total_dim();
    if theta == 0 || theta >= n {
        return Err(Error::InvalidArgument(format!(
            "theta must satisfy 1 <= theta < n (got theta={theta}, n={n})"
        )));
    }
    let eig = eig_sym(w)?;
    if eig.min_value() <= 0.0 {
        return Err(Error::NotPositiveDefinite {
            context: "scaling split",
            min_eigenvalue: eig.min_value(),
        });
    }

    let mut all: Vec<(usize, usize, f64)> = Vec::new(); // (block, idx, λ)
    for (blk, be) in eig.blocks.iter().enumerate() {
        for (idx, &v) in be.values.iter().enumerate() {
            all.push((blk, idx, v));
        }
    }
    let mut sorted: Vec<f64> = all.iter().map(|t| t.2).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = sorted[(sorted.len() - 1) / 2];

    let mut candidates: Vec<&(usize, usize, f64)> =
        all.iter().filter(|t| t.2 > 10.0 * median).collect();
    candidates.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap());
    candidates.truncate(theta.min(n - 1));

    let selected: Vec<(usize, usize, f64)> = candidates.into_iter().copied().collect();
    let lambda_ref = all
        .iter()
        .filter(|t| !selected.iter().any(|s| s.0 == t.0 && s.1 == t.1))
        .map(|t| t.2)
        .fold(f64::NEG_INFINITY, f64::max);

    let mut u = Vec::with_capacity(selected.len());
    for &(blk, idx, lam) in &selected {
        let be = &eig.blocks[blk];
        let scale = (lam - lambda_ref).max(0.0).sqrt();
        let col: Vec<f64> = (0..be.vectors.rows()).map(|i| scale * be.vectors[(i, idx)]).collect();
        u.push(UColumn { block: blk, values: col });
    }

    // W₀: selected eigenvalues flattened to λ_ref, others untouched.
    let mut w0_blocks: Vec<Mat> = Vec::new();
    for (blk, be) in eig.blocks.iter().enumerate() {
        let vals: Vec<f64> = be
            .values
            .iter()
            .enumerate()
            .map(|(idx, &v)| {
                if selected.iter().any(|s| s.0 == blk && s.1 == idx) {
                    lambda_ref
                } else {
                    v
                }
            })
            .collect();
        w0_blocks.push(crate::linalg::eig::spectral_apply(&vals, &be.vectors, |x| x));
    }
    let w0 = BlockSymMatrix::from_dense_blocks(w.structure(), &w0_blocks)?;

    let e0 = eig_sym(&w0)?;
    let tau = (e0.min_value() * e0.max_value()).sqrt();

    // Z: per-block Cholesky of 2·W₀ + UUᵀ.
    let mut z = Vec::with_capacity(w0_blocks.len());
    for (blk, w0b) in w0_blocks.iter().enumerate() {
        let nb = w0b.rows();
        let mut m = w0b.scale(2.0);
        for col in u.iter().filter(|c| c.block == blk) {
            for i in 0..nb {
                for j in 0..nb {
                    m[(i, j)] += col.values[i] * col.values[j];
                }
            }
        }
        let l = cholesky(&m, 1e-14).map_err(|piv| Error::NotPositiveDefinite {
            context: "Z factor (2·W0 + UUᵀ)",
            min_eigenvalue: piv,
        })?;
        z.push(l);
    }

    Ok(ScalingSplit { w0, u, tau, z })
}

impl ScalingSplit {
    /// Dense `UUᵀ` as a block symmetric matrix.
    pub fn uut(&self, structure: &crate::cones::BlockStructure) -> BlockSymMatrix {
        let mut blocks: Vec<Mat> =
            structure.sizes().iter().map(|&nb| Mat::zeros(nb, nb)).collect();
        for col in &self.u {
            let b = &mut blocks[col.block];
            for i in 0..col.values.len() {
                for j in 0..col.values.len() {
                    b[(i, j)] += col.values[i] * col.values[j];
                }
            }
        }
        BlockSymMatrix::from_dense_blocks(structure, &blocks).expect("sizes match")
    }
}

/// Matrix-vector product with the Hessian `𝐀ᵀ(W⊗W)𝐀` without forming it:
/// one adjoint, one block congruence, one forward application.
pub fn apply_hessian(op: &ConstraintOperator, w: &BlockSymMatrix, v: &[f64]) -> Vec<f64> {
    op.apply(&congruence(w, &op.adjoint(v)))
}

/// Factored preconditioner `H̃ = τ²𝐀ᵀ𝐀 + ŨŨᵀ` with the Schur complement
/// `𝐒 = τ²I + Ũᵀ(𝐀ᵀ𝐀)⁻¹Ũ` precomputed for Sherman–Morrison–Woodbury solves.
pub struct PreconditionerFactor {
    /// `Ũ` stored column-compressed: one column group per `U` column, each
    /// supported on its block.
    u_tilde: Mat, // m × K
    schur_factor: Option<Mat>, // Cholesky factor of 𝐒 (K×K); None when K = 0
    tau: f64,
}

/// Assemble `Ũ = 𝐀ᵀ(U ⊗ Z)` in svec geometry (row i is `vec(Zᵀ Aᵢ U)` with
/// structural zero segments dropped) and factor the Schur complement.
pub fn build_preconditioner(
    p: &ConicProblem,
    op: &ConstraintOperator,
    split: &ScalingSplit,
) -> Result<PreconditionerFactor> {
    let m = p.num_constraints();
    let sizes = p.structure().sizes();
    let seg_sizes: Vec<usize> = split.u.iter().map(|c| sizes[c.block]).collect();
    let k_total: usize = seg_sizes.iter().sum();

    let mut u_tilde = Mat::zeros(m, k_total);
    for (i, ai) in p.constraints().iter().enumerate() {
        let mut offset = 0;
        for col in &split.u {
            let nb = sizes[col.block];
            let ab = ai.block_dense(col.block);
            let t = ab.mul_vec(&col.values); // Aᵢ u_c
            let zb = &split.z[col.block];
            // Zᵀ t
            for r in 0..nb {
                let mut acc = 0.0;
                for q in 0..nb {
                    acc += zb[(q, r)] * t[q];
                }
                u_tilde[(i, offset + r)] = acc;
            }
            offset += nb;
        }
    }

    let schur_factor = if k_total == 0 {
        None
    } else {
        let mut ginv_cols = Vec::with_capacity(k_total);
        for k in 0..k_total {
            let colk: Vec<f64> = (0..m).map(|i| u_tilde[(i, k)]).collect();
            ginv_cols.push(op.solve_normal(&colk));
        }
        let tau2 = split.tau * split.tau;
        let schur = Mat::from_fn(k_total, k_total, |a, b| {
            let mut acc = if a == b { tau2 } else { 0.0 };
            for i in 0..m {
                acc += u_tilde[(i, a)] * ginv_cols[b][i];
            }
            acc
        })
        .symmetrize();
        let l = cholesky(&schur, 1e-14).map_err(|piv| Error::NotPositiveDefinite {
            context: "preconditioner Schur complement",
            min_eigenvalue: piv,
        })?;
        Some(l)
    };

    Ok(PreconditionerFactor { u_tilde, schur_factor, tau: split.tau })
}

impl PreconditionerFactor {
    pub fn low_rank_cols(&self) -> usize {
        self.u_tilde.cols()
    }

    /// Dense `H̃ = τ²𝐀ᵀ𝐀 + ŨŨᵀ`, for diagnostics and tests.
    pub fn dense(&self, op: &ConstraintOperator) -> Mat {
        let m = op.num_constraints();
        let tau2 = self.tau * self.tau;
        let mut h = op.gram().scale(tau2);
        for i in 0..m {
            for j in 0..m {
                let mut acc = 0.0;
                for k in 0..self.u_tilde.cols() {
                    acc += self.u_tilde[(i, k)] * self.u_tilde[(j, k)];
                }
                h[(i, j)] += acc;
            }
        }
        h.symmetrize()
    }
}

/// Sherman–Morrison–Woodbury solve
/// `H̃⁻¹ r = (τ²𝐀ᵀ𝐀)⁻¹ (r − Ũ 𝐒⁻¹ Ũᵀ (𝐀ᵀ𝐀)⁻¹ r)`.
pub fn apply_preconditioner(
    pf: &PreconditionerFactor,
    op: &ConstraintOperator,
    r: &[f64],
) -> Vec<f64> {
    let tau2 = pf.tau * pf.tau;
    let g_inv_r = op.solve_normal(r);
    let corrected: Vec<f64> = match &pf.schur_factor {
        None => r.to_vec(),
        Some(l) => {
            let k = pf.u_tilde.cols();
            let m = r.len();
            let mut ut_ginv_r = vec![0.0; k];
            for kk in 0..k {
                for i in 0..m {
                    ut_ginv_r[kk] += pf.u_tilde[(i, kk)] * g_inv_r[i];
                }
            }
            let s = cholesky_solve(l, &ut_ginv_r);
            let mut out = r.to_vec();
            for i in 0..m {
                let mut acc = 0.0;
                for kk in 0..k {
                    acc += pf.u_tilde[(i, kk)] * s[kk];
                }
                out[i] -= acc;
            }
            out
        }
    };
    op.solve_normal(&corrected).iter().map(|x| x / tau2).collect()
}

/// Solve one Hessian equation by PCG with the split-scaling preconditioner.
/// Falls back to a dense factorization when the preconditioner cannot be
/// built or PCG stalls; the flag in the return value records the fallback.
pub(crate) fn pcg_hessian_solve(
    p: &ConicProblem,
    op: &ConstraintOperator,
    w: &BlockSymMatrix,
    rhs: &[f64],
    theta: usize,
    eps: f64,
) -> Result<(Vec<f64>, usize, bool)> {
    let m = p.num_constraints();
    let max_iter = 10 * m + 100;

    let n = p.total_dim();
    let theta_eff = theta.min(n.saturating_sub(1)).max(1);
    let prepared: Result<(ScalingSplit, PreconditionerFactor)> = (|| {
        let split = split_scaling(w, theta_eff)?;
        let pf = build_preconditioner(p, op, &split)?;
        Ok((split, pf))
    })();

    match prepared {
        Ok((_split, pf)) => {
            let apply_h = |v: &[f64]| apply_hessian(op, w, v);
            let apply_m = |v: &[f64]| apply_preconditioner(&pf, op, v);
            let out = pcg(&apply_h, &apply_m, rhs, eps, max_iter)?;
            if out.converged {
                Ok((out.solution, out.iterations, false))
            } else {
                let y = dense_fallback(p, op, w, rhs)?;
                Ok((y, out.iterations, true))
            }
        }
        Err(Error::LostInteriority { .. }) | Err(Error::NotPositiveDefinite { .. }) => {
            let y = dense_fallback(p, op, w, rhs)?;
            Ok((y, 0, true))
        }
        Err(e) => Err(e),
    }
}

fn dense_fallback(
    p: &ConicProblem,
    op: &ConstraintOperator,
    w: &BlockSymMatrix,
    rhs: &[f64],
) -> Result<Vec<f64>> {
    let h = dense_hessian(p, op, w);
    crate::ipm::schur_solve_regularized(&h, rhs)
}

/// Exact joint condition number `κ = λ_max(H̃⁻¹H)/λ_min(H̃⁻¹H)` by dense
/// assembly. Diagnostics only; refuses instances with more than 200
/// constraints.
pub fn condition_diagnostic(
    p: &ConicProblem,
    op: &ConstraintOperator,
    w: &BlockSymMatrix,
    split: &ScalingSplit,
) -> Result<f64> {
    let m = p.num_constraints();
    if m > 200 {
        return Err(Error::Unsupported(format!(
            "condition diagnostic limited to m <= 200 (got {m})"
        )));
    }
    let h = dense_hessian(p, op, w);
    let pf = build_preconditioner(p, op, split)?;
    let h_tilde = pf.dense(op);
    let l = cholesky(&h_tilde, 1e-14).map_err(|piv| Error::NotPositiveDefinite {
        context: "condition diagnostic",
        min_eigenvalue: piv,
    })?;
    // B = L⁻¹ H L⁻ᵀ has the eigenvalues of H̃⁻¹H.
    let mut b = Mat::zeros(m, m);
    for j in 0..m {
        let colj: Vec<f64> = (0..m).map(|i| h[(i, j)]).collect();
        let w1 = forward_sub(&l, &colj);
        for i in 0..m {
            b[(i, j)] = w1[i];
        }
    }
    let mut bt = b.transpose();
    for j in 0..m {
        let colj: Vec<f64> = (0..m).map(|i| bt[(i, j)]).collect();
        let w1 = forward_sub(&l, &colj);
        for i in 0..m {
            bt[(i, j)] = w1[i];
        }
    }
    let sym = bt.symmetrize();
    let (vals, _) = sym_eig(&sym)?;
    let lo = vals.first().copied().unwrap_or(1.0);
    let hi = vals.last().copied().unwrap_or(1.0);
    if lo <= 0.0 {
        return Err(Error::NotPositiveDefinite {
            context: "condition diagnostic spectrum",
            min_eigenvalue: lo,
        });
    }
    Ok(hi / lo)
}

fn forward_sub(l: &Mat, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    let mut x = b.to_vec();
    for i in 0..n {
        let mut s = x[i];
        for k in 0..i {
            s -= l[(i, k)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    x
}

/// Interior-point solve with the iterative Hessian back-end. `theta` is the
/// caller's a-priori bound on the rank of the primal solution.
pub fn lr_ipm_solve(
    p: &ConicProblem,
    cfg: &IpmConfig,
    theta: usize,
) -> Result<(PrimalDualPoint, SolveReport)> {
    let n = p.total_dim();
    if theta == 0 || theta >= n {
        return Err(Error::InvalidArgument(format!(
            "theta must satisfy 1 <= theta < n (got theta={theta}, n={n})"
        )));
    }
    let mut cfg = *cfg;
    cfg.hessian_solver = HessianSolver::PcgLowRank { theta };
    ipm_solve(p, &cfg)
}

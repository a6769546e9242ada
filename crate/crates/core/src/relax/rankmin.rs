//! Nuclear-norm relaxation of affine rank minimization: embed the
//! rectangular variable in a symmetric block and minimize the trace.

use crate::cones::{BlockStructure, BlockSymMatrix, ConicProblem};
use crate::error::{Error, Result};
use crate::linalg::dense::Mat;

/// Relax `min rank(Y) s.t. trace(N_k Y) ≤ a_k` over `Y ∈ ℝ^{rows×cols}`,
/// where each `N_k ∈ ℝ^{cols×rows}`. `Y` is embedded as the off-diagonal
/// corner of `X = [[Z₁, Y], [Yᵀ, Z₂]] ⪰ 0` with
/// `M_k = [[0, ½N_kᵀ], [½N_k, 0]]`, so `trace(M_k X) = trace(N_k Y)`, and
/// the rank objective is replaced by `trace(X)` (`rank(Y) ≤ rank(X)`).
///
/// Returns the lifted problem and the `(rows, cols)` shape of `Y`.
pub fn rankmin_to_sdp(n_mats: &[Mat], a: &[f64]) -> Result<(ConicProblem, (usize, usize))> {
    if n_mats.is_empty() {
        return Err(Error::InvalidArgument("at least one affine constraint required".into()));
    }
    if n_mats.len() != a.len() {
        return Err(Error::DimensionMismatch {
            context: "rank-minimization right-hand sides",
            expected: n_mats.len(),
            got: a.len(),
        });
    }
    let cols = n_mats[0].rows();
    let rows = n_mats[0].cols();
    for nk in n_mats {
        if nk.rows() != cols || nk.cols() != rows {
            return Err(Error::DimensionMismatch {
                context: "rank-minimization constraint matrices",
                expected: cols * rows,
                got: nk.rows() * nk.cols(),
            });
        }
    }

    let dim = rows + cols;
    let p_count = n_mats.len();
    let mut sizes = vec![dim];
    sizes.resize(1 + p_count, 1);
    let st = BlockStructure::new(sizes)?;

    // objective trace(X) on the main block; slacks carry no cost
    let mut c = BlockSymMatrix::identity(&st);
    for k in 1..=p_count {
        c.set(k, 0, 0, 0.0);
    }

    let mut a_mats = Vec::with_capacity(p_count);
    for (k, nk) in n_mats.iter().enumerate() {
        let mut ak = BlockSymMatrix::zeros(&st);
        // M_k: upper-left and lower-right zero, corner ½N_kᵀ
        for i in 0..rows {
            for j in 0..cols {
                ak.set(0, rows + j, i, 0.5 * nk[(j, i)]);
            }
        }
        ak.set(k + 1, 0, 0, 1.0); // slack turns ≤ into =
        a_mats.push(ak);
    }

    Ok((ConicProblem::new(st, c, a_mats, a.to_vec())?, (rows, cols)))
}

/// Read the `rows×cols` corner `Y` back out of a lifted solution block.
pub fn extract_y(x_block: &Mat, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |i, j| x_block[(i, rows + j)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::inner;

    #[test]
    fn lifted_trace_matches_rectangular_trace() {
        // trace(M_k X) = trace(N_k Y) on a planted embedding
        let rows = 2;
        let cols = 3;
        let n1 = Mat::from_fn(cols, rows, |i, j| (i + 2 * j) as f64 - 1.5);
        let (p, shape) = rankmin_to_sdp(std::slice::from_ref(&n1), &[4.0]).unwrap();
        assert_eq!(shape, (rows, cols));
        let y = Mat::from_fn(rows, cols, |i, j| 0.5 * (i as f64) - 0.25 * (j as f64) + 0.3);
        // X = [[I, Y],[Yᵀ, I]] embeds Y
        let dim = rows + cols;
        let mut x = BlockSymMatrix::zeros(p.structure());
        for i in 0..dim {
            x.set(0, i, i, 1.0);
        }
        for i in 0..rows {
            for j in 0..cols {
                x.set(0, rows + j, i, y[(i, j)]);
            }
        }
        let lifted = inner(&p.constraints()[0], &x).unwrap();
        let direct = {
            let prod = n1.mul(&y);
            (0..cols).map(|i| prod[(i, i)]).sum::<f64>()
        };
        assert!((lifted - direct).abs() < 1e-12);
        // objective is trace of the main block only
        assert!((p.primal_objective(&x) - dim as f64).abs() < 1e-12);
        // extraction inverts the embedding
        let back = extract_y(&x.block_dense(0), rows, cols);
        assert!(back.sub(&y).frob_norm() < 1e-14);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let n1 = Mat::zeros(2, 3);
        let n2 = Mat::zeros(3, 2);
        assert!(rankmin_to_sdp(&[n1, n2], &[0.0, 0.0]).is_err());
    }
}

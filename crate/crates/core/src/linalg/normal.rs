//! Cached solver for the normal equations `(𝐀ᵀ𝐀) z = r`.
//!
//! The Gram matrix is permuted with a greedy minimum-degree ordering before
//! the Cholesky factorization. Factorization doubles as the rank check of
//! the stacked constraint operator: a pivot below `1e-10` times the largest
//! pivot flags rank deficiency.

use crate::error::{Error, Result};
use crate::linalg::dense::{cholesky, cholesky_solve, Mat};

const RANK_PIVOT_TOL: f64 = 1e-10;

/// Immutable factorization handle; shareable across threads.
pub struct NormalEqSolver {
    perm: Vec<usize>,
    factor: Mat,
}

impl NormalEqSolver {
    /// Factor a symmetric positive definite Gram matrix.
    pub fn new(gram: &Mat) -> Result<Self> {
        assert_eq!(gram.rows(), gram.cols());
        let perm = minimum_degree_order(gram);
        let m = gram.rows();
        let permuted = Mat::from_fn(m, m, |i, j| gram[(perm[i], perm[j])]);
        let factor = cholesky(&permuted, RANK_PIVOT_TOL).map_err(|pivot| {
            Error::DegenerateData { min_singular_value: pivot.max(0.0).sqrt() }
        })?;
        Ok(NormalEqSolver { perm, factor })
    }

    pub fn dim(&self) -> usize {
        self.factor.rows()
    }

    /// Solve `(𝐀ᵀ𝐀) z = r`.
    pub fn solve(&self, r: &[f64]) -> Vec<f64> {
        let m = self.dim();
        assert_eq!(r.len(), m);
        let rp: Vec<f64> = (0..m).map(|i| r[self.perm[i]]).collect();
        let zp = cholesky_solve(&self.factor, &rp);
        let mut z = vec![0.0; m];
        for i in 0..m {
            z[self.perm[i]] = zp[i];
        }
        z
    }
}

/// Greedy minimum-degree elimination ordering on the nonzero pattern of a
/// symmetric matrix. Fill edges are tracked explicitly; fine at the problem
/// sizes this crate targets.
fn minimum_degree_order(m: &Mat) -> Vec<usize> {
    let n = m.rows();
    let mut adj: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i != j && m[(i, j)] != 0.0).collect())
        .collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&i| alive[i])
            .min_by_key(|&i| (0..n).filter(|&j| alive[j] && adj[i][j]).count())
            .expect("some vertex alive");
        order.push(v);
        alive[v] = false;
        let nbrs: Vec<usize> = (0..n).filter(|&j| alive[j] && adj[v][j]).collect();
        for (a, &p) in nbrs.iter().enumerate() {
            for &q in &nbrs[a + 1..] {
                adj[p][q] = true;
                adj[q][p] = true;
            }
        }
    }
    order
}

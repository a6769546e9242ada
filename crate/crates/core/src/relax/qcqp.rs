//! Semidefinite relaxation of quadratically-constrained quadratic programs
//! (the Shor lift), rank-one solution recovery, and the first-order moment
//! relaxation of quadratic polynomial problems, which coincides with the
//! Shor lift.

use crate::cones::{BlockStructure, BlockSymMatrix, ConicProblem};
use crate::error::{Error, Result};
use crate::linalg::dense::Mat;
use crate::linalg::eig::sym_eig;
use crate::relax::poly::Polynomial;

/// Nonconvex source problem
/// `min xᵀA₀x + 2b₀ᵀx + c₀  s.t.  xᵀA_kx + 2b_kᵀx + c_k ≤ 0, k = 1..m`
/// over `x ∈ ℝ^{n−1}`.
#[derive(Debug, Clone)]
pub struct Qcqp {
    a: Vec<Mat>,
    b: Vec<Vec<f64>>,
    c: Vec<f64>,
}

impl Qcqp {
    /// Index 0 carries the objective; indices 1.. carry the constraints.
    pub fn new(a: Vec<Mat>, b: Vec<Vec<f64>>, c: Vec<f64>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() || a.len() != c.len() {
            return Err(Error::InvalidArgument(
                "QCQP needs matching non-empty A, b, c lists".into(),
            ));
        }
        let dim = a[0].rows();
        for (ak, bk) in a.iter().zip(&b) {
            if ak.rows() != dim || ak.cols() != dim {
                return Err(Error::DimensionMismatch {
                    context: "QCQP A_k",
                    expected: dim,
                    got: ak.rows(),
                });
            }
            if bk.len() != dim {
                return Err(Error::DimensionMismatch {
                    context: "QCQP b_k",
                    expected: dim,
                    got: bk.len(),
                });
            }
        }
        let a = a.into_iter().map(|m| m.symmetrize()).collect();
        Ok(Qcqp { a, b, c })
    }

    /// Number of decision variables (`n − 1` in the lifted dimension).
    pub fn dim(&self) -> usize {
        self.a[0].rows()
    }

    /// Number of inequality constraints.
    pub fn num_constraints(&self) -> usize {
        self.a.len() - 1
    }

    /// Value of the k-th quadratic form (0 = objective).
    pub fn form_value(&self, k: usize, x: &[f64]) -> f64 {
        let ax = self.a[k].mul_vec(x);
        let xax: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
        let bx: f64 = self.b[k].iter().zip(x).map(|(a, b)| a * b).sum();
        xax + 2.0 * bx + self.c[k]
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.form_value(0, x)
    }

    /// Largest constraint violation `max_k (xᵀA_kx + 2b_kᵀx + c_k)₊`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        (1..self.a.len()).map(|k| self.form_value(k, x).max(0.0)).fold(0.0, f64::max)
    }

    /// The lifted matrix `M_k = [[c_k, b_kᵀ], [b_k, A_k]]`.
    pub fn lifted_matrix(&self, k: usize) -> Mat {
        let d = self.dim();
        Mat::from_fn(d + 1, d + 1, |i, j| match (i, j) {
            (0, 0) => self.c[k],
            (0, j) => self.b[k][j - 1],
            (i, 0) => self.b[k][i - 1],
            (i, j) => self.a[k][(i - 1, j - 1)],
        })
    }
}

/// Shor relaxation: lift `x` to `X = [1; x][1 xᵀ]`, drop the rank
/// constraint. The relaxation is the standard-form problem
/// `min M₀∙X  s.t.  M_k∙X + s_k = 0 (s_k ≥ 0), X₁₁ = 1, X ⪰ 0`,
/// with one size-1 slack block per inequality.
pub fn qcqp_to_sdp(q: &Qcqp) -> Result<ConicProblem> {
    let n = q.dim() + 1;
    let m_ineq = q.num_constraints();
    let mut sizes = vec![n];
    sizes.resize(1 + m_ineq, 1);
    let st = BlockStructure::new(sizes)?;

    let set_lifted = |mat: &mut BlockSymMatrix, k: usize| {
        let lifted = q.lifted_matrix(k);
        for i in 0..n {
            for j in 0..=i {
                mat.set(0, i, j, lifted[(i, j)]);
            }
        }
    };

    let mut c = BlockSymMatrix::zeros(&st);
    set_lifted(&mut c, 0);

    let mut a = Vec::with_capacity(m_ineq + 1);
    let mut b = Vec::with_capacity(m_ineq + 1);
    for k in 1..=m_ineq {
        let mut ak = BlockSymMatrix::zeros(&st);
        set_lifted(&mut ak, k);
        ak.set(k, 0, 0, 1.0); // slack for the inequality
        a.push(ak);
        b.push(0.0);
    }
    let mut a_corner = BlockSymMatrix::zeros(&st);
    a_corner.set(0, 0, 0, 1.0);
    a.push(a_corner);
    b.push(1.0);

    ConicProblem::new(st, c, a, b)
}

/// Outcome of attempting to read a rank-one solution out of a lifted moment
/// matrix.
#[derive(Debug, Clone)]
pub enum Rank1Recovery {
    /// The matrix is numerically rank one; the recovered source point.
    Point(Vec<f64>),
    /// Not rank one: eigenvalues in descending order, for inspection.
    Inexact { eigenvalues: Vec<f64> },
}

/// Recover `x` from the leading eigenvector of a lifted solution block when
/// `λ₂/λ₁ ≤ tol`; otherwise report the eigenvalue profile.
pub fn recover_rank1(x_mat: &Mat, tol: f64) -> Result<Rank1Recovery> {
    if x_mat.rows() != x_mat.cols() || x_mat.rows() < 2 {
        return Err(Error::InvalidArgument("lifted solution must be square, size >= 2".into()));
    }
    let x11 = x_mat[(0, 0)];
    if (x11 - 1.0).abs() > 1e-4 {
        return Err(Error::InvalidArgument(format!(
            "malformed relaxation solution: X₁₁ = {x11} is far from 1"
        )));
    }
    let (vals, vecs) = sym_eig(&x_mat.symmetrize())?;
    let n = vals.len();
    let lam1 = vals[n - 1];
    let lam2 = vals[n - 2].max(0.0);
    if lam1 <= 0.0 {
        return Err(Error::NotPositiveDefinite {
            context: "rank-one recovery",
            min_eigenvalue: lam1,
        });
    }
    if lam2 / lam1 <= tol {
        let lead: Vec<f64> = (0..n).map(|i| vecs[(i, n - 1)]).collect();
        if lead[0].abs() < 1e-8 {
            return Err(Error::InvalidArgument(
                "leading eigenvector has vanishing first coordinate".into(),
            ));
        }
        let x: Vec<f64> = lead[1..].iter().map(|v| v / lead[0]).collect();
        Ok(Rank1Recovery::Point(x))
    } else {
        let mut descending = vals;
        descending.reverse();
        Ok(Rank1Recovery::Inexact { eigenvalues: descending })
    }
}

/// Extract `(A, b, c)` with `p(x) = xᵀAx + 2bᵀx + c` from a polynomial of
/// degree at most two.
pub fn quadratic_parts(p: &Polynomial) -> Result<(Mat, Vec<f64>, f64)> {
    if p.degree() > 2 {
        return Err(Error::Unsupported(format!(
            "degree {} polynomial; only quadratics are supported",
            p.degree()
        )));
    }
    let d = p.nvars();
    let mut a = Mat::zeros(d, d);
    let mut b = vec![0.0; d];
    let mut c = 0.0;
    for (exps, coef) in p.terms() {
        let support: Vec<usize> =
            exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i).collect();
        match support.as_slice() {
            [] => c = coef,
            [i] if exps[*i] == 1 => b[*i] = coef / 2.0,
            [i] if exps[*i] == 2 => a[(*i, *i)] = coef,
            [i, j] => {
                a[(*i, *j)] = coef / 2.0;
                a[(*j, *i)] = coef / 2.0;
            }
            _ => unreachable!("degree bound enforced above"),
        }
    }
    Ok((a, b, c))
}

/// First-order moment relaxation of
/// `min f(x)  s.t.  gᵢ(x) ≥ 0` with all degrees ≤ 2. Coincides with
/// [`qcqp_to_sdp`] on the induced quadratic program (each `gᵢ ≥ 0` becomes
/// `−gᵢ ≤ 0`), and is implemented through it.
pub fn lasserre1_sdp(f: &Polynomial, g: &[Polynomial]) -> Result<ConicProblem> {
    let q = induced_qcqp(f, g)?;
    qcqp_to_sdp(&q)
}

/// The quadratic program induced by polynomial data of degree ≤ 2.
pub fn induced_qcqp(f: &Polynomial, g: &[Polynomial]) -> Result<Qcqp> {
    let d = f.nvars();
    let mut a = Vec::with_capacity(1 + g.len());
    let mut b = Vec::with_capacity(1 + g.len());
    let mut c = Vec::with_capacity(1 + g.len());
    let (a0, b0, c0) = quadratic_parts(f)?;
    a.push(a0);
    b.push(b0);
    c.push(c0);
    for gi in g {
        if gi.nvars() != d {
            return Err(Error::DimensionMismatch {
                context: "constraint polynomial arity",
                expected: d,
                got: gi.nvars(),
            });
        }
        let (ak, bk, ck) = quadratic_parts(&gi.scale(-1.0))?;
        a.push(ak);
        b.push(bk);
        c.push(ck);
    }
    Qcqp::new(a, b, c)
}

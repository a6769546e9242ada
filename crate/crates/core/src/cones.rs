//! Problem data model for block-structured semidefinite programs and the
//! symmetric-matrix vector algebra shared by every solver.
//!
//! A problem lives on a Cartesian product of semidefinite blocks; size-1
//! blocks encode nonnegative scalars, so linear programs are the special
//! case where every block has size 1.
//!
//! Vectorization uses the isometric symmetric form (`svec`): off-diagonal
//! entries are scaled by √2 so that `svec(A)ᵀ svec(B) = A∙B`. All Kronecker
//! formulas from the dense-vectorization literature are implemented through
//! their svec-space equivalents.

use crate::error::{Error, Result};
use crate::linalg::dense::{dot, norm_inf, Mat};
use crate::linalg::normal::NormalEqSolver;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Side lengths of the semidefinite blocks making up the cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockStructure {
    sizes: Vec<usize>,
}

impl BlockStructure {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidArgument("block structure must be non-empty".into()));
        }
        if sizes.contains(&0) {
            return Err(Error::InvalidArgument("block sizes must be positive".into()));
        }
        Ok(BlockStructure { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn block_count(&self) -> usize {
        self.sizes.len()
    }

    /// Total matrix dimension `n = Σ nⱼ`.
    pub fn total_dim(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Length of the symmetric vectorization, `Σ nⱼ(nⱼ+1)/2`.
    pub fn svec_len(&self) -> usize {
        self.sizes.iter().map(|&n| n * (n + 1) / 2).sum()
    }

    fn describe(&self) -> String {
        format!("{:?}", self.sizes)
    }
}

/// One dense symmetric matrix per block. Only the lower triangle is stored,
/// so symmetry holds by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSymMatrix {
    structure: BlockStructure,
    /// Packed lower triangles, column-major within each block.
    data: Vec<Vec<f64>>,
}

fn packed_index(n: usize, r: usize, c: usize) -> usize {
    // requires r >= c; column-major lower triangle
    debug_assert!(c <= r && r < n);
    c * n - c * (c + 1) / 2 + r
}

impl BlockSymMatrix {
    pub fn zeros(structure: &BlockStructure) -> Self {
        let data = structure.sizes().iter().map(|&n| vec![0.0; n * (n + 1) / 2]).collect();
        BlockSymMatrix { structure: structure.clone(), data }
    }

    pub fn identity(structure: &BlockStructure) -> Self {
        Self::scaled_identity(structure, 1.0)
    }

    pub fn scaled_identity(structure: &BlockStructure, rho: f64) -> Self {
        let mut m = Self::zeros(structure);
        for (blk, &n) in structure.sizes().iter().enumerate() {
            for i in 0..n {
                m.set(blk, i, i, rho);
            }
        }
        m
    }

    /// Build from one dense matrix per block; each block is symmetrized.
    pub fn from_dense_blocks(structure: &BlockStructure, blocks: &[Mat]) -> Result<Self> {
        if blocks.len() != structure.block_count() {
            return Err(Error::DimensionMismatch {
                context: "from_dense_blocks",
                expected: structure.block_count(),
                got: blocks.len(),
            });
        }
        let mut out = Self::zeros(structure);
        for (blk, mat) in blocks.iter().enumerate() {
            let n = structure.sizes()[blk];
            if mat.rows() != n || mat.cols() != n {
                return Err(Error::DimensionMismatch {
                    context: "from_dense_blocks block size",
                    expected: n,
                    got: mat.rows(),
                });
            }
            for c in 0..n {
                for r in c..n {
                    out.set(blk, r, c, 0.5 * (mat[(r, c)] + mat[(c, r)]));
                }
            }
        }
        Ok(out)
    }

    pub fn structure(&self) -> &BlockStructure {
        &self.structure
    }

    pub fn get(&self, blk: usize, i: usize, j: usize) -> f64 {
        let n = self.structure.sizes()[blk];
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        self.data[blk][packed_index(n, r, c)]
    }

    /// Set entry (i, j) and its mirror (j, i).
    pub fn set(&mut self, blk: usize, i: usize, j: usize, v: f64) {
        let n = self.structure.sizes()[blk];
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        self.data[blk][packed_index(n, r, c)] = v;
    }

    pub fn add_assign_scaled(&mut self, alpha: f64, other: &BlockSymMatrix) {
        debug_assert_eq!(self.structure, other.structure);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += alpha * y;
            }
        }
    }

    pub fn scale(&self, alpha: f64) -> BlockSymMatrix {
        let mut out = self.clone();
        for blk in out.data.iter_mut() {
            for x in blk.iter_mut() {
                *x *= alpha;
            }
        }
        out
    }

    pub fn add(&self, other: &BlockSymMatrix) -> BlockSymMatrix {
        let mut out = self.clone();
        out.add_assign_scaled(1.0, other);
        out
    }

    pub fn sub(&self, other: &BlockSymMatrix) -> BlockSymMatrix {
        let mut out = self.clone();
        out.add_assign_scaled(-1.0, other);
        out
    }

    pub fn frob_norm(&self) -> f64 {
        inner(self, self).expect("same structure").max(0.0).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().flat_map(|b| b.iter()).fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|b| b.iter().all(|x| x.is_finite()))
    }

    /// Dense copy of one block.
    pub fn block_dense(&self, blk: usize) -> Mat {
        let n = self.structure.sizes()[blk];
        Mat::from_fn(n, n, |i, j| self.get(blk, i, j))
    }

    /// Dense copies of all blocks.
    pub fn dense_blocks(&self) -> Vec<Mat> {
        (0..self.structure.block_count()).map(|b| self.block_dense(b)).collect()
    }

    /// Iterate stored entries as `(block, row, col, value)` with `row ≥ col`.
    pub fn lower_entries(&self) -> impl Iterator<Item = (usize, usize, usize, f64)> + '_ {
        self.structure.sizes().iter().enumerate().flat_map(move |(blk, &n)| {
            (0..n).flat_map(move |c| (c..n).map(move |r| (blk, r, c, self.get(blk, r, c))))
        })
    }
}

/// Isometric symmetric vectorization: off-diagonals scaled by √2 so that
/// `svec(A)ᵀ svec(B) = A∙B`.
pub fn svec(m: &BlockSymMatrix) -> Vec<f64> {
    let mut v = Vec::with_capacity(m.structure.svec_len());
    for (blk, &n) in m.structure.sizes().iter().enumerate() {
        for c in 0..n {
            for r in c..n {
                let x = m.get(blk, r, c);
                v.push(if r == c { x } else { SQRT2 * x });
            }
        }
    }
    v
}

/// Inverse of [`svec`].
pub fn smat(v: &[f64], structure: &BlockStructure) -> Result<BlockSymMatrix> {
    if v.len() != structure.svec_len() {
        return Err(Error::DimensionMismatch {
            context: "smat",
            expected: structure.svec_len(),
            got: v.len(),
        });
    }
    let mut m = BlockSymMatrix::zeros(structure);
    let mut k = 0;
    for (blk, &n) in structure.sizes().iter().enumerate() {
        for c in 0..n {
            for r in c..n {
                let x = v[k];
                k += 1;
                m.set(blk, r, c, if r == c { x } else { x / SQRT2 });
            }
        }
    }
    Ok(m)
}

/// Matrix inner product `A∙B = Σ_blocks trace(AⱼBⱼ)`.
pub fn inner(a: &BlockSymMatrix, b: &BlockSymMatrix) -> Result<f64> {
    if a.structure != b.structure {
        return Err(Error::StructureMismatch {
            expected: a.structure.describe(),
            got: b.structure.describe(),
        });
    }
    let mut acc = 0.0;
    for (blk, &n) in a.structure.sizes().iter().enumerate() {
        let (da, db) = (&a.data[blk], &b.data[blk]);
        let mut k = 0;
        for c in 0..n {
            for r in c..n {
                let w = if r == c { 1.0 } else { 2.0 };
                acc += w * da[k] * db[k];
                k += 1;
            }
        }
    }
    Ok(acc)
}

/// `A X B`, the matrix behind the Kronecker identity
/// `vec(AXB) = (Bᵀ ⊗ A) vec X`.
pub fn kron_apply(a: &Mat, b: &Mat, x: &Mat) -> Result<Mat> {
    if a.cols() != x.rows() {
        return Err(Error::DimensionMismatch {
            context: "kron_apply (A·X)",
            expected: a.cols(),
            got: x.rows(),
        });
    }
    if x.cols() != b.rows() {
        return Err(Error::DimensionMismatch {
            context: "kron_apply (X·B)",
            expected: x.cols(),
            got: b.rows(),
        });
    }
    Ok(a.mul(x).mul(b))
}

/// Standard-form problem data: minimize `C∙X` subject to `Aᵢ∙X = bᵢ`, `X ⪰ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConicProblem {
    structure: BlockStructure,
    c: BlockSymMatrix,
    a: Vec<BlockSymMatrix>,
    b: Vec<f64>,
}

impl ConicProblem {
    pub fn new(
        structure: BlockStructure,
        c: BlockSymMatrix,
        a: Vec<BlockSymMatrix>,
        b: Vec<f64>,
    ) -> Result<Self> {
        if *c.structure() != structure {
            return Err(Error::StructureMismatch {
                expected: structure.describe(),
                got: c.structure().describe(),
            });
        }
        for ai in &a {
            if *ai.structure() != structure {
                return Err(Error::StructureMismatch {
                    expected: structure.describe(),
                    got: ai.structure().describe(),
                });
            }
        }
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                context: "constraint count vs b length",
                expected: a.len(),
                got: b.len(),
            });
        }
        if a.len() > structure.svec_len() {
            return Err(Error::InvalidArgument(format!(
                "{} constraints exceed the {} degrees of freedom of the cone",
                a.len(),
                structure.svec_len()
            )));
        }
        if !c.is_finite() || !b.iter().all(|x| x.is_finite()) || !a.iter().all(|ai| ai.is_finite())
        {
            return Err(Error::NonFinite { context: "problem data" });
        }
        Ok(ConicProblem { structure, c, a, b })
    }

    pub fn structure(&self) -> &BlockStructure {
        &self.structure
    }

    pub fn c(&self) -> &BlockSymMatrix {
        &self.c
    }

    pub fn constraints(&self) -> &[BlockSymMatrix] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn num_constraints(&self) -> usize {
        self.a.len()
    }

    pub fn total_dim(&self) -> usize {
        self.structure.total_dim()
    }

    /// Primal objective `C∙X`.
    pub fn primal_objective(&self, x: &BlockSymMatrix) -> f64 {
        inner(&self.c, x).expect("structure checked at construction")
    }

    /// Dual objective `bᵀy`.
    pub fn dual_objective(&self, y: &[f64]) -> f64 {
        dot(&self.b, y)
    }
}

/// Primal-dual iterate `(X, y, S)` with its barrier parameter.
#[derive(Debug, Clone)]
pub struct PrimalDualPoint {
    pub x: BlockSymMatrix,
    pub y: Vec<f64>,
    pub s: BlockSymMatrix,
    /// `μ = (X∙S)/n` with `n` the total matrix dimension.
    pub mu: f64,
}

impl PrimalDualPoint {
    pub fn new(x: BlockSymMatrix, y: Vec<f64>, s: BlockSymMatrix) -> Result<Self> {
        let n = x.structure().total_dim() as f64;
        let mu = inner(&x, &s)? / n;
        Ok(PrimalDualPoint { x, y, s, mu })
    }
}

/// Scaled KKT residuals of a primal-dual point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    /// `max_i |Aᵢ∙X − bᵢ| / (1 + ‖b‖∞)`
    pub primal: f64,
    /// `‖Σ yᵢAᵢ + S − C‖_F / (1 + ‖C‖_F)`
    pub dual: f64,
    /// `X∙S / (1 + |C∙X| + |bᵀy|)`
    pub gap: f64,
}

impl Residuals {
    pub fn combined(&self) -> f64 {
        self.primal.max(self.dual).max(self.gap)
    }
}

/// Scaled residuals shared by every solver's stopping test.
pub fn residuals(p: &ConicProblem, pt: &PrimalDualPoint) -> Residuals {
    let mut primal_abs = 0.0f64;
    for (ai, bi) in p.a.iter().zip(&p.b) {
        let v = inner(ai, &pt.x).expect("structure checked");
        primal_abs = primal_abs.max((v - bi).abs());
    }
    let primal = primal_abs / (1.0 + norm_inf(&p.b));

    let mut dual_mat = p.c.clone();
    dual_mat.add_assign_scaled(-1.0, &pt.s);
    for (ai, &yi) in p.a.iter().zip(&pt.y) {
        dual_mat.add_assign_scaled(-yi, ai);
    }
    let dual = dual_mat.frob_norm() / (1.0 + p.c.frob_norm());

    let cx = p.primal_objective(&pt.x);
    let by = p.dual_objective(&pt.y);
    let xs = inner(&pt.x, &pt.s).expect("structure checked");
    let gap = xs / (1.0 + cx.abs() + by.abs());

    Residuals { primal, dual, gap }
}

/// Assembled constraint operator: sparse svec columns of
/// `𝐀 = [svec A₁, …, svec A_m]` plus a cached factorization of `𝐀ᵀ𝐀`.
///
/// Assembly verifies Assumption 1 (full column rank of `𝐀`).
pub struct ConstraintOperator {
    structure: BlockStructure,
    /// Sparse columns: (svec index, value) pairs, sorted by index.
    columns: Vec<Vec<(usize, f64)>>,
    gram: Mat,
    normal: NormalEqSolver,
}

/// Build the operator handle for a problem, factoring `𝐀ᵀ𝐀` once.
pub fn assemble_operator(p: &ConicProblem) -> Result<ConstraintOperator> {
    let m = p.num_constraints();
    let mut columns = Vec::with_capacity(m);
    for ai in &p.a {
        let col: Vec<(usize, f64)> =
            svec(ai).into_iter().enumerate().filter(|(_, v)| *v != 0.0).collect();
        columns.push(col);
    }
    let gram = Mat::from_fn(m, m, |i, j| sparse_dot(&columns[i], &columns[j]));
    let normal = NormalEqSolver::new(&gram)?;
    Ok(ConstraintOperator { structure: p.structure.clone(), columns, gram, normal })
}

fn sparse_dot(a: &[(usize, f64)], b: &[(usize, f64)]) -> f64 {
    let (mut i, mut j, mut acc) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += a[i].1 * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

impl ConstraintOperator {
    pub fn num_constraints(&self) -> usize {
        self.columns.len()
    }

    pub fn structure(&self) -> &BlockStructure {
        &self.structure
    }

    /// `apply(X) = (A₁∙X, …, A_m∙X)`.
    pub fn apply(&self, x: &BlockSymMatrix) -> Vec<f64> {
        self.apply_svec(&svec(x))
    }

    pub fn apply_svec(&self, xv: &[f64]) -> Vec<f64> {
        self.columns.iter().map(|col| col.iter().map(|&(k, v)| v * xv[k]).sum()).collect()
    }

    /// `adjoint(y) = Σ yᵢ Aᵢ`.
    pub fn adjoint(&self, y: &[f64]) -> BlockSymMatrix {
        smat(&self.adjoint_svec(y), &self.structure).expect("length fixed by construction")
    }

    pub fn adjoint_svec(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.columns.len());
        let mut out = vec![0.0; self.structure.svec_len()];
        for (col, &yi) in self.columns.iter().zip(y) {
            if yi == 0.0 {
                continue;
            }
            for &(k, v) in col {
                out[k] += yi * v;
            }
        }
        out
    }

    /// Dense `𝐀ᵀ𝐀` (the Gram matrix of the svec columns).
    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    /// Solve `(𝐀ᵀ𝐀) z = r` using the cached factorization.
    pub fn solve_normal(&self, r: &[f64]) -> Vec<f64> {
        self.normal.solve(r)
    }

    pub fn normal_solver(&self) -> &NormalEqSolver {
        &self.normal
    }
}

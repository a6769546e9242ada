//! Spectral kernels on block symmetric matrices: eigendecomposition, cone
//! projection, Nesterov–Todd scaling, and congruence transforms.

use crate::cones::{inner, BlockStructure, BlockSymMatrix};
use crate::error::{Error, Result};
use crate::linalg::dense::Mat;
use crate::linalg::eig::{spectral_apply, sym_eig};

/// Eigenvalue floor (relative to the largest eigenvalue) used inside matrix
/// square roots, so near-singular late-stage iterates do not produce NaNs.
const SQRT_EIG_FLOOR: f64 = 1e-14;

/// Relative threshold below which an iterate counts as numerically singular.
const INTERIOR_TOL: f64 = 1e-12;

/// Eigendecomposition of one block.
#[derive(Debug, Clone)]
pub struct BlockEig {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Matching orthonormal eigenvectors as columns.
    pub vectors: Mat,
}

/// Per-block eigendecomposition of a block symmetric matrix.
#[derive(Debug, Clone)]
pub struct EigenPair {
    structure: BlockStructure,
    pub blocks: Vec<BlockEig>,
}

impl EigenPair {
    pub fn structure(&self) -> &BlockStructure {
        &self.structure
    }

    pub fn min_value(&self) -> f64 {
        self.blocks
            .iter()
            .filter_map(|b| b.values.first().copied())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.blocks
            .iter()
            .filter_map(|b| b.values.last().copied())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// All eigenvalues tagged with their block index.
    pub fn tagged_values(&self) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        for (blk, b) in self.blocks.iter().enumerate() {
            for &v in &b.values {
                out.push((blk, v));
            }
        }
        out
    }

    /// Rebuild `V f(Λ) Vᵀ` blockwise.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> BlockSymMatrix {
        let dense: Vec<Mat> =
            self.blocks.iter().map(|b| spectral_apply(&b.values, &b.vectors, &f)).collect();
        BlockSymMatrix::from_dense_blocks(&self.structure, &dense)
            .expect("dimensions preserved by spectral_apply")
    }

    /// Rebuild the original matrix.
    pub fn reconstruct(&self) -> BlockSymMatrix {
        self.map(|x| x)
    }
}

/// Symmetric eigendecomposition, blockwise.
pub fn eig_sym(m: &BlockSymMatrix) -> Result<EigenPair> {
    let mut blocks = Vec::with_capacity(m.structure().block_count());
    for blk in 0..m.structure().block_count() {
        let (values, vectors) = sym_eig(&m.block_dense(blk))?;
        blocks.push(BlockEig { values, vectors });
    }
    Ok(EigenPair { structure: m.structure().clone(), blocks })
}

/// Smallest eigenvalue across all blocks.
pub fn min_eigenvalue(m: &BlockSymMatrix) -> Result<f64> {
    Ok(eig_sym(m)?.min_value())
}

/// Projection onto the positive semidefinite cone:
/// `[D]₊ = Σ max(dᵢ, 0) vᵢvᵢᵀ` per block.
pub fn psd_project(d: &BlockSymMatrix) -> Result<BlockSymMatrix> {
    Ok(eig_sym(d)?.map(|x| x.max(0.0)))
}

/// `log det` summed over blocks. Errors if any block is not positive definite.
pub fn log_det(m: &BlockSymMatrix) -> Result<f64> {
    let eig = eig_sym(m)?;
    let mut acc = 0.0;
    for b in &eig.blocks {
        for &v in &b.values {
            if v <= 0.0 {
                return Err(Error::NotPositiveDefinite { context: "log det", min_eigenvalue: v });
            }
            acc += v.ln();
        }
    }
    Ok(acc)
}

/// Nesterov–Todd scaling point: the unique symmetric positive definite `W`
/// with `W S W = X`, computed per block as
/// `W = S^{-1/2} (S^{1/2} X S^{1/2})^{1/2} S^{-1/2}`.
pub fn nt_scaling(x: &BlockSymMatrix, s: &BlockSymMatrix) -> Result<BlockSymMatrix> {
    let ex = eig_sym(x)?;
    let es = eig_sym(s)?;
    for (name, e) in [("X", &ex), ("S", &es)] {
        let (lo, hi) = (e.min_value(), e.max_value());
        // negated so NaN eigenvalues also trip the failure path
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(lo > INTERIOR_TOL * hi.max(f64::MIN_POSITIVE)) {
            let _ = name;
            return Err(Error::LostInteriority { context: "Nesterov-Todd scaling" });
        }
    }

    let structure = x.structure().clone();
    let mut w_blocks = Vec::with_capacity(structure.block_count());
    for (blk, (bx, bs)) in ex.blocks.iter().zip(&es.blocks).enumerate() {
        let _ = blk;
        let s_max = bs.values.last().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
        let floor = SQRT_EIG_FLOOR * s_max;
        let s_half = spectral_apply(&bs.values, &bs.vectors, |v| v.max(floor).sqrt());
        let s_inv_half = spectral_apply(&bs.values, &bs.vectors, |v| 1.0 / v.max(floor).sqrt());
        let t = s_half.mul(&bx.reconstruct_dense()).mul(&s_half).symmetrize();
        let (tv, tvecs) = sym_eig(&t)?;
        let t_max = tv.last().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
        let t_half = spectral_apply(&tv, &tvecs, |v| v.max(SQRT_EIG_FLOOR * t_max).sqrt());
        let w = s_inv_half.mul(&t_half).mul(&s_inv_half).symmetrize();
        w_blocks.push(w);
    }
    BlockSymMatrix::from_dense_blocks(&structure, &w_blocks)
}

impl BlockEig {
    fn reconstruct_dense(&self) -> Mat {
        spectral_apply(&self.values, &self.vectors, |x| x)
    }
}

/// Congruence transform `W M W`, blockwise.
pub fn congruence(w: &BlockSymMatrix, m: &BlockSymMatrix) -> BlockSymMatrix {
    debug_assert_eq!(w.structure(), m.structure());
    let blocks: Vec<Mat> = (0..w.structure().block_count())
        .map(|blk| {
            let wb = w.block_dense(blk);
            wb.mul(&m.block_dense(blk)).mul(&wb).symmetrize()
        })
        .collect();
    BlockSymMatrix::from_dense_blocks(w.structure(), &blocks).expect("same structure")
}

/// Smallest eigenvalue of the symmetrized product `X^{1/2} S X^{1/2}`,
/// together with `X∙S`. This is the quantity the wide-neighborhood test
/// compares against `(γ/n)·X∙S`.
pub fn min_eig_symmetrized_product(
    x: &BlockSymMatrix,
    s: &BlockSymMatrix,
) -> Result<(f64, f64)> {
    let ex = eig_sym(x)?;
    let mut min_eig = f64::INFINITY;
    for (blk, bx) in ex.blocks.iter().enumerate() {
        let x_max = bx.values.last().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
        let floor = SQRT_EIG_FLOOR * x_max;
        let x_half = spectral_apply(&bx.values, &bx.vectors, |v| v.max(floor).sqrt());
        let prod = x_half.mul(&s.block_dense(blk)).mul(&x_half).symmetrize();
        let (vals, _) = sym_eig(&prod)?;
        if let Some(&v) = vals.first() {
            min_eig = min_eig.min(v);
        }
    }
    Ok((min_eig, inner(x, s)?))
}

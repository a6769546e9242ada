//! Symmetric eigendecomposition via cyclic Jacobi rotations.
//!
//! Jacobi is slower than tridiagonalized QL by a small constant factor but
//! is unconditionally robust and delivers high relative accuracy, which the
//! interior-point scaling computations depend on. At the matrix sizes this
//! crate targets the cost difference is irrelevant.

use crate::error::{Error, Result};
use crate::linalg::dense::Mat;

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a dense symmetric matrix.
///
/// Returns eigenvalues in ascending order and the matching orthonormal
/// eigenvectors as the columns of the returned matrix, so that
/// `M = V diag(values) Vᵀ`.
pub fn sym_eig(m: &Mat) -> Result<(Vec<f64>, Mat)> {
    assert_eq!(m.rows(), m.cols(), "sym_eig requires a square matrix");
    if !m.is_finite() {
        return Err(Error::NonFinite { context: "symmetric eigendecomposition" });
    }
    let n = m.rows();
    if n == 0 {
        return Ok((Vec::new(), Mat::zeros(0, 0)));
    }
    if n == 1 {
        return Ok((vec![m[(0, 0)]], Mat::identity(1)));
    }

    let mut a = m.symmetrize();
    let mut v = Mat::identity(n);
    let norm = a.frob_norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if (2.0 * off).sqrt() <= 1e-15 * norm {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                // Rotation angle chosen to annihilate a_pq.
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    if k != p && k != q {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(p, k)] = a[(k, p)];
                        a[(k, q)] = s * akp + c * akq;
                        a[(q, k)] = a[(k, q)];
                    }
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    // Sort ascending, permuting eigenvector columns to match.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = Mat::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((values, vectors))
}

/// Rebuild `V f(Λ) Vᵀ` from an eigendecomposition.
pub fn spectral_apply(values: &[f64], vectors: &Mat, f: impl Fn(f64) -> f64) -> Mat {
    let n = vectors.rows();
    let mut out = Mat::zeros(n, n);
    for (k, &lam) in values.iter().enumerate() {
        let flam = f(lam);
        if flam == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = vectors[(i, k)];
            if vik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[(i, j)] += flam * vik * vectors[(j, k)];
            }
        }
    }
    out.symmetrize()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_eigenvalues() {
        let (vals, _) = sym_eig(&Mat::identity(4)).unwrap();
        for v in vals {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn diagonal_sorted_ascending() {
        let m = Mat::from_rows(&[vec![3.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 2.0]]);
        let (vals, _) = sym_eig(&m).unwrap();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_known() {
        // [[0,1],[1,0]] has eigenvalues ±1.
        let m = Mat::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let (vals, v) = sym_eig(&m).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
        // eigenvectors orthonormal
        let vtv = v.transpose().mul(&v);
        assert!(vtv.sub(&Mat::identity(2)).frob_norm() < 1e-14);
    }

    #[test]
    fn reconstruction_random() {
        // Deterministic pseudo-random symmetric matrix.
        let n = 7;
        let mut seed = 42u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let x = next();
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
        }
        let (vals, v) = sym_eig(&m).unwrap();
        let recon = spectral_apply(&vals, &v, |x| x);
        assert!(recon.sub(&m).frob_norm() <= 1e-12 * m.frob_norm().max(1.0));
        let vtv = v.transpose().mul(&v);
        assert!(vtv.sub(&Mat::identity(n)).frob_norm() <= 1e-12);
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = Mat::identity(2);
        m[(0, 1)] = f64::NAN;
        assert!(sym_eig(&m).is_err());
    }
}

//! Penalized SDP for quadratic state estimation from noisy measurements
//! `z_r = xᵀM_r x + ω_r`: lift `xxᵀ` to `X ⪰ 0`, carry each measurement
//! residual `ν_r` explicitly, and charge `μ·|ν_r|/σ_r` through a positive
//! split `ν_r = ν_r⁺ − ν_r⁻`.

use crate::cones::{BlockStructure, BlockSymMatrix, ConicProblem};
use crate::error::{Error, Result};
use crate::linalg::dense::Mat;

#[derive(Debug, Clone)]
pub struct StateEstProblem {
    /// Measurement matrices, symmetrized on construction.
    pub m_meas: Vec<Mat>,
    /// Measured values.
    pub z: Vec<f64>,
    /// Per-measurement noise scales (positive).
    pub sigma: Vec<f64>,
    /// Penalty weight μ on the residual term.
    pub mu_pen: f64,
    /// Objective matrix.
    pub m_obj: Mat,
}

impl StateEstProblem {
    pub fn new(
        m_meas: Vec<Mat>,
        z: Vec<f64>,
        sigma: Vec<f64>,
        mu_pen: f64,
        m_obj: Mat,
    ) -> Result<Self> {
        if m_meas.is_empty() || m_meas.len() != z.len() || m_meas.len() != sigma.len() {
            return Err(Error::InvalidArgument(
                "measurement matrices, values and noise scales must have equal length".into(),
            ));
        }
        if sigma.iter().any(|&s| s <= 0.0) {
            return Err(Error::InvalidArgument("noise scales must be positive".into()));
        }
        if mu_pen <= 0.0 {
            return Err(Error::InvalidArgument("penalty weight must be positive".into()));
        }
        let n = m_obj.rows();
        for m in &m_meas {
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch {
                    context: "measurement matrix size",
                    expected: n,
                    got: m.rows(),
                });
            }
        }
        Ok(StateEstProblem {
            m_meas: m_meas.into_iter().map(|m| m.symmetrize()).collect(),
            z,
            sigma,
            mu_pen,
            m_obj: m_obj.symmetrize(),
        })
    }

    pub fn dim(&self) -> usize {
        self.m_obj.rows()
    }

    pub fn num_measurements(&self) -> usize {
        self.m_meas.len()
    }
}

/// Build
/// `min trace(M X) + μ Σ_r (ν_r⁺ + ν_r⁻)/σ_r`
/// `s.t. trace(M_r X) + ν_r⁺ − ν_r⁻ = z_r,  X ⪰ 0,  ν± ≥ 0`.
/// Block layout: main block, then the pair `(ν_r⁺, ν_r⁻)` per measurement.
pub fn state_est_sdp(se: &StateEstProblem) -> Result<ConicProblem> {
    let n = se.dim();
    let m = se.num_measurements();
    let mut sizes = vec![n];
    sizes.resize(1 + 2 * m, 1);
    let st = BlockStructure::new(sizes)?;

    let mut c = BlockSymMatrix::zeros(&st);
    for i in 0..n {
        for j in 0..=i {
            c.set(0, i, j, se.m_obj[(i, j)]);
        }
    }
    for r in 0..m {
        let w = se.mu_pen / se.sigma[r];
        c.set(1 + 2 * r, 0, 0, w);
        c.set(2 + 2 * r, 0, 0, w);
    }

    let mut a = Vec::with_capacity(m);
    for r in 0..m {
        let mut ar = BlockSymMatrix::zeros(&st);
        for i in 0..n {
            for j in 0..=i {
                ar.set(0, i, j, se.m_meas[r][(i, j)]);
            }
        }
        ar.set(1 + 2 * r, 0, 0, 1.0);
        ar.set(2 + 2 * r, 0, 0, -1.0);
        a.push(ar);
    }

    ConicProblem::new(st, c, a, se.z.clone())
}

/// Residuals `ν_r = z_r − trace(M_r X)` of a recovered main block.
pub fn measurement_residuals(se: &StateEstProblem, x_block: &Mat) -> Vec<f64> {
    se.m_meas
        .iter()
        .zip(&se.z)
        .map(|(mr, zr)| {
            let prod = mr.mul(x_block);
            let tr: f64 = (0..mr.rows()).map(|i| prod[(i, i)]).sum();
            zr - tr
        })
        .collect()
}

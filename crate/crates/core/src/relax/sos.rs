//! Verification of sum-of-squares certificates as coefficient-wise
//! polynomial identities.

use crate::relax::poly::Polynomial;

/// Check the identity `p = Σ squaresᵢ² + Σ multᵢ·gᵢ` by expanding the right
/// side over the coefficient map.
///
/// Returns whether the identity holds and the largest absolute coefficient
/// difference. The identity is accepted when the residual is at most
/// `1e-9·(1 + max |coefficient|)`; on exactly representable coefficients the
/// expansion is exact arithmetic and the residual is zero.
pub fn sos_verify(
    p: &Polynomial,
    squares: &[Polynomial],
    multipliers: &[(Polynomial, Polynomial)],
) -> (bool, f64) {
    let mut rhs = Polynomial::zero(p.nvars());
    for s in squares {
        rhs = rhs.add(&s.square());
    }
    for (mult, g) in multipliers {
        rhs = rhs.add(&mult.mul(g));
    }
    let diff = p.sub(&rhs);
    let residual = diff.max_abs_coeff();
    let scale = 1.0 + p.max_abs_coeff().max(rhs.max_abs_coeff());
    (residual <= 1e-9 * scale, residual)
}

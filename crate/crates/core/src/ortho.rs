//! Orthonormality measures and the nearest-orthogonal projection used to
//! clean up frames after each integration step.

use nalgebra::Matrix3;

/// Largest entry of `|MᵀM − I|`, which bounds both the norm and the pairwise
/// dot-product defects of the columns.
pub fn orthonormality_defect(m: &Matrix3<f64>) -> f64 {
    (m.transpose() * m - Matrix3::identity()).abs().max()
}

/// Projects a near-orthogonal matrix onto the nearest orthogonal matrix
/// (the orthogonal polar factor) by Newton–Schulz sweeps
/// `M ← M (3I − MᵀM) / 2`.
///
/// Converges quadratically when the defect is well below one; the sign of the
/// determinant is preserved.
pub fn orthonormalize(m: &Matrix3<f64>) -> Matrix3<f64> {
    let mut out = *m;
    for _ in 0..4 {
        let gram = out.transpose() * out;
        let defect = (gram - Matrix3::identity()).abs().max();
        if defect <= 4.0 * f64::EPSILON {
            break;
        }
        out = out * (Matrix3::identity() * 3.0 - gram) * 0.5;
    }
    out
}

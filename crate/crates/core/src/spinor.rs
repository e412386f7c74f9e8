//! Two-component spinors and their correspondence with oriented orthogonal
//! triads of equal-norm vectors.
//!
//! A spinor `ψ` encodes the triad `{a, b, c}` through the quadratic forms
//!
//! ```text
//! a + i b = ψᵗ σ ψ,      c = −ψ̂ᵗ σ ψ
//! ```
//!
//! where `σ = (σ1, σ2, σ3)` are the complex symmetric matrices in [`SIGMA`]
//! and `ψ̂` is the mate of `ψ`. The map is two-to-one: `ψ` and `−ψ` give the
//! same triad.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use thiserror::Error;

use crate::curve::Vec3;
use crate::ortho::{orthonormality_defect, orthonormalize};

/// Complex 3-vector, the value type of the sigma bilinear form.
pub type CVec3 = Vector3<Complex64>;

/// Skew tolerated in triads passed to [`spinor_from_triad`] before they are
/// rejected. Triads within it are projected to exact orthonormality first.
pub const TRIAD_ACCEPT_TOL: f64 = 1e-6;

/// Tolerance of the [`OrthoTriad`] invariants, relative to the magnitude.
pub const TRIAD_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// The three complex symmetric 2×2 matrices, `SIGMA[k][row][col]`.
///
/// `σ1 = [[1, 0], [0, −1]]`, `σ2 = [[i, 0], [0, i]]`,
/// `σ3 = [[0, −1], [−1, 0]]`.
pub const SIGMA: [[[Complex64; 2]; 2]; 3] = [
    [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]],
    [[I, ZERO], [ZERO, I]],
    [[ZERO, Complex64::new(-1.0, 0.0)], [Complex64::new(-1.0, 0.0), ZERO]],
];

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum SpinorError {
    #[error("spinor must be non-zero")]
    ZeroSpinor,
    #[error("spinor has non-finite components")]
    NonFinite,
    #[error("triad vectors are not orthogonal (defect {0:.3e})")]
    NonOrthogonal(f64),
    #[error("triad vectors have mismatched norms (relative spread {0:.3e})")]
    MismatchedNorms(f64),
    #[error("triad is left-handed")]
    LeftHanded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor {
    pub psi1: Complex64,
    pub psi2: Complex64,
}

impl Spinor {
    pub const fn new(psi1: Complex64, psi2: Complex64) -> Self {
        Self { psi1, psi2 }
    }

    /// Spinor with real components.
    pub const fn real(psi1: f64, psi2: f64) -> Self {
        Self::new(Complex64::new(psi1, 0.0), Complex64::new(psi2, 0.0))
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO)
    }

    pub fn components(&self) -> [Complex64; 2] {
        [self.psi1, self.psi2]
    }

    pub fn is_finite(&self) -> bool {
        self.psi1.is_finite() && self.psi2.is_finite()
    }

    /// `|ψ1|² + |ψ2|²`, the common length of the encoded triad vectors.
    pub fn norm_sqr(&self) -> f64 {
        spinor_norm(self)
    }

    /// Euclidean length of the component pair.
    pub fn length(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Self {
        *self * (1.0 / self.length())
    }

    /// Euclidean distance in `C²`.
    pub fn distance(&self, other: &Spinor) -> f64 {
        (*self - *other).length()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.psi1.conj(), self.psi2.conj())
    }

    pub fn mate(&self) -> Self {
        mate(self)
    }
}

impl Add for Spinor {
    type Output = Spinor;
    fn add(self, rhs: Spinor) -> Spinor {
        Spinor::new(self.psi1 + rhs.psi1, self.psi2 + rhs.psi2)
    }
}

impl AddAssign for Spinor {
    fn add_assign(&mut self, rhs: Spinor) {
        *self = *self + rhs;
    }
}

impl Sub for Spinor {
    type Output = Spinor;
    fn sub(self, rhs: Spinor) -> Spinor {
        Spinor::new(self.psi1 - rhs.psi1, self.psi2 - rhs.psi2)
    }
}

impl Neg for Spinor {
    type Output = Spinor;
    fn neg(self) -> Spinor {
        Spinor::new(-self.psi1, -self.psi2)
    }
}

impl Mul<f64> for Spinor {
    type Output = Spinor;
    fn mul(self, rhs: f64) -> Spinor {
        Spinor::new(self.psi1 * rhs, self.psi2 * rhs)
    }
}

impl Mul<Complex64> for Spinor {
    type Output = Spinor;
    fn mul(self, rhs: Complex64) -> Spinor {
        Spinor::new(self.psi1 * rhs, self.psi2 * rhs)
    }
}

/// `(φᵗσ1ψ, φᵗσ2ψ, φᵗσ3ψ)`. Symmetric in its arguments since every `σk` is.
pub fn bilinear_sigma(phi: &Spinor, psi: &Spinor) -> CVec3 {
    let left = phi.components();
    let right = psi.components();
    CVec3::from_fn(|k, _| {
        let mut acc = ZERO;
        for (r, lr) in left.iter().enumerate() {
            for (c, rc) in right.iter().enumerate() {
                acc += lr * SIGMA[k][r][c] * rc;
            }
        }
        acc
    })
}

/// The mate `ψ̂ = (−conj ψ2, conj ψ1)`.
pub fn mate(psi: &Spinor) -> Spinor {
    Spinor::new(-psi.psi2.conj(), psi.psi1.conj())
}

/// `|ψ1|² + |ψ2|²`.
pub fn spinor_norm(psi: &Spinor) -> f64 {
    psi.psi1.norm_sqr() + psi.psi2.norm_sqr()
}

/// Multiplies both components by `exp(i·angle/2)`, which rotates `a + ib`
/// by `exp(i·angle)` and leaves `c` fixed.
pub fn phase_rotate(psi: &Spinor, angle: f64) -> Spinor {
    *psi * Complex64::from_polar(1.0, 0.5 * angle)
}

/// Three mutually orthogonal vectors of a common length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthoTriad {
    pub a: Vec3,
    pub b: Vec3,
    pub c: Vec3,
    pub magnitude: f64,
}

impl OrthoTriad {
    /// Triad with the magnitude taken as the mean of the three norms.
    pub fn new(a: Vec3, b: Vec3, c: Vec3) -> Self {
        let magnitude = (a.norm() + b.norm() + c.norm()) / 3.0;
        Self { a, b, c, magnitude }
    }

    pub fn vectors(&self) -> [Vec3; 3] {
        [self.a, self.b, self.c]
    }

    /// `⟨a × b, c⟩`.
    pub fn orientation(&self) -> f64 {
        self.a.cross(&self.b).dot(&self.c)
    }

    /// Largest violation of orthogonality, equal norms and magnitude,
    /// relative to `magnitude²` and `magnitude` respectively.
    pub fn defect(&self) -> f64 {
        let m = self.magnitude;
        if m == 0.0 {
            return self.vectors().iter().map(|v| v.norm()).fold(0.0, f64::max);
        }
        let dots = [self.a.dot(&self.b), self.b.dot(&self.c), self.a.dot(&self.c)]
            .iter()
            .map(|d| d.abs() / (m * m))
            .fold(0.0, f64::max);
        let norms = self
            .vectors()
            .iter()
            .map(|v| (v.norm() - m).abs() / m)
            .fold(0.0, f64::max);
        dots.max(norms)
    }

    /// Whether the triad meets its invariants at [`TRIAD_TOL`].
    pub fn is_valid(&self) -> bool {
        self.defect() <= TRIAD_TOL && self.orientation() > 0.0
    }

    pub fn max_abs_diff(&self, other: &OrthoTriad) -> f64 {
        self.vectors()
            .iter()
            .zip(other.vectors().iter())
            .map(|(x, y)| (x - y).abs().max())
            .fold(0.0, f64::max)
    }
}

/// Realifies `a + ib` into its real and imaginary parts.
pub fn split_complex(m: &CVec3) -> (Vec3, Vec3) {
    (m.map(|z| z.re), m.map(|z| z.im))
}

/// The triad `{a, b, c}` encoded by `ψ`.
pub fn triad_from_spinor(psi: &Spinor) -> Result<OrthoTriad, SpinorError> {
    if !psi.is_finite() {
        return Err(SpinorError::NonFinite);
    }
    let magnitude = spinor_norm(psi);
    if magnitude == 0.0 {
        return Err(SpinorError::ZeroSpinor);
    }
    let (p1, p2) = (psi.psi1, psi.psi2);
    let m = CVec3::new(p1 * p1 - p2 * p2, I * (p1 * p1 + p2 * p2), -2.0 * p1 * p2);
    let cross = p1 * p2.conj();
    let c = Vec3::new(2.0 * cross.re, -2.0 * cross.im, p1.norm_sqr() - p2.norm_sqr());
    let (a, b) = split_complex(&m);
    Ok(OrthoTriad { a, b, c, magnitude })
}

/// A spinor encoding `triad`, with the sign fixed by [`canonical_sign`].
///
/// Triads within [`TRIAD_ACCEPT_TOL`] of orthonormal (after scaling by the
/// magnitude) are projected to the nearest exact triad before extraction;
/// the other valid answer is the negation of the result.
pub fn spinor_from_triad(triad: &OrthoTriad) -> Result<Spinor, SpinorError> {
    let norms = triad.vectors().map(|v| v.norm());
    if norms.iter().any(|n| !n.is_finite()) {
        return Err(SpinorError::NonFinite);
    }
    let magnitude = norms.iter().sum::<f64>() / 3.0;
    if magnitude == 0.0 {
        return Err(SpinorError::ZeroSpinor);
    }
    let spread = norms
        .iter()
        .map(|n| (n - magnitude).abs() / magnitude)
        .fold(0.0, f64::max);
    if spread > TRIAD_ACCEPT_TOL {
        return Err(SpinorError::MismatchedNorms(spread));
    }
    let frame = Matrix3::from_columns(&[triad.a, triad.b, triad.c]) / magnitude;
    let defect = orthonormality_defect(&frame);
    if defect > TRIAD_ACCEPT_TOL {
        return Err(SpinorError::NonOrthogonal(defect));
    }
    if frame.determinant() <= 0.0 {
        return Err(SpinorError::LeftHanded);
    }
    let frame = orthonormalize(&frame);
    let unit = spinor_from_rotation(&frame);
    Ok(canonical_sign(unit * magnitude.sqrt()))
}

/// Unit spinor for the columns `{a, b, c}` of a rotation matrix.
fn spinor_from_rotation(frame: &Matrix3<f64>) -> Spinor {
    let (a, b) = (frame.column(0), frame.column(1));
    let m = CVec3::new(
        Complex64::new(a[0], b[0]),
        Complex64::new(a[1], b[1]),
        Complex64::new(a[2], b[2]),
    );
    let sq1 = (m[0] - I * m[1]) * 0.5;
    let sq2 = (-m[0] - I * m[1]) * 0.5;
    // take the square root of the larger component and recover the other
    // from the product constraint −2ψ1ψ2 = m3
    if sq1.norm() >= sq2.norm() {
        let p1 = sq1.sqrt();
        Spinor::new(p1, -m[2] / (2.0 * p1))
    } else {
        let p2 = sq2.sqrt();
        Spinor::new(-m[2] / (2.0 * p2), p2)
    }
}

/// Chooses between `ψ` and `−ψ`: the first non-zero of `Re ψ1`, `Im ψ1`,
/// `Re ψ2`, `Im ψ2` is made positive.
pub fn canonical_sign(psi: Spinor) -> Spinor {
    let keys = [psi.psi1.re, psi.psi1.im, psi.psi2.re, psi.psi2.im];
    match keys.iter().find(|v| **v != 0.0) {
        Some(v) if *v < 0.0 => -psi,
        _ => psi,
    }
}

/// `det [ψ | ψ̂]`, which equals `|ψ1|² + |ψ2|²`.
pub fn mate_determinant(psi: &Spinor) -> Complex64 {
    let m = mate(psi);
    psi.psi1 * m.psi2 - m.psi1 * psi.psi2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &Spinor, b: &Spinor, tol: f64) -> bool {
        a.distance(b) <= tol
    }

    #[test]
    fn sigma_matrices_are_symmetric_constants() {
        for m in &SIGMA {
            assert_eq!(m[0][1], m[1][0]);
        }
        assert_eq!(SIGMA[0], [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]);
        assert_eq!(SIGMA[1], [[c(0.0, 1.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]]);
        assert_eq!(SIGMA[2], [[c(0.0, 0.0), c(-1.0, 0.0)], [c(-1.0, 0.0), c(0.0, 0.0)]]);
    }

    #[test]
    fn bilinear_form_examples() {
        let up = Spinor::real(1.0, 0.0);
        let down = Spinor::real(0.0, 1.0);
        assert_eq!(bilinear_sigma(&up, &up), CVec3::new(c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)));
        assert_eq!(bilinear_sigma(&up, &down), CVec3::new(c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)));
        let phi = Spinor::new(c(0.3, -1.2), c(2.0, 0.5));
        let psi = Spinor::new(c(-0.7, 0.1), c(0.4, 0.9));
        assert_eq!(bilinear_sigma(&phi, &psi), bilinear_sigma(&psi, &phi));
    }

    #[test]
    fn mate_examples() {
        assert_eq!(mate(&Spinor::real(1.0, 0.0)), Spinor::real(0.0, 1.0));
        let psi = Spinor::new(c(1.0, 1.0), c(2.0, 0.0));
        assert_eq!(mate(&mate(&psi)), Spinor::new(c(-1.0, -1.0), c(-2.0, 0.0)));
        assert_eq!(mate(&Spinor::new(c(0.0, 0.0), c(0.0, 1.0))), Spinor::new(c(0.0, 1.0), c(0.0, 0.0)));
    }

    #[test]
    fn triad_examples() {
        let t = triad_from_spinor(&Spinor::real(1.0, 0.0)).unwrap();
        assert_eq!((t.a, t.b, t.c, t.magnitude), (Vec3::x(), Vec3::y(), Vec3::z(), 1.0));

        let t = triad_from_spinor(&Spinor::real(0.0, 1.0)).unwrap();
        assert_eq!((t.a, t.b, t.c), (-Vec3::x(), Vec3::y(), -Vec3::z()));

        let t = triad_from_spinor(&Spinor::new(c(1.0, 0.0), c(0.0, 1.0))).unwrap();
        assert_eq!(t.a, Vec3::new(2.0, 0.0, 0.0));
        assert_eq!(t.b, Vec3::new(0.0, 0.0, -2.0));
        assert_eq!(t.c, Vec3::new(0.0, 2.0, 0.0));
        assert_eq!(t.magnitude, 2.0);
        assert_eq!(t.orientation(), 8.0);

        assert_eq!(triad_from_spinor(&Spinor::zero()), Err(SpinorError::ZeroSpinor));
    }

    #[test]
    fn c_vector_matches_mate_form() {
        let psi = Spinor::new(c(0.3, -1.2), c(2.0, 0.5));
        let t = triad_from_spinor(&psi).unwrap();
        let (re, im) = split_complex(&(-bilinear_sigma(&mate(&psi), &psi)));
        assert!((re - t.c).norm() < 1e-14);
        assert!(im.norm() < 1e-14);
    }

    #[test]
    fn spinor_from_triad_examples() {
        let standard = OrthoTriad::new(Vec3::x(), Vec3::y(), Vec3::z());
        assert_eq!(spinor_from_triad(&standard).unwrap(), Spinor::real(1.0, 0.0));

        let flipped = OrthoTriad::new(-Vec3::x(), Vec3::y(), -Vec3::z());
        let psi = spinor_from_triad(&flipped).unwrap();
        assert!(close(&psi, &Spinor::real(0.0, 1.0), 1e-15) || close(&psi, &Spinor::real(0.0, -1.0), 1e-15));
        assert_eq!(psi, canonical_sign(psi));

        let left = OrthoTriad::new(Vec3::x(), Vec3::y(), -Vec3::z());
        assert_eq!(spinor_from_triad(&left), Err(SpinorError::LeftHanded));
    }

    #[test]
    fn spinor_from_triad_rejects_skewed_input() {
        let skew = OrthoTriad::new(Vec3::x(), Vec3::new(0.01, 1.0, 0.0).normalize(), Vec3::z());
        assert!(matches!(spinor_from_triad(&skew), Err(SpinorError::NonOrthogonal(_))));
        let scaled = OrthoTriad::new(Vec3::x() * 1.01, Vec3::y(), Vec3::z());
        assert!(matches!(spinor_from_triad(&scaled), Err(SpinorError::MismatchedNorms(_))));
        let zero = OrthoTriad::new(Vec3::zeros(), Vec3::zeros(), Vec3::zeros());
        assert_eq!(spinor_from_triad(&zero), Err(SpinorError::ZeroSpinor));
    }

    #[test]
    fn spinor_from_triad_accepts_small_drift() {
        let psi = Spinor::new(c(0.6, 0.2), c(-0.3, 0.7)).normalized();
        let mut t = triad_from_spinor(&psi).unwrap();
        t.a += Vec3::new(3e-8, -1e-8, 2e-8);
        let back = spinor_from_triad(&t).unwrap();
        assert!(close(&back, &psi, 1e-7) || close(&back, &-psi, 1e-7));
    }

    #[test]
    fn round_trip_both_branches() {
        for psi in [
            Spinor::new(c(0.9, 0.1), c(1e-9, -2e-9)),
            Spinor::new(c(1e-9, 3e-10), c(-0.2, 0.95)),
            Spinor::new(c(-0.5, 0.5), c(0.5, -0.5)),
        ] {
            let psi = psi.normalized();
            let back = spinor_from_triad(&triad_from_spinor(&psi).unwrap()).unwrap();
            assert!(close(&back, &psi, 1e-14) || close(&back, &-psi, 1e-14), "{psi:?} -> {back:?}");
        }
    }

    #[test]
    fn norm_examples() {
        assert_eq!(spinor_norm(&Spinor::real(1.0, 0.0)), 1.0);
        assert_eq!(spinor_norm(&Spinor::new(c(1.0, 0.0), c(0.0, 1.0))), 2.0);
        assert_eq!(spinor_norm(&Spinor::zero()), 0.0);
    }

    #[test]
    fn phase_rotation() {
        let psi = Spinor::new(c(0.6, 0.2), c(-0.3, 0.7));
        assert_eq!(phase_rotate(&psi, 0.0), psi);
        assert!(close(&phase_rotate(&psi, 2.0 * std::f64::consts::PI), &-psi, 1e-15));

        let up = Spinor::real(1.0, 0.0);
        let rotated = phase_rotate(&up, std::f64::consts::PI);
        let t = triad_from_spinor(&rotated).unwrap();
        assert!((t.a + Vec3::x()).norm() < 1e-15);
        assert!((t.b + Vec3::y()).norm() < 1e-15);
        assert!((t.c - Vec3::z()).norm() < 1e-15);
        let lhs = bilinear_sigma(&rotated, &rotated);
        let rhs = bilinear_sigma(&up, &up) * Complex64::from_polar(1.0, std::f64::consts::PI);
        assert!((lhs - rhs).norm() < 1e-15);
    }

    #[test]
    fn mate_determinant_is_norm() {
        let psi = Spinor::new(c(0.6, 0.2), c(-0.3, 0.7));
        let d = mate_determinant(&psi);
        assert!((d - c(psi.norm_sqr(), 0.0)).norm() < 1e-15);
    }
}

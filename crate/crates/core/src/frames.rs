//! Frenet and Bishop frames along a sampled curve.
//!
//! Three frame kinds are supported, stored as ordered right-handed triads:
//!
//! | kind      | e1 | e2 | e3 | rotation rates |
//! |-----------|----|----|----|----------------|
//! | `Frenet`  | T  | N  | B  | κ, τ           |
//! | `Bishop1` | T  | N1 | N2 | k1, k2         |
//! | `Bishop2` | ζ1 | ζ2 | B  | ε1, ε2         |
//!
//! Type-1 Bishop normals rotate away from the Frenet ones by `θ1` with
//! `θ1′ = τ`; the type-2 pair rotates within the T–N plane by `θ2` with
//! `θ2′ = κ`. Both angles are carried separately.

use std::f64::consts::PI;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{SampledCurve, Vec3, DEFAULT_REGULARITY_TOL};
use crate::integrate::{
    check_profile, cumulative_integral, midpoint_values, rk4_step, uniform_step, GridError,
    PropagationConfig,
};
use crate::ortho::{orthonormality_defect, orthonormalize};

/// Orthonormality tolerance of a [`Frame`].
pub const FRAME_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    #[error("Frenet frame is undefined at sample {index} (curvature {kappa:.3e})")]
    Singular { index: usize, kappa: f64 },
    #[error("frame is not orthonormal (defect {0:.3e})")]
    NotOrthonormal(f64),
    #[error("frame is left-handed")]
    LeftHanded,
    #[error("expected a {expected:?} frame path, got {got:?}")]
    KindMismatch { expected: FrameKind, got: FrameKind },
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameKind {
    Frenet,
    Bishop1,
    Bishop2,
}

impl FrameKind {
    pub fn name(self) -> &'static str {
        match self {
            FrameKind::Frenet => "frenet",
            FrameKind::Bishop1 => "bishop1",
            FrameKind::Bishop2 => "bishop2",
        }
    }
}

/// An ordered orthonormal triad.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub e1: Vec3,
    pub e2: Vec3,
    pub e3: Vec3,
    pub kind: FrameKind,
}

impl Frame {
    /// Validated frame: orthonormal to [`FRAME_TOL`] and right-handed.
    pub fn new(e1: Vec3, e2: Vec3, e3: Vec3, kind: FrameKind) -> Result<Self, FrameError> {
        let frame = Self::unchecked(e1, e2, e3, kind);
        frame.validate(FRAME_TOL)?;
        Ok(frame)
    }

    pub fn unchecked(e1: Vec3, e2: Vec3, e3: Vec3, kind: FrameKind) -> Self {
        Self { e1, e2, e3, kind }
    }

    pub fn from_matrix(m: &Matrix3<f64>, kind: FrameKind) -> Self {
        Self::unchecked(m.column(0).into(), m.column(1).into(), m.column(2).into(), kind)
    }

    /// Columns `[e1 e2 e3]`.
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_columns(&[self.e1, self.e2, self.e3])
    }

    pub fn vectors(&self) -> [Vec3; 3] {
        [self.e1, self.e2, self.e3]
    }

    pub fn defect(&self) -> f64 {
        orthonormality_defect(&self.matrix())
    }

    pub fn validate(&self, tol: f64) -> Result<(), FrameError> {
        let defect = self.defect();
        if !(defect <= tol) {
            return Err(FrameError::NotOrthonormal(defect));
        }
        if self.matrix().determinant() <= 0.0 {
            return Err(FrameError::LeftHanded);
        }
        Ok(())
    }

    /// Largest componentwise difference from another frame.
    pub fn max_abs_diff(&self, other: &Frame) -> f64 {
        (self.matrix() - other.matrix()).abs().max()
    }

    /// Angle of the rotation taking this frame to `other`.
    pub fn rotation_angle_to(&self, other: &Frame) -> f64 {
        let relative = other.matrix() * self.matrix().transpose();
        let cos = ((relative.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
        // acos is ill-conditioned near zero; recover the sine from the skew part
        let skew = relative - relative.transpose();
        let sin = 0.5 * Vec3::new(skew[(2, 1)], skew[(0, 2)], skew[(1, 0)]).norm();
        sin.atan2(cos)
    }
}

/// A sequence of frames of one kind on an arc-length grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FramePath {
    pub s: Vec<f64>,
    pub frames: Vec<Frame>,
    pub kind: FrameKind,
}

impl FramePath {
    pub fn new(s: Vec<f64>, frames: Vec<Frame>, kind: FrameKind) -> Result<Self, FrameError> {
        if s.len() != frames.len() {
            return Err(GridError::LengthMismatch {
                name: "frames",
                expected: s.len(),
                got: frames.len(),
            }
            .into());
        }
        if let Some(f) = frames.iter().find(|f| f.kind != kind) {
            return Err(FrameError::KindMismatch {
                expected: kind,
                got: f.kind,
            });
        }
        Ok(Self { s, frames, kind })
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Worst orthonormality defect over the path, with its sample index.
    pub fn max_defect(&self) -> (f64, usize) {
        self.frames
            .iter()
            .enumerate()
            .map(|(i, f)| (f.defect(), i))
            .fold((0.0, 0), |acc, x| if x.0 > acc.0 { x } else { acc })
    }

    /// Largest componentwise deviation from another path, with its index.
    pub fn max_abs_diff(&self, other: &FramePath) -> (f64, usize) {
        self.frames
            .iter()
            .zip(other.frames.iter())
            .enumerate()
            .map(|(i, (a, b))| (a.max_abs_diff(b), i))
            .fold((0.0, 0), |acc, x| if x.0 > acc.0 { x } else { acc })
    }

    pub fn expect_kind(&self, kind: FrameKind) -> Result<(), FrameError> {
        if self.kind != kind {
            return Err(FrameError::KindMismatch {
                expected: kind,
                got: self.kind,
            });
        }
        Ok(())
    }
}

/// Curvature functions of a regular curve.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CurvatureProfile {
    pub kappa: Vec<f64>,
    pub tau: Vec<f64>,
    pub k1: Vec<f64>,
    pub k2: Vec<f64>,
    pub eps1: Vec<f64>,
    pub eps2: Vec<f64>,
    /// Type-1 angle, `θ1′ = τ`.
    pub theta1: Vec<f64>,
    /// Type-2 angle, `θ2′ = κ`.
    pub theta2: Vec<f64>,
}

/// All frames and curvatures obtained from the closed-form relations.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormFrames {
    pub frenet: FramePath,
    pub bishop1: FramePath,
    pub bishop2: FramePath,
    pub profile: CurvatureProfile,
}

/// Frenet frame, curvature and torsion from the curve derivatives.
///
/// Fails at the first sample whose curvature is below `tol`.
pub fn frenet_apparatus_with_tol(
    curve: &SampledCurve,
    tol: f64,
) -> Result<(FramePath, Vec<f64>, Vec<f64>), FrameError> {
    let n = curve.len();
    let mut frames = Vec::with_capacity(n);
    let mut kappa = Vec::with_capacity(n);
    let mut tau = Vec::with_capacity(n);
    for i in 0..n {
        let (d1, d2, d3) = (curve.d1[i], curve.d2[i], curve.d3[i]);
        let cross = d1.cross(&d2);
        let speed = d1.norm();
        let k = cross.norm() / speed.powi(3);
        if !(k >= tol) {
            return Err(FrameError::Singular { index: i, kappa: k });
        }
        let t = d1 / speed;
        let b = cross / cross.norm();
        let normal = b.cross(&t);
        frames.push(Frame::unchecked(t, normal, b, FrameKind::Frenet));
        kappa.push(k);
        tau.push(cross.dot(&d3) / cross.norm_squared());
    }
    let path = FramePath::new(curve.s.clone(), frames, FrameKind::Frenet)?;
    Ok((path, kappa, tau))
}

/// [`frenet_apparatus_with_tol`] at the default regularity tolerance.
pub fn frenet_apparatus(curve: &SampledCurve) -> Result<(FramePath, Vec<f64>, Vec<f64>), FrameError> {
    frenet_apparatus_with_tol(curve, DEFAULT_REGULARITY_TOL)
}

/// Generator `A` with `[e1 e2 e3]′ = [e1 e2 e3] A` for each frame kind.
fn generator(kind: FrameKind, c1: f64, c2: f64) -> Matrix3<f64> {
    match kind {
        // T' = κN, N' = −κT + τB, B' = −τN
        FrameKind::Frenet => Matrix3::new(0.0, -c1, 0.0, c1, 0.0, -c2, 0.0, c2, 0.0),
        // T' = k1 N1 + k2 N2, N1' = −k1 T, N2' = −k2 T
        FrameKind::Bishop1 => Matrix3::new(0.0, -c1, -c2, c1, 0.0, 0.0, c2, 0.0, 0.0),
        // ζ1' = −ε1 B, ζ2' = −ε2 B, B' = ε1 ζ1 + ε2 ζ2
        FrameKind::Bishop2 => Matrix3::new(0.0, 0.0, c1, 0.0, 0.0, c2, -c1, -c2, 0.0),
    }
}

fn propagate(
    kind: FrameKind,
    names: [&'static str; 2],
    c1: &[f64],
    c2: &[f64],
    initial: &Frame,
    s: &[f64],
    config: &PropagationConfig,
) -> Result<FramePath, FrameError> {
    let h = uniform_step(s)?;
    check_profile(names[0], c1, s.len())?;
    check_profile(names[1], c2, s.len())?;
    initial.validate(FRAME_TOL)?;
    let mid1 = midpoint_values(c1, config.midpoint);
    let mid2 = midpoint_values(c2, config.midpoint);

    let mut state = initial.matrix();
    let mut frames = Vec::with_capacity(s.len());
    frames.push(Frame::from_matrix(&state, kind));
    for i in 0..s.len() - 1 {
        state = rk4_step(
            state,
            h,
            &(c1[i], c2[i]),
            &(mid1[i], mid2[i]),
            &(c1[i + 1], c2[i + 1]),
            |m, (a, b)| m * generator(kind, *a, *b),
        );
        if config.renormalize_after(i + 1) {
            state = orthonormalize(&state);
        }
        frames.push(Frame::from_matrix(&state, kind));
    }
    FramePath::new(s.to_vec(), frames, kind)
}

/// Integrates `T′ = κN, N′ = −κT + τB, B′ = −τN` from `initial`.
pub fn propagate_frenet(
    kappa: &[f64],
    tau: &[f64],
    initial: &Frame,
    s: &[f64],
    config: &PropagationConfig,
) -> Result<FramePath, FrameError> {
    propagate(FrameKind::Frenet, ["kappa", "tau"], kappa, tau, initial, s, config)
}

/// Integrates `T′ = k1N1 + k2N2, N1′ = −k1T, N2′ = −k2T` from `initial`.
pub fn propagate_bishop1(
    k1: &[f64],
    k2: &[f64],
    initial: &Frame,
    s: &[f64],
    config: &PropagationConfig,
) -> Result<FramePath, FrameError> {
    propagate(FrameKind::Bishop1, ["k1", "k2"], k1, k2, initial, s, config)
}

/// Integrates `ζ1′ = −ε1B, ζ2′ = −ε2B, B′ = ε1ζ1 + ε2ζ2` from `initial`.
pub fn propagate_bishop2(
    eps1: &[f64],
    eps2: &[f64],
    initial: &Frame,
    s: &[f64],
    config: &PropagationConfig,
) -> Result<FramePath, FrameError> {
    propagate(FrameKind::Bishop2, ["eps1", "eps2"], eps1, eps2, initial, s, config)
}

/// `θ1(s) = θ1(0) + ∫ τ`, unwrapped.
pub fn theta1_profile(tau: &[f64], s: &[f64], theta1_at_0: f64) -> Result<Vec<f64>, FrameError> {
    angle_profile("tau", tau, s, theta1_at_0)
}

/// `θ2(s) = θ2(0) + ∫ κ`, unwrapped.
pub fn theta2_profile(kappa: &[f64], s: &[f64], theta2_at_0: f64) -> Result<Vec<f64>, FrameError> {
    angle_profile("kappa", kappa, s, theta2_at_0)
}

fn angle_profile(name: &'static str, rate: &[f64], s: &[f64], start: f64) -> Result<Vec<f64>, FrameError> {
    let h = uniform_step(s)?;
    check_profile(name, rate, s.len())?;
    Ok(cumulative_integral(rate, h).into_iter().map(|v| start + v).collect())
}

fn check_same_grid(path: &FramePath, name: &'static str, values: &[f64]) -> Result<(), FrameError> {
    check_profile(name, values, path.len())?;
    Ok(())
}

/// Type-1 Bishop frame from the Frenet frame rotated by `θ1` about T:
/// `N1 = cos θ1 N − sin θ1 B`, `N2 = sin θ1 N + cos θ1 B`, with
/// `k1 = κ cos θ1`, `k2 = κ sin θ1`.
pub fn bishop1_from_frenet(
    frenet: &FramePath,
    kappa: &[f64],
    theta1: &[f64],
) -> Result<(FramePath, Vec<f64>, Vec<f64>), FrameError> {
    frenet.expect_kind(FrameKind::Frenet)?;
    check_same_grid(frenet, "kappa", kappa)?;
    check_same_grid(frenet, "theta1", theta1)?;
    let mut frames = Vec::with_capacity(frenet.len());
    let mut k1 = Vec::with_capacity(frenet.len());
    let mut k2 = Vec::with_capacity(frenet.len());
    for ((f, k), th) in frenet.frames.iter().zip(kappa).zip(theta1) {
        let (sin, cos) = th.sin_cos();
        let n1 = f.e2 * cos - f.e3 * sin;
        let n2 = f.e2 * sin + f.e3 * cos;
        frames.push(Frame::unchecked(f.e1, n1, n2, FrameKind::Bishop1));
        k1.push(k * cos);
        k2.push(k * sin);
    }
    Ok((FramePath::new(frenet.s.clone(), frames, FrameKind::Bishop1)?, k1, k2))
}

/// Type-2 Bishop frame: `ζ1 = sin θ2 T + cos θ2 N`,
/// `ζ2 = −cos θ2 T + sin θ2 N`, B unchanged, with `ε1 = −τ cos θ2`,
/// `ε2 = −τ sin θ2`.
pub fn bishop2_from_frenet(
    frenet: &FramePath,
    tau: &[f64],
    theta2: &[f64],
) -> Result<(FramePath, Vec<f64>, Vec<f64>), FrameError> {
    frenet.expect_kind(FrameKind::Frenet)?;
    check_same_grid(frenet, "tau", tau)?;
    check_same_grid(frenet, "theta2", theta2)?;
    let mut frames = Vec::with_capacity(frenet.len());
    let mut eps1 = Vec::with_capacity(frenet.len());
    let mut eps2 = Vec::with_capacity(frenet.len());
    for ((f, t), th) in frenet.frames.iter().zip(tau).zip(theta2) {
        let (sin, cos) = th.sin_cos();
        let z1 = f.e1 * sin + f.e2 * cos;
        let z2 = -f.e1 * cos + f.e2 * sin;
        frames.push(Frame::unchecked(z1, z2, f.e3, FrameKind::Bishop2));
        eps1.push(-t * cos);
        eps2.push(-t * sin);
    }
    Ok((FramePath::new(frenet.s.clone(), frames, FrameKind::Bishop2)?, eps1, eps2))
}

/// `κ = √(k1² + k2²)` and the unwrapped polar angle of `(k1, k2)`.
///
/// Where `κ < tol` the angle is undefined and the previous value is held
/// (zero before the first defined sample).
pub fn curvatures_from_bishop1(k1: &[f64], k2: &[f64], tol: f64) -> (Vec<f64>, Vec<f64>) {
    let mut kappa = Vec::with_capacity(k1.len());
    let mut theta = Vec::with_capacity(k1.len());
    let mut previous: Option<f64> = None;
    for (a, b) in k1.iter().zip(k2) {
        let k = a.hypot(*b);
        kappa.push(k);
        let angle = if k < tol {
            previous.unwrap_or(0.0)
        } else {
            let raw = b.atan2(*a);
            match previous {
                Some(p) => raw + 2.0 * PI * ((p - raw) / (2.0 * PI)).round(),
                None => raw,
            }
        };
        if k >= tol || previous.is_some() {
            previous = Some(angle);
        }
        theta.push(angle);
    }
    (kappa, theta)
}

/// Closed-form Frenet, type-1 and type-2 frames with every curvature
/// function, for a curve that is regular everywhere.
pub fn closed_form_frames(curve: &SampledCurve, theta1_at_0: f64, theta2_at_0: f64) -> Result<ClosedFormFrames, FrameError> {
    let (frenet, kappa, tau) = frenet_apparatus(curve)?;
    let theta1 = theta1_profile(&tau, &curve.s, theta1_at_0)?;
    let theta2 = theta2_profile(&kappa, &curve.s, theta2_at_0)?;
    let (bishop1, k1, k2) = bishop1_from_frenet(&frenet, &kappa, &theta1)?;
    let (bishop2, eps1, eps2) = bishop2_from_frenet(&frenet, &tau, &theta2)?;
    Ok(ClosedFormFrames {
        frenet,
        bishop1,
        bishop2,
        profile: CurvatureProfile {
            kappa,
            tau,
            k1,
            k2,
            eps1,
            eps2,
            theta1,
            theta2,
        },
    })
}

/// A unit vector perpendicular to `t`.
pub fn perpendicular(t: &Vec3) -> Vec3 {
    let helper = if t.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let p = helper - t * t.dot(&helper);
    p.normalize()
}

/// Type-1 Bishop frame at the first sample: the Frenet normals rotated by
/// `theta1_at_0` when the curve is regular there, otherwise an arbitrary
/// normal pair.
pub fn initial_bishop1_frame(curve: &SampledCurve, theta1_at_0: f64) -> Frame {
    let t = curve.tangent(0);
    let d2 = curve.d2[0] - t * t.dot(&curve.d2[0]);
    let n = if curve.curvature(0) >= DEFAULT_REGULARITY_TOL {
        d2.normalize()
    } else {
        perpendicular(&t)
    };
    let b = t.cross(&n);
    let (sin, cos) = theta1_at_0.sin_cos();
    Frame::unchecked(t, n * cos - b * sin, n * sin + b * cos, FrameKind::Bishop1)
}

/// Type-1 Bishop frame and curvatures obtained by transporting the normal
/// pair along the sampled tangent: `N1′ = −⟨T′, N1⟩ T`.
///
/// Needs no Frenet frame, so it works through inflection points and along
/// straight segments. Curvatures are `k1 = ⟨T′, N1⟩`, `k2 = ⟨T′, N2⟩`.
pub fn transport_bishop1(
    curve: &SampledCurve,
    initial: &Frame,
    config: &PropagationConfig,
) -> Result<(FramePath, Vec<f64>, Vec<f64>), FrameError> {
    let h = uniform_step(&curve.s)?;
    initial.validate(FRAME_TOL)?;
    let n = curve.len();
    let tangents: Vec<Vec3> = (0..n).map(|i| curve.tangent(i)).collect();
    // curvature vector T' = κN, the component of d2 normal to the tangent
    // scaled for the actual speed
    let bend: Vec<Vec3> = (0..n)
        .map(|i| {
            let t = tangents[i];
            let d2 = curve.d2[i];
            (d2 - t * t.dot(&d2)) / curve.d1[i].norm_squared()
        })
        .collect();
    let mid_t = midpoint_vectors(&tangents, config);
    let mid_bend = midpoint_vectors(&bend, config);

    let mut n1 = initial.e2;
    let mut frames = Vec::with_capacity(n);
    let mut k1 = Vec::with_capacity(n);
    let mut k2 = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 {
            n1 = rk4_step(
                n1,
                h,
                &(tangents[i - 1], bend[i - 1]),
                &(mid_t[i - 1], mid_bend[i - 1]),
                &(tangents[i], bend[i]),
                |v, (t, b)| -t * b.dot(v),
            );
            let t = tangents[i];
            n1 = (n1 - t * t.dot(&n1)).normalize();
        }
        let t = tangents[i];
        let n2 = t.cross(&n1);
        k1.push(bend[i].dot(&n1));
        k2.push(bend[i].dot(&n2));
        frames.push(Frame::unchecked(t, n1, n2, FrameKind::Bishop1));
    }
    Ok((FramePath::new(curve.s.clone(), frames, FrameKind::Bishop1)?, k1, k2))
}

fn midpoint_vectors(values: &[Vec3], config: &PropagationConfig) -> Vec<Vec3> {
    let mut out = vec![Vec3::zeros(); values.len() - 1];
    for axis in 0..3 {
        let component: Vec<f64> = values.iter().map(|v| v[axis]).collect();
        for (slot, m) in out.iter_mut().zip(midpoint_values(&component, config.midpoint)) {
            slot[axis] = m;
        }
    }
    out
}

/// `(ε2/ε1)′ / (1 + (ε2/ε1)²)` by five-point central differences at samples
/// where `|ε1|` is at least `min_cos` times `√(ε1² + ε2²)` across the whole
/// stencil; `None` elsewhere.
///
/// For a regular curve with non-zero torsion this reproduces `κ`.
pub fn curvature_from_type2_ratio(eps1: &[f64], eps2: &[f64], h: f64, min_cos: f64) -> Vec<Option<f64>> {
    let n = eps1.len();
    let usable = |i: usize| {
        let norm = eps1[i].hypot(eps2[i]);
        norm > 0.0 && eps1[i].abs() >= min_cos * norm
    };
    let ratio = |j: usize| eps2[j] / eps1[j];
    (0..n)
        .map(|i| {
            if i < 2 || i + 2 >= n || !(i - 2..=i + 2).all(usable) {
                return None;
            }
            let derivative =
                (ratio(i - 2) - 8.0 * ratio(i - 1) + 8.0 * ratio(i + 1) - ratio(i + 2)) / (12.0 * h);
            Some(derivative / (1.0 + ratio(i) * ratio(i)))
        })
        .collect()
}

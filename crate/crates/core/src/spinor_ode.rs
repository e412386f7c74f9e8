//! Spinor propagation along a curve and lifting of frame paths to spinors.
//!
//! Each frame kind has a single spinor equation equivalent to its three
//! vector equations:
//!
//! ```text
//! Frenet  {N, B, T}:    ψ′ = ½(−iτ ψ + κ ψ̂)
//! type 1  {N1, N2, T}:  φ′ = ½(k1 + i k2) φ̂
//! type 2  {ζ1, ζ2, B}:  λ′ = ½(ε1 + i ε2) λ̂
//! ```

use num_complex::Complex64;
use thiserror::Error;

use crate::frames::{Frame, FrameError, FrameKind, FramePath};
use crate::integrate::{check_profile, midpoint_values, rk4_step, uniform_step, GridError, PropagationConfig};
use crate::spinor::{
    mate, spinor_from_triad, spinor_norm, triad_from_spinor, OrthoTriad, Spinor, SpinorError, TRIAD_ACCEPT_TOL,
};

pub use crate::integrate::{Method, MidpointRule};

/// Allowed deviation of `|ψ|²` from one for unit spinors.
pub const UNIT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PropagationError {
    #[error("initial spinor is not unit (|ψ|² = {0})")]
    NonUnit(f64),
    #[error("frame path of kind {got:?} cannot be lifted as {rep:?}")]
    KindMismatch { rep: RepKind, got: FrameKind },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Spinor(#[from] SpinorError),
    #[error("sample {index}: {source}")]
    Frame { index: usize, source: FrameError },
}

/// Which ordered triad a spinor path represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepKind {
    /// `N + iB = ψᵗσψ`, `T = −ψ̂ᵗσψ`.
    FrenetNBT,
    /// `N1 + iN2 = φᵗσφ`, `T = −φ̂ᵗσφ`.
    Bishop1N1N2T,
    /// `ζ1 + iζ2 = λᵗσλ`, `B = −λ̂ᵗσλ`.
    Bishop2Z1Z2B,
    /// `T + iN = ψᵗσψ`, `B = −ψ̂ᵗσψ`.
    FrenetTNB,
}

impl RepKind {
    pub fn frame_kind(self) -> FrameKind {
        match self {
            RepKind::FrenetNBT | RepKind::FrenetTNB => FrameKind::Frenet,
            RepKind::Bishop1N1N2T => FrameKind::Bishop1,
            RepKind::Bishop2Z1Z2B => FrameKind::Bishop2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RepKind::FrenetNBT => "frenet_NBT",
            RepKind::Bishop1N1N2T => "bishop1_N1N2T",
            RepKind::Bishop2Z1Z2B => "bishop2_Z1Z2B",
            RepKind::FrenetTNB => "frenet_TNB",
        }
    }

    /// The frame's vectors in this representation's triad order.
    pub fn triad(self, frame: &Frame) -> OrthoTriad {
        let [e1, e2, e3] = frame.vectors();
        match self {
            RepKind::FrenetNBT | RepKind::Bishop1N1N2T => OrthoTriad::new(e2, e3, e1),
            RepKind::Bishop2Z1Z2B | RepKind::FrenetTNB => OrthoTriad::new(e1, e2, e3),
        }
    }

    /// Inverse of [`RepKind::triad`] for a unit triad.
    pub fn frame(self, triad: &OrthoTriad) -> Frame {
        let [a, b, c] = triad.vectors();
        let kind = self.frame_kind();
        match self {
            RepKind::FrenetNBT | RepKind::Bishop1N1N2T => Frame::unchecked(c, a, b, kind),
            RepKind::Bishop2Z1Z2B | RepKind::FrenetTNB => Frame::unchecked(a, b, c, kind),
        }
    }
}

/// Right-hand side of a spinor equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinorRhs {
    /// `½(−iτψ + κψ̂)` with coefficients `(κ, τ)`.
    Frenet,
    /// `½(k1 + ik2)φ̂` with coefficients `(k1, k2)`.
    Bishop1,
    /// `½(ε1 + iε2)λ̂` with coefficients `(ε1, ε2)`.
    Bishop2,
    /// `½(ε1 + ε2)λ̂`, a real-coefficient variant that does not reproduce
    /// the type-2 frame; kept to show the difference.
    Bishop2RealCoefficient,
}

impl SpinorRhs {
    pub fn rep_kind(self) -> RepKind {
        match self {
            SpinorRhs::Frenet => RepKind::FrenetNBT,
            SpinorRhs::Bishop1 => RepKind::Bishop1N1N2T,
            SpinorRhs::Bishop2 | SpinorRhs::Bishop2RealCoefficient => RepKind::Bishop2Z1Z2B,
        }
    }

    pub fn eval(self, psi: &Spinor, c1: f64, c2: f64) -> Spinor {
        match self {
            SpinorRhs::Frenet => spinor_frenet_rhs(psi, c1, c2),
            SpinorRhs::Bishop1 => spinor_bishop1_rhs(psi, c1, c2),
            SpinorRhs::Bishop2 => spinor_bishop2_rhs(psi, c1, c2),
            SpinorRhs::Bishop2RealCoefficient => mate(psi) * (0.5 * (c1 + c2)),
        }
    }
}

pub fn spinor_frenet_rhs(psi: &Spinor, kappa: f64, tau: f64) -> Spinor {
    (*psi * Complex64::new(0.0, -tau) + mate(psi) * kappa) * 0.5
}

pub fn spinor_bishop1_rhs(phi: &Spinor, k1: f64, k2: f64) -> Spinor {
    mate(phi) * Complex64::new(0.5 * k1, 0.5 * k2)
}

pub fn spinor_bishop2_rhs(lambda: &Spinor, eps1: f64, eps2: f64) -> Spinor {
    mate(lambda) * Complex64::new(0.5 * eps1, 0.5 * eps2)
}

/// Spinors on an arc-length grid representing one ordered triad kind.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorPath {
    pub s: Vec<f64>,
    pub spinors: Vec<Spinor>,
    pub rep_kind: RepKind,
}

impl SpinorPath {
    pub fn len(&self) -> usize {
        self.spinors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spinors.is_empty()
    }

    /// Largest `||ψ|² − 1|` along the path.
    pub fn max_norm_defect(&self) -> f64 {
        self.spinors
            .iter()
            .map(|p| (spinor_norm(p) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Whether each sample is closer to its predecessor than to its negation.
    pub fn is_sign_continuous(&self) -> bool {
        self.spinors
            .windows(2)
            .all(|w| w[1].distance(&w[0]) < w[1].distance(&-w[0]))
    }

    /// The frames these spinors encode.
    pub fn frames(&self) -> Result<FramePath, PropagationError> {
        let frames = self
            .spinors
            .iter()
            .map(|p| Ok(self.rep_kind.frame(&triad_from_spinor(p)?)))
            .collect::<Result<Vec<_>, PropagationError>>()?;
        Ok(FramePath {
            s: self.s.clone(),
            frames,
            kind: self.rep_kind.frame_kind(),
        })
    }
}

/// Integrates a spinor equation from `psi0` with RK4 on the grid `s`.
///
/// `c1`, `c2` are the two coefficient profiles of `rhs`, in the order given
/// on [`SpinorRhs`].
pub fn propagate_spinor(
    rhs: SpinorRhs,
    c1: &[f64],
    c2: &[f64],
    psi0: &Spinor,
    s: &[f64],
    config: &PropagationConfig,
) -> Result<SpinorPath, PropagationError> {
    let h = uniform_step(s)?;
    check_profile("c1", c1, s.len())?;
    check_profile("c2", c2, s.len())?;
    let norm = spinor_norm(psi0);
    if !((norm - 1.0).abs() <= UNIT_TOL) {
        return Err(PropagationError::NonUnit(norm));
    }
    let mid1 = midpoint_values(c1, config.midpoint);
    let mid2 = midpoint_values(c2, config.midpoint);

    let mut psi = *psi0;
    let mut spinors = Vec::with_capacity(s.len());
    spinors.push(psi);
    for i in 0..s.len() - 1 {
        psi = rk4_step(
            psi,
            h,
            &(c1[i], c2[i]),
            &(mid1[i], mid2[i]),
            &(c1[i + 1], c2[i + 1]),
            |p, (a, b)| rhs.eval(p, *a, *b),
        );
        if config.renormalize_after(i + 1) {
            psi = psi.normalized();
        }
        spinors.push(psi);
    }
    Ok(SpinorPath {
        s: s.to_vec(),
        spinors,
        rep_kind: rhs.rep_kind(),
    })
}

/// Canonical spinor for one frame in the given representation.
pub fn lift_frame(frame: &Frame, rep_kind: RepKind) -> Result<Spinor, PropagationError> {
    if frame.kind != rep_kind.frame_kind() {
        return Err(PropagationError::KindMismatch {
            rep: rep_kind,
            got: frame.kind,
        });
    }
    Ok(spinor_from_triad(&rep_kind.triad(frame))?)
}

/// Lifts every frame and fixes signs for continuity. Also returns how many
/// samples had to be negated relative to their canonical lift.
pub fn lift_frame_path_counted(path: &FramePath, rep_kind: RepKind) -> Result<(SpinorPath, usize), PropagationError> {
    if path.kind != rep_kind.frame_kind() {
        return Err(PropagationError::KindMismatch {
            rep: rep_kind,
            got: path.kind,
        });
    }
    let mut spinors: Vec<Spinor> = Vec::with_capacity(path.len());
    let mut flips = 0;
    for (index, frame) in path.frames.iter().enumerate() {
        frame
            .validate(TRIAD_ACCEPT_TOL)
            .map_err(|source| PropagationError::Frame { index, source })?;
        let mut psi = lift_frame(frame, rep_kind)?;
        if let Some(prev) = spinors.last() {
            if psi.distance(prev) > (-psi).distance(prev) {
                psi = -psi;
                flips += 1;
            }
        }
        spinors.push(psi);
    }
    let lifted = SpinorPath {
        s: path.s.clone(),
        spinors,
        rep_kind,
    };
    Ok((lifted, flips))
}

/// Sign-continuous spinor path for a frame path.
pub fn lift_frame_path(path: &FramePath, rep_kind: RepKind) -> Result<SpinorPath, PropagationError> {
    lift_frame_path_counted(path, rep_kind).map(|(p, _)| p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Vec3;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn frenet_rhs_examples() {
        let up = Spinor::real(1.0, 0.0);
        assert_eq!(spinor_frenet_rhs(&up, 0.0, 0.0), Spinor::zero());
        assert_eq!(spinor_frenet_rhs(&up, 1.0, 0.0), Spinor::real(0.0, 0.5));
        assert_eq!(spinor_frenet_rhs(&up, 0.0, 2.0), Spinor::new(c(0.0, -1.0), c(0.0, 0.0)));
    }

    #[test]
    fn bishop1_rhs_examples() {
        assert_eq!(spinor_bishop1_rhs(&Spinor::real(1.0, 0.0), 0.0, 0.0), Spinor::zero());
        assert_eq!(spinor_bishop1_rhs(&Spinor::real(1.0, 0.0), 1.0, 0.0), Spinor::real(0.0, 0.5));
        assert_eq!(
            spinor_bishop1_rhs(&Spinor::real(0.0, 1.0), 0.0, 2.0),
            Spinor::new(c(0.0, -1.0), c(0.0, 0.0))
        );
    }

    #[test]
    fn bishop2_rhs_examples() {
        let up = Spinor::real(1.0, 0.0);
        assert_eq!(spinor_bishop2_rhs(&up, 0.0, 0.0), Spinor::zero());
        assert_eq!(spinor_bishop2_rhs(&up, 1.0, 0.0), Spinor::real(0.0, 0.5));
        assert_eq!(spinor_bishop2_rhs(&up, 0.0, 1.0), Spinor::new(c(0.0, 0.0), c(0.0, 0.5)));
    }

    fn grid(n: usize, length: f64) -> Vec<f64> {
        (0..n).map(|i| length * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn zero_curvature_keeps_spinor_constant() {
        let s = grid(100, 1.0);
        let z = vec![0.0; s.len()];
        let up = Spinor::real(1.0, 0.0);
        let path = propagate_spinor(SpinorRhs::Bishop1, &z, &z, &up, &s, &PropagationConfig::default()).unwrap();
        assert!(path.spinors.iter().all(|p| *p == up));
    }

    #[test]
    fn unit_circle_half_angle_solution() {
        let n = 6284;
        let s = grid(n, 2.0 * PI);
        let kappa = vec![1.0; n];
        let tau = vec![0.0; n];
        let up = Spinor::real(1.0, 0.0);
        let path = propagate_spinor(SpinorRhs::Frenet, &kappa, &tau, &up, &s, &PropagationConfig::default()).unwrap();
        for (p, si) in path.spinors.iter().zip(&s) {
            let exact = Spinor::real((si / 2.0).cos(), (si / 2.0).sin());
            assert!(p.distance(&exact) < 1e-8);
        }
        assert!(path.spinors[n - 1].distance(&-up) < 1e-6);
        assert!(path.is_sign_continuous());
    }

    #[test]
    fn rejects_non_unit_start() {
        let s = grid(10, 1.0);
        let z = vec![0.0; 10];
        let err = propagate_spinor(SpinorRhs::Frenet, &z, &z, &Spinor::real(2.0, 0.0), &s, &PropagationConfig::default());
        assert!(matches!(err, Err(PropagationError::NonUnit(_))));
        let mut bad = z.clone();
        bad[3] = f64::INFINITY;
        let err = propagate_spinor(SpinorRhs::Frenet, &bad, &z, &Spinor::real(1.0, 0.0), &s, &PropagationConfig::default());
        assert!(matches!(err, Err(PropagationError::Grid(GridError::NonFinite { index: 3, .. }))));
    }

    #[test]
    fn triad_orderings_round_trip() {
        let frame = Frame::new(Vec3::y(), Vec3::z(), Vec3::x(), FrameKind::Frenet).unwrap();
        for rep in [RepKind::FrenetNBT, RepKind::FrenetTNB] {
            let back = rep.frame(&rep.triad(&frame));
            assert_eq!(back, frame);
        }
        let nbt = lift_frame(&frame, RepKind::FrenetNBT).unwrap();
        let tnb = lift_frame(&frame, RepKind::FrenetTNB).unwrap();
        assert!(nbt.distance(&tnb) > 0.1 && nbt.distance(&-tnb) > 0.1);
    }

    #[test]
    fn lift_rejects_wrong_kind() {
        let frame = Frame::new(Vec3::x(), Vec3::y(), Vec3::z(), FrameKind::Bishop1).unwrap();
        let path = FramePath::new(vec![0.0], vec![frame], FrameKind::Bishop1).unwrap();
        assert!(matches!(
            lift_frame_path(&path, RepKind::FrenetNBT),
            Err(PropagationError::KindMismatch { .. })
        ));
    }

    #[test]
    fn constant_frames_lift_to_constant_spinors() {
        let frame = Frame::new(Vec3::x(), Vec3::y(), Vec3::z(), FrameKind::Bishop2).unwrap();
        let path = FramePath::new(grid(20, 1.0), vec![frame; 20], FrameKind::Bishop2).unwrap();
        let (lifted, flips) = lift_frame_path_counted(&path, RepKind::Bishop2Z1Z2B).unwrap();
        assert_eq!(flips, 0);
        assert!(lifted.spinors.iter().all(|p| *p == lifted.spinors[0]));
    }
}

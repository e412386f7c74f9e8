//! One entry point for "give me frame kind X along this curve by method Y",
//! shared by the command-line tools.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::SampledCurve;
use crate::frames::{
    closed_form_frames, curvatures_from_bishop1, frenet_apparatus, initial_bishop1_frame,
    propagate_bishop1, propagate_bishop2, propagate_frenet, transport_bishop1, FrameError,
    FrameKind, FramePath,
};
use crate::integrate::PropagationConfig;
use crate::spinor_ode::{lift_frame, propagate_spinor, PropagationError, RepKind, SpinorRhs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameMethod {
    /// Frames from the curve derivatives and the angle relations.
    ClosedForm,
    /// Linear frame equations integrated with RK4.
    Vector,
    /// Spinor equation integrated with RK4, frames read off the spinors.
    Spinor,
}

impl FrameMethod {
    pub fn name(self) -> &'static str {
        match self {
            FrameMethod::ClosedForm => "closed-form",
            FrameMethod::Vector => "vector",
            FrameMethod::Spinor => "spinor",
        }
    }
}

impl FromStr for FrameMethod {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "closed-form" => Ok(FrameMethod::ClosedForm),
            "vector" => Ok(FrameMethod::Vector),
            "spinor" => Ok(FrameMethod::Spinor),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

impl FromStr for FrameKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "frenet" => Ok(FrameKind::Frenet),
            "bishop1" => Ok(FrameKind::Bishop1),
            "bishop2" => Ok(FrameKind::Bishop2),
            other => Err(format!("unknown frame kind `{other}`")),
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
}

impl PipelineError {
    /// The Frenet singularity behind this error, if that is what it is.
    pub fn singular_sample(&self) -> Option<(usize, f64)> {
        match self {
            PipelineError::Frame(FrameError::Singular { index, kappa })
            | PipelineError::Propagation(PropagationError::Frame {
                source: FrameError::Singular { index, kappa },
                ..
            }) => Some((*index, *kappa)),
            _ => None,
        }
    }
}

/// A frame path with the curvature columns that belong to its kind.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameField {
    pub path: FramePath,
    /// `(κ, τ)`, `(k1, k2, θ1)` or `(ε1, ε2, θ2)`.
    pub columns: Vec<(&'static str, Vec<f64>)>,
}

/// Names of the curvature columns for each frame kind.
pub fn curvature_columns(kind: FrameKind) -> &'static [&'static str] {
    match kind {
        FrameKind::Frenet => &["kappa", "tau"],
        FrameKind::Bishop1 => &["k1", "k2", "theta1"],
        FrameKind::Bishop2 => &["eps1", "eps2", "theta2"],
    }
}

/// Computes the `kind` frame along `curve` by `method`.
///
/// `theta0` is the initial angle of the Bishop normals relative to the Frenet
/// ones (ignored for Frenet). The type-1 frame is also available on curves
/// where the Frenet frame is undefined, except by the closed-form method;
/// there the normal plane is transported along the tangent and the angle
/// column is the polar angle of `(k1, k2)`, held where both vanish.
pub fn compute_frame_field(
    curve: &SampledCurve,
    kind: FrameKind,
    method: FrameMethod,
    theta0: f64,
    config: &PropagationConfig,
) -> Result<FrameField, PipelineError> {
    let s = &curve.s;
    match kind {
        FrameKind::Frenet => {
            let (closed, kappa, tau) = frenet_apparatus(curve)?;
            let path = match method {
                FrameMethod::ClosedForm => closed,
                FrameMethod::Vector => propagate_frenet(&kappa, &tau, &closed.frames[0], s, config)?,
                FrameMethod::Spinor => {
                    let psi0 = lift_frame(&closed.frames[0], RepKind::FrenetNBT)?;
                    propagate_spinor(SpinorRhs::Frenet, &kappa, &tau, &psi0, s, config)?.frames()?
                }
            };
            Ok(FrameField {
                path,
                columns: vec![("kappa", kappa), ("tau", tau)],
            })
        }
        FrameKind::Bishop1 => {
            let (initial, k1, k2, theta1, closed) = match frenet_apparatus(curve) {
                Ok(_) => {
                    let cf = closed_form_frames(curve, theta0, 0.0)?;
                    let p = cf.profile;
                    (cf.bishop1.frames[0], p.k1, p.k2, p.theta1, Some(cf.bishop1))
                }
                Err(e @ FrameError::Singular { .. }) if method == FrameMethod::ClosedForm => return Err(e.into()),
                Err(FrameError::Singular { .. }) => {
                    let initial = initial_bishop1_frame(curve, theta0);
                    let (_, k1, k2) = transport_bishop1(curve, &initial, config)?;
                    let (_, theta1) = curvatures_from_bishop1(&k1, &k2, crate::curve::DEFAULT_REGULARITY_TOL);
                    (initial, k1, k2, theta1, None)
                }
                Err(e) => return Err(e.into()),
            };
            let path = match (method, closed) {
                (FrameMethod::ClosedForm, Some(closed)) => closed,
                (FrameMethod::ClosedForm, None) => unreachable!("closed form needs the Frenet frame"),
                (FrameMethod::Vector, _) => propagate_bishop1(&k1, &k2, &initial, s, config)?,
                (FrameMethod::Spinor, _) => {
                    let phi0 = lift_frame(&initial, RepKind::Bishop1N1N2T)?;
                    propagate_spinor(SpinorRhs::Bishop1, &k1, &k2, &phi0, s, config)?.frames()?
                }
            };
            Ok(FrameField {
                path,
                columns: vec![("k1", k1), ("k2", k2), ("theta1", theta1)],
            })
        }
        FrameKind::Bishop2 => {
            let cf = closed_form_frames(curve, 0.0, theta0)?;
            let p = cf.profile;
            let path = match method {
                FrameMethod::ClosedForm => cf.bishop2,
                FrameMethod::Vector => propagate_bishop2(&p.eps1, &p.eps2, &cf.bishop2.frames[0], s, config)?,
                FrameMethod::Spinor => {
                    let lambda0 = lift_frame(&cf.bishop2.frames[0], RepKind::Bishop2Z1Z2B)?;
                    propagate_spinor(SpinorRhs::Bishop2, &p.eps1, &p.eps2, &lambda0, s, config)?.frames()?
                }
            };
            Ok(FrameField {
                path,
                columns: vec![("eps1", p.eps1), ("eps2", p.eps2), ("theta2", p.theta2)],
            })
        }
    }
}

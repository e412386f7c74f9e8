//! Fixed-step integration on a uniform arc-length grid.
//!
//! Every propagated quantity in the crate (vector frames and spinors) goes
//! through [`rk4_step`] with coefficients sampled on the curve grid and
//! evaluated at half-steps by [`midpoint_values`].

use std::ops::{Add, Mul};

use thiserror::Error;

/// Relative spacing error accepted in an arc-length grid.
pub const GRID_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid needs at least {min} samples, got {got}")]
    TooShort { min: usize, got: usize },
    #[error("grid is not uniform (relative deviation {0:.3e})")]
    NonUniform(f64),
    #[error("profile `{name}` has {got} samples, grid has {expected}")]
    LengthMismatch { name: &'static str, expected: usize, got: usize },
    #[error("profile `{name}` has a non-finite value at sample {index}")]
    NonFinite { name: &'static str, index: usize },
}

/// How coefficient profiles are evaluated between grid samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MidpointRule {
    /// Average of the two neighbouring samples; second-order accurate.
    Linear,
    /// Four-point Lagrange interpolation; fourth-order accurate, so the
    /// overall scheme keeps the order of RK4 for non-constant profiles.
    #[default]
    Cubic,
}

/// One-step method identifier. Only classical RK4 is provided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Rk4,
}

/// Settings shared by every propagator. The step is always the grid spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationConfig {
    /// Renormalize after this many steps; `None` disables renormalization.
    pub renormalize_every: Option<usize>,
    pub midpoint: MidpointRule,
    pub method: Method,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        Self {
            renormalize_every: Some(1),
            midpoint: MidpointRule::default(),
            method: Method::Rk4,
        }
    }
}

impl PropagationConfig {
    pub fn without_renormalization() -> Self {
        Self {
            renormalize_every: None,
            ..Self::default()
        }
    }

    /// Whether renormalization is due after step `step` (1-based).
    pub fn renormalize_after(&self, step: usize) -> bool {
        match self.renormalize_every {
            Some(every) => every > 0 && step % every == 0,
            None => false,
        }
    }
}

/// Spacing of a uniform grid, or an error when it is not uniform.
pub fn uniform_step(s: &[f64]) -> Result<f64, GridError> {
    if s.len() < 2 {
        return Err(GridError::TooShort { min: 2, got: s.len() });
    }
    let h = (s[s.len() - 1] - s[0]) / (s.len() - 1) as f64;
    let worst = s
        .windows(2)
        .map(|w| ((w[1] - w[0]) - h).abs() / h.abs())
        .fold(0.0, f64::max);
    if !(h > 0.0) || !(worst <= GRID_TOL) {
        return Err(GridError::NonUniform(worst));
    }
    Ok(h)
}

/// Checks that `values` is a finite profile on a grid of `expected` samples.
pub fn check_profile(name: &'static str, values: &[f64], expected: usize) -> Result<(), GridError> {
    if values.len() != expected {
        return Err(GridError::LengthMismatch {
            name,
            expected,
            got: values.len(),
        });
    }
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(GridError::NonFinite { name, index }),
        None => Ok(()),
    }
}

/// Profile values halfway between consecutive samples (length `n − 1`).
pub fn midpoint_values(values: &[f64], rule: MidpointRule) -> Vec<f64> {
    let n = values.len();
    match rule {
        MidpointRule::Linear => values.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect(),
        MidpointRule::Cubic if n < 4 => midpoint_values(values, MidpointRule::Linear),
        MidpointRule::Cubic => (0..n - 1)
            .map(|i| {
                if i == 0 {
                    (5.0 * values[0] + 15.0 * values[1] - 5.0 * values[2] + values[3]) / 16.0
                } else if i == n - 2 {
                    (values[n - 4] - 5.0 * values[n - 3] + 15.0 * values[n - 2] + 5.0 * values[n - 1])
                        / 16.0
                } else {
                    (-values[i - 1] + 9.0 * values[i] + 9.0 * values[i + 1] - values[i + 2]) / 16.0
                }
            })
            .collect(),
    }
}

/// One classical Runge–Kutta step of `y' = f(y, c)` where the coefficient
/// `c` is given at the start, middle and end of the step.
pub fn rk4_step<S, C, F>(y: S, h: f64, start: &C, mid: &C, end: &C, f: F) -> S
where
    S: Copy + Add<Output = S> + Mul<f64, Output = S>,
    F: Fn(&S, &C) -> S,
{
    let k1 = f(&y, start);
    let k2 = f(&(y + k1 * (0.5 * h)), mid);
    let k3 = f(&(y + k2 * (0.5 * h)), mid);
    let k4 = f(&(y + k3 * h), end);
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Cumulative integral `∫₀^{s_i} f` at every sample of a uniform grid.
///
/// Even-indexed samples use composite Simpson; odd-indexed samples add one
/// interval integrated by the quadratic through three neighbouring samples,
/// which keeps fourth-order accuracy everywhere.
pub fn cumulative_integral(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        out[1] = 0.5 * h * (values[0] + values[1]);
        return out;
    }
    for i in (2..n).step_by(2) {
        out[i] = out[i - 2] + h / 3.0 * (values[i - 2] + 4.0 * values[i - 1] + values[i]);
    }
    for i in (1..n).step_by(2) {
        let interval = if i + 1 < n {
            h / 12.0 * (5.0 * values[i - 1] + 8.0 * values[i] - values[i + 1])
        } else {
            h / 12.0 * (-values[i - 2] + 8.0 * values[i - 1] + 5.0 * values[i])
        };
        out[i] = out[i - 1] + interval;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_midpoints_are_exact_for_cubics() {
        let h = 0.1;
        let f = |x: f64| 2.0 * x * x * x - x * x + 0.5 * x - 3.0;
        let values: Vec<f64> = (0..8).map(|i| f(i as f64 * h)).collect();
        let mids = midpoint_values(&values, MidpointRule::Cubic);
        for (i, m) in mids.iter().enumerate() {
            assert!((m - f((i as f64 + 0.5) * h)).abs() < 1e-13, "i={i}");
        }
    }

    #[test]
    fn linear_midpoints_average() {
        assert_eq!(midpoint_values(&[0.0, 1.0, 4.0], MidpointRule::Linear), vec![0.5, 2.5]);
    }

    #[test]
    fn cumulative_integral_of_sine() {
        for n in [1001usize, 1000] {
            let h = std::f64::consts::PI / (n - 1) as f64;
            let values: Vec<f64> = (0..n).map(|i| (i as f64 * h).sin()).collect();
            let integral = cumulative_integral(&values, h);
            assert!((integral[n - 1] - 2.0).abs() < 1e-8);
            for (i, v) in integral.iter().enumerate() {
                let exact = 1.0 - (i as f64 * h).cos();
                assert!((v - exact).abs() < 1e-10, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn cumulative_integral_of_constant_is_linear() {
        let values = vec![0.5; 11];
        let integral = cumulative_integral(&values, 0.1);
        for (i, v) in integral.iter().enumerate() {
            assert!((v - 0.05 * i as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn rk4_integrates_exponential() {
        let mut y = 1.0f64;
        let h = 0.01;
        for _ in 0..100 {
            y = rk4_step(y, h, &(), &(), &(), |y, _| *y);
        }
        assert!((y - 1f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn grid_checks() {
        assert_eq!(uniform_step(&[0.0, 0.5, 1.0]).unwrap(), 0.5);
        assert!(matches!(uniform_step(&[0.0, 0.4, 1.0]), Err(GridError::NonUniform(_))));
        assert!(uniform_step(&[0.0]).is_err());
        assert!(check_profile("k", &[1.0, f64::NAN], 2).is_err());
        assert!(check_profile("k", &[1.0], 2).is_err());
    }
}

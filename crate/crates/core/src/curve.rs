//! Curve definitions and arc-length sampling.
//!
//! Analytic curves are sampled from closed-form parameter derivatives that are
//! converted to arc-length derivatives by the chain rule. Polylines are
//! re-gridded by chord length and differentiated numerically. Both routes
//! produce a [`SampledCurve`] on a uniform arc-length grid.

use std::collections::BTreeMap;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vec3 = Vector3<f64>;

/// Minimum number of samples on any grid.
pub const MIN_SAMPLES: usize = 5;

/// Curvature below this value is treated as a Frenet singularity.
pub const DEFAULT_REGULARITY_TOL: f64 = 1e-8;

/// Allowed deviation of `|d1|` from one before a sample is marked irregular.
pub const UNIT_SPEED_TOL: f64 = 1e-4;

/// Relative spacing error tolerated by [`estimate_derivatives`].
const GRID_UNIFORMITY_TOL: f64 = 1e-6;

/// Highest supported polynomial degree for parametric curves.
pub const MAX_POLY_DEGREE: usize = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("malformed curve document: {0}")]
    Malformed(String),
    #[error("unknown curve kind `{0}`")]
    UnknownKind(String),
    #[error("missing parameter `{param}` for {kind} curve")]
    MissingParam { kind: &'static str, param: &'static str },
    #[error("sample count {0} is below the minimum of {MIN_SAMPLES}")]
    TooFewSamples(usize),
    #[error("degenerate domain [{0}, {1}]")]
    DegenerateDomain(f64, f64),
    #[error("polyline needs at least {MIN_SAMPLES} points, got {0}")]
    TooFewPoints(usize),
    #[error("consecutive points at index {0} coincide")]
    RepeatedPoint(usize),
    #[error("parameter is not strictly increasing at index {0}")]
    NonMonotoneParameter(usize),
    #[error("curve is degenerate at parameter {0} (zero speed)")]
    ZeroSpeed(f64),
    #[error("non-finite value encountered at sample {0}")]
    NonFinite(usize),
    #[error("grid is not uniform (spacing deviates by {0:.3e} relative)")]
    NonUniformGrid(f64),
    #[error("invalid step {0}")]
    InvalidStep(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    Line,
    Circle,
    Helix,
    Polyline,
    #[serde(alias = "parametric")]
    GenericParametric,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Line => "line",
            CurveKind::Circle => "circle",
            CurveKind::Helix => "helix",
            CurveKind::Polyline => "polyline",
            CurveKind::GenericParametric => "generic-parametric",
        }
    }

    fn parse(name: &str) -> Result<Self, CurveError> {
        match name {
            "line" => Ok(CurveKind::Line),
            "circle" => Ok(CurveKind::Circle),
            "helix" => Ok(CurveKind::Helix),
            "polyline" => Ok(CurveKind::Polyline),
            "generic-parametric" | "parametric" => Ok(CurveKind::GenericParametric),
            other => Err(CurveError::UnknownKind(other.to_string())),
        }
    }
}

/// A validated curve definition.
///
/// Parameter names by kind:
/// - `line`: origin `ox, oy, oz` (default 0) and direction `dx, dy, dz`
///   (default `1, 0, 0`); position is `origin + t * direction`.
/// - `circle`: radius `r`, in the xy-plane about the origin.
/// - `helix`: radius `a` and pitch `b`; position `(a cos t, a sin t, b t)`.
/// - `generic-parametric`: polynomial coefficients `x0..x5`, `y0..y5`,
///   `z0..z5` (missing ones are zero), so `x(t) = x0 + x1 t + ...`.
/// - `polyline`: `points`, re-gridded by chord length.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub kind: CurveKind,
    pub params: BTreeMap<String, f64>,
    pub domain: [f64; 2],
    pub sample_count: usize,
    pub points: Vec<Vec3>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurveSpec {
    kind: String,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    domain: Option<[f64; 2]>,
    samples: Option<usize>,
    points: Option<Vec<[f64; 3]>>,
}

/// Parse and validate a JSON curve document.
pub fn load_curve_spec(source: &str) -> Result<CurveSpec, CurveError> {
    let raw: RawCurveSpec =
        serde_json::from_str(source).map_err(|e| CurveError::Malformed(e.to_string()))?;
    let kind = CurveKind::parse(&raw.kind)?;
    let spec = match kind {
        CurveKind::Polyline => {
            let points: Vec<Vec3> = raw
                .points
                .ok_or(CurveError::MissingParam {
                    kind: "polyline",
                    param: "points",
                })?
                .into_iter()
                .map(Vec3::from)
                .collect();
            let sample_count = raw.samples.unwrap_or(points.len());
            let domain = [0.0, points.len().saturating_sub(1) as f64];
            CurveSpec {
                kind,
                params: raw.params,
                domain,
                sample_count,
                points,
            }
        }
        _ => {
            let domain = raw.domain.ok_or(CurveError::MissingParam {
                kind: kind.name(),
                param: "domain",
            })?;
            let sample_count = raw.samples.ok_or(CurveError::MissingParam {
                kind: kind.name(),
                param: "samples",
            })?;
            CurveSpec {
                kind,
                params: raw.params,
                domain,
                sample_count,
                points: Vec::new(),
            }
        }
    };
    spec.validate()?;
    Ok(spec)
}

impl CurveSpec {
    pub fn helix(a: f64, b: f64, domain: [f64; 2], samples: usize) -> Self {
        Self::analytic(CurveKind::Helix, &[("a", a), ("b", b)], domain, samples)
    }

    pub fn circle(r: f64, domain: [f64; 2], samples: usize) -> Self {
        Self::analytic(CurveKind::Circle, &[("r", r)], domain, samples)
    }

    pub fn line(origin: Vec3, direction: Vec3, domain: [f64; 2], samples: usize) -> Self {
        Self::analytic(
            CurveKind::Line,
            &[
                ("ox", origin.x),
                ("oy", origin.y),
                ("oz", origin.z),
                ("dx", direction.x),
                ("dy", direction.y),
                ("dz", direction.z),
            ],
            domain,
            samples,
        )
    }

    /// Polynomial curve; `coeffs[axis][power]`.
    pub fn polynomial(coeffs: [[f64; MAX_POLY_DEGREE + 1]; 3], domain: [f64; 2], samples: usize) -> Self {
        let mut params = BTreeMap::new();
        for (axis, name) in ["x", "y", "z"].iter().enumerate() {
            for (power, c) in coeffs[axis].iter().enumerate() {
                if *c != 0.0 {
                    params.insert(format!("{name}{power}"), *c);
                }
            }
        }
        CurveSpec {
            kind: CurveKind::GenericParametric,
            params,
            domain,
            sample_count: samples,
            points: Vec::new(),
        }
    }

    pub fn polyline(points: Vec<Vec3>) -> Self {
        CurveSpec {
            kind: CurveKind::Polyline,
            params: BTreeMap::new(),
            domain: [0.0, points.len().saturating_sub(1) as f64],
            sample_count: points.len(),
            points,
        }
    }

    fn analytic(kind: CurveKind, params: &[(&str, f64)], domain: [f64; 2], samples: usize) -> Self {
        CurveSpec {
            kind,
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            domain,
            sample_count: samples,
            points: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), CurveError> {
        if self.kind == CurveKind::Polyline && self.points.len() < MIN_SAMPLES {
            return Err(CurveError::TooFewPoints(self.points.len()));
        }
        if self.sample_count < MIN_SAMPLES {
            return Err(CurveError::TooFewSamples(self.sample_count));
        }
        match self.kind {
            CurveKind::Polyline => {
                if self.points.len() < MIN_SAMPLES {
                    return Err(CurveError::TooFewPoints(self.points.len()));
                }
                for (i, w) in self.points.windows(2).enumerate() {
                    if !w[0].iter().chain(w[1].iter()).all(|v| v.is_finite()) {
                        return Err(CurveError::NonFinite(i));
                    }
                    if w[0] == w[1] {
                        return Err(CurveError::RepeatedPoint(i));
                    }
                }
            }
            _ => {
                let [t0, t1] = self.domain;
                if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
                    return Err(CurveError::DegenerateDomain(t0, t1));
                }
                self.analytic_curve()?;
            }
        }
        Ok(())
    }

    fn param(&self, name: &'static str) -> Result<f64, CurveError> {
        self.params
            .get(name)
            .copied()
            .ok_or(CurveError::MissingParam {
                kind: self.kind.name(),
                param: name,
            })
    }

    fn param_or(&self, name: &str, default: f64) -> f64 {
        self.params.get(name).copied().unwrap_or(default)
    }

    fn analytic_curve(&self) -> Result<AnalyticCurve, CurveError> {
        let curve = match self.kind {
            CurveKind::Line => AnalyticCurve::Line {
                origin: Vec3::new(
                    self.param_or("ox", 0.0),
                    self.param_or("oy", 0.0),
                    self.param_or("oz", 0.0),
                ),
                direction: Vec3::new(
                    self.param_or("dx", 1.0),
                    self.param_or("dy", 0.0),
                    self.param_or("dz", 0.0),
                ),
            },
            CurveKind::Circle => AnalyticCurve::Circle { r: self.param("r")? },
            CurveKind::Helix => AnalyticCurve::Helix {
                a: self.param("a")?,
                b: self.param("b")?,
            },
            CurveKind::GenericParametric => {
                let mut coeffs = [[0.0; MAX_POLY_DEGREE + 1]; 3];
                for (name, value) in &self.params {
                    let mut chars = name.chars();
                    let axis = match chars.next() {
                        Some('x') => 0,
                        Some('y') => 1,
                        Some('z') => 2,
                        _ => return Err(CurveError::Malformed(format!("unknown parameter `{name}`"))),
                    };
                    let power: usize = chars
                        .as_str()
                        .parse()
                        .ok()
                        .filter(|p| *p <= MAX_POLY_DEGREE)
                        .ok_or_else(|| CurveError::Malformed(format!("unknown parameter `{name}`")))?;
                    coeffs[axis][power] = *value;
                }
                if coeffs.iter().all(|c| c[1..].iter().all(|v| *v == 0.0)) {
                    return Err(CurveError::MissingParam {
                        kind: "generic-parametric",
                        param: "non-constant coefficient",
                    });
                }
                AnalyticCurve::Polynomial { coeffs }
            }
            CurveKind::Polyline => unreachable!("polylines are not analytic"),
        };
        if !curve.params_finite() {
            return Err(CurveError::Malformed("non-finite parameter".into()));
        }
        Ok(curve)
    }

    /// Total arc length of the curve over its domain.
    pub fn arc_length(&self) -> Result<f64, CurveError> {
        match self.kind {
            CurveKind::Polyline => Ok(chord_lengths(&self.points)?.last().copied().unwrap_or(0.0)),
            _ => {
                let curve = self.analytic_curve()?;
                Ok(ArcLengthTable::new(&curve, self.domain, 1024).total())
            }
        }
    }

    /// Same curve, with the sample count chosen so the arc-length spacing is
    /// as close as possible to `step`.
    pub fn with_step(&self, step: f64) -> Result<CurveSpec, CurveError> {
        if !(step.is_finite() && step > 0.0) {
            return Err(CurveError::InvalidStep(step));
        }
        let length = self.arc_length()?;
        let intervals = (length / step).round().max((MIN_SAMPLES - 1) as f64) as usize;
        let mut spec = self.clone();
        spec.sample_count = intervals + 1;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy)]
enum AnalyticCurve {
    Line { origin: Vec3, direction: Vec3 },
    Circle { r: f64 },
    Helix { a: f64, b: f64 },
    Polynomial { coeffs: [[f64; MAX_POLY_DEGREE + 1]; 3] },
}

impl AnalyticCurve {
    fn params_finite(&self) -> bool {
        match self {
            AnalyticCurve::Line { origin, direction } => {
                origin.iter().chain(direction.iter()).all(|v| v.is_finite())
            }
            AnalyticCurve::Circle { r } => r.is_finite(),
            AnalyticCurve::Helix { a, b } => a.is_finite() && b.is_finite(),
            AnalyticCurve::Polynomial { coeffs } => coeffs.iter().flatten().all(|v| v.is_finite()),
        }
    }

    /// Position and the first three parameter derivatives at `t`.
    fn eval(&self, t: f64) -> [Vec3; 4] {
        match *self {
            AnalyticCurve::Line { origin, direction } => {
                [origin + direction * t, direction, Vec3::zeros(), Vec3::zeros()]
            }
            AnalyticCurve::Circle { r } => {
                let (s, c) = t.sin_cos();
                [
                    Vec3::new(r * c, r * s, 0.0),
                    Vec3::new(-r * s, r * c, 0.0),
                    Vec3::new(-r * c, -r * s, 0.0),
                    Vec3::new(r * s, -r * c, 0.0),
                ]
            }
            AnalyticCurve::Helix { a, b } => {
                let (s, c) = t.sin_cos();
                [
                    Vec3::new(a * c, a * s, b * t),
                    Vec3::new(-a * s, a * c, b),
                    Vec3::new(-a * c, -a * s, 0.0),
                    Vec3::new(a * s, -a * c, 0.0),
                ]
            }
            AnalyticCurve::Polynomial { ref coeffs } => {
                let mut out = [Vec3::zeros(); 4];
                for axis in 0..3 {
                    let d = poly_derivatives(&coeffs[axis], t);
                    for k in 0..4 {
                        out[k][axis] = d[k];
                    }
                }
                out
            }
        }
    }

    fn speed(&self, t: f64) -> f64 {
        self.eval(t)[1].norm()
    }
}

/// Value and first three derivatives of a polynomial by Horner's scheme.
fn poly_derivatives(c: &[f64; MAX_POLY_DEGREE + 1], t: f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for p in (k..=MAX_POLY_DEGREE).rev() {
            let falling: f64 = ((p - k + 1)..=p).map(|v| v as f64).product();
            acc = acc * t + c[p] * falling;
        }
        *slot = acc;
    }
    out
}

/// Converts parameter derivatives to arc-length derivatives.
fn arc_length_derivatives(r1: Vec3, r2: Vec3, r3: Vec3) -> Option<[Vec3; 3]> {
    let v = r1.norm();
    if v <= f64::MIN_POSITIVE || !v.is_finite() {
        return None;
    }
    let dv = r1.dot(&r2) / v;
    let ddv = (r2.norm_squared() + r1.dot(&r3) - dv * dv) / v;
    let d1 = r1 / v;
    let d2 = r2 / (v * v) - r1 * (dv / v.powi(3));
    // d/dt of d2, divided by v
    let d2_dt = r3 / (v * v) - r2 * (2.0 * dv / v.powi(3))
        - (r2 * dv + r1 * ddv) / v.powi(3)
        + r1 * (3.0 * dv * dv / v.powi(4));
    Some([d1, d2, d2_dt / v])
}

const GAUSS5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GAUSS5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Cumulative arc length on a fine parameter grid, with Newton inversion.
struct ArcLengthTable<'a> {
    curve: &'a AnalyticCurve,
    knots: Vec<f64>,
    cumulative: Vec<f64>,
}

impl<'a> ArcLengthTable<'a> {
    fn new(curve: &'a AnalyticCurve, domain: [f64; 2], intervals: usize) -> Self {
        let [t0, t1] = domain;
        let dt = (t1 - t0) / intervals as f64;
        let knots: Vec<f64> = (0..=intervals).map(|k| t0 + dt * k as f64).collect();
        let mut cumulative = Vec::with_capacity(knots.len());
        cumulative.push(0.0);
        for w in knots.windows(2) {
            let prev = *cumulative.last().unwrap();
            cumulative.push(prev + gauss_length(curve, w[0], w[1]));
        }
        Self {
            curve,
            knots,
            cumulative,
        }
    }

    fn total(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Parameter value at arc length `s` from the domain start.
    fn invert(&self, s: f64) -> f64 {
        let k = match self
            .cumulative
            .binary_search_by(|c| c.partial_cmp(&s).unwrap())
        {
            Ok(k) => return self.knots[k],
            Err(k) => k.clamp(1, self.knots.len() - 1) - 1,
        };
        let (ta, tb) = (self.knots[k], self.knots[k + 1]);
        let base = self.cumulative[k];
        let span = self.cumulative[k + 1] - base;
        let mut t = ta + (tb - ta) * ((s - base) / span).clamp(0.0, 1.0);
        for _ in 0..8 {
            let residual = base + gauss_length(self.curve, ta, t) - s;
            let step = residual / self.curve.speed(t);
            t = (t - step).clamp(ta, tb);
            if step.abs() <= 1e-15 * (1.0 + t.abs()) {
                break;
            }
        }
        t
    }
}

fn gauss_length(curve: &AnalyticCurve, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    GAUSS5_NODES
        .iter()
        .zip(GAUSS5_WEIGHTS.iter())
        .map(|(x, w)| w * curve.speed(mid + half * x))
        .sum::<f64>()
        * half
}

/// A curve on a uniform arc-length grid with its first three arc-length
/// derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    pub s: Vec<f64>,
    pub position: Vec<Vec3>,
    pub d1: Vec<Vec3>,
    pub d2: Vec<Vec3>,
    pub d3: Vec<Vec3>,
    /// `true` where `|d1|` is within [`UNIT_SPEED_TOL`] of one.
    pub regular: Vec<bool>,
}

impl SampledCurve {
    fn assemble(s: Vec<f64>, position: Vec<Vec3>, d1: Vec<Vec3>, d2: Vec<Vec3>, d3: Vec<Vec3>) -> Result<Self, CurveError> {
        for i in 0..s.len() {
            let finite = s[i].is_finite()
                && [position[i], d1[i], d2[i], d3[i]]
                    .iter()
                    .all(|v| v.iter().all(|x| x.is_finite()));
            if !finite {
                return Err(CurveError::NonFinite(i));
            }
        }
        let regular = d1
            .iter()
            .map(|d| (d.norm() - 1.0).abs() <= UNIT_SPEED_TOL)
            .collect();
        Ok(Self {
            s,
            position,
            d1,
            d2,
            d3,
            regular,
        })
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Grid spacing.
    pub fn step(&self) -> f64 {
        (self.s[self.s.len() - 1] - self.s[0]) / (self.s.len() - 1) as f64
    }

    pub fn length(&self) -> f64 {
        self.s[self.s.len() - 1] - self.s[0]
    }

    /// Whether the first and last positions coincide within `tol`.
    pub fn is_closed(&self, tol: f64) -> bool {
        (self.position[0] - self.position[self.len() - 1]).norm() <= tol
    }

    /// Unit tangent at sample `i`.
    pub fn tangent(&self, i: usize) -> Vec3 {
        self.d1[i].normalize()
    }

    /// Curvature `|d1 x d2| / |d1|^3`, which is `|d2|` at unit speed.
    pub fn curvature(&self, i: usize) -> f64 {
        self.d1[i].cross(&self.d2[i]).norm() / self.d1[i].norm().powi(3)
    }
}

/// Sample a curve on a uniform arc-length grid.
pub fn sample_curve(spec: &CurveSpec) -> Result<SampledCurve, CurveError> {
    spec.validate()?;
    if spec.kind == CurveKind::Polyline {
        let params: Vec<f64> = (0..spec.points.len()).map(|i| i as f64).collect();
        return resample_polyline(&params, &spec.points, spec.sample_count);
    }
    let curve = spec.analytic_curve()?;
    let n = spec.sample_count;
    let table = ArcLengthTable::new(&curve, spec.domain, (4 * n).max(1024));
    let total = table.total();
    if !(total > 0.0) {
        return Err(CurveError::ZeroSpeed(spec.domain[0]));
    }
    let h = total / (n - 1) as f64;
    let s: Vec<f64> = (0..n).map(|i| h * i as f64).collect();
    let mut position = Vec::with_capacity(n);
    let (mut d1, mut d2, mut d3) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for (i, &si) in s.iter().enumerate() {
        let t = match i {
            0 => spec.domain[0],
            _ if i == n - 1 => spec.domain[1],
            _ => table.invert(si),
        };
        let [r0, r1, r2, r3] = curve.eval(t);
        let [a, b, c] = arc_length_derivatives(r1, r2, r3).ok_or(CurveError::ZeroSpeed(t))?;
        position.push(r0);
        d1.push(a);
        d2.push(b);
        d3.push(c);
    }
    SampledCurve::assemble(s, position, d1, d2, d3)
}

fn chord_lengths(points: &[Vec3]) -> Result<Vec<f64>, CurveError> {
    let mut table = Vec::with_capacity(points.len());
    table.push(0.0);
    for (i, w) in points.windows(2).enumerate() {
        let d = (w[1] - w[0]).norm();
        if !d.is_finite() {
            return Err(CurveError::NonFinite(i));
        }
        if d == 0.0 {
            return Err(CurveError::RepeatedPoint(i));
        }
        table.push(table[i] + d);
    }
    Ok(table)
}

/// Re-grid raw samples to uniform chord-length spacing, keeping the sample
/// count, and estimate derivatives on the new grid.
pub fn reparameterize_arclength(params: &[f64], positions: &[Vec3]) -> Result<SampledCurve, CurveError> {
    resample_polyline(params, positions, positions.len())
}

fn resample_polyline(params: &[f64], positions: &[Vec3], count: usize) -> Result<SampledCurve, CurveError> {
    if positions.len() < MIN_SAMPLES {
        return Err(CurveError::TooFewPoints(positions.len()));
    }
    if count < MIN_SAMPLES {
        return Err(CurveError::TooFewSamples(count));
    }
    if params.len() != positions.len() {
        return Err(CurveError::Malformed(format!(
            "{} parameters for {} positions",
            params.len(),
            positions.len()
        )));
    }
    for (i, w) in params.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return Err(CurveError::NonMonotoneParameter(i + 1));
        }
    }
    let chord = chord_lengths(positions)?;
    let total = chord[chord.len() - 1];
    let h = total / (count - 1) as f64;
    let s: Vec<f64> = (0..count).map(|i| h * i as f64).collect();

    let mut resampled = vec![Vec3::zeros(); count];
    for axis in 0..3 {
        let values: Vec<f64> = positions.iter().map(|p| p[axis]).collect();
        let interp = Pchip::new(&chord, &values);
        for (j, &sj) in s.iter().enumerate() {
            resampled[j][axis] = if j == 0 {
                values[0]
            } else if j == count - 1 {
                values[values.len() - 1]
            } else {
                interp.eval(sj)
            };
        }
    }
    let [d1, d2, d3] = estimate_derivatives(&s, &resampled)?;
    SampledCurve::assemble(s, resampled, d1, d2, d3)
}

/// Monotone piecewise-cubic Hermite interpolant (Fritsch–Butland slopes).
struct Pchip<'a> {
    x: &'a [f64],
    y: Vec<f64>,
    slopes: Vec<f64>,
}

impl<'a> Pchip<'a> {
    fn new(x: &'a [f64], y: &[f64]) -> Self {
        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut slopes = vec![0.0; n];
        for k in 1..n - 1 {
            if delta[k - 1] * delta[k] > 0.0 {
                let w1 = 2.0 * h[k] + h[k - 1];
                let w2 = h[k] + 2.0 * h[k - 1];
                slopes[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
            }
        }
        slopes[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        slopes[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        Self {
            x,
            y: y.to_vec(),
            slopes,
        }
    }

    fn eval(&self, t: f64) -> f64 {
        let k = match self.x.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(k) => return self.y[k],
            Err(k) => k.clamp(1, self.x.len() - 1) - 1,
        };
        let h = self.x[k + 1] - self.x[k];
        let u = (t - self.x[k]) / h;
        let (u2, u3) = (u * u, u * u * u);
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        h00 * self.y[k] + h10 * h * self.slopes[k] + h01 * self.y[k + 1] + h11 * h * self.slopes[k + 1]
    }
}

/// Three-point shape-preserving end slope.
fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

/// Finite-difference weights for the `order`-th derivative at `z` over
/// `nodes` (Fornberg's recursion).
fn fd_weights(z: f64, nodes: &[f64], order: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Second-order finite-difference stencil for derivative `order` at index `i`
/// of an `n`-point grid: centered where it fits, one-sided near the ends.
fn stencil(i: usize, n: usize, order: usize) -> (usize, Vec<f64>) {
    let central = if (order + 1) % 2 == 1 { order + 1 } else { order + 2 };
    let half = central / 2;
    let (start, width) = if i >= half && i + half < n {
        (i - half, central)
    } else {
        let width = (order + 2).max(central);
        (i.saturating_sub(width / 2).min(n - width), width)
    };
    let nodes: Vec<f64> = (start..start + width).map(|k| k as f64 - i as f64).collect();
    (start, fd_weights(0.0, &nodes, order))
}

/// First, second and third derivatives of positions on a uniform grid,
/// second-order accurate everywhere.
pub fn estimate_derivatives(s: &[f64], positions: &[Vec3]) -> Result<[Vec<Vec3>; 3], CurveError> {
    let n = positions.len();
    if n < MIN_SAMPLES || s.len() != n {
        return Err(CurveError::TooFewSamples(n.min(s.len())));
    }
    let h = (s[n - 1] - s[0]) / (n - 1) as f64;
    if !(h > 0.0) {
        return Err(CurveError::InvalidStep(h));
    }
    let worst = s
        .windows(2)
        .map(|w| ((w[1] - w[0]) - h).abs() / h)
        .fold(0.0, f64::max);
    if worst > GRID_UNIFORMITY_TOL {
        return Err(CurveError::NonUniformGrid(worst));
    }
    let mut out = [vec![Vec3::zeros(); n], vec![Vec3::zeros(); n], vec![Vec3::zeros(); n]];
    for (order, dest) in (1..=3).zip(out.iter_mut()) {
        let scale = h.powi(order as i32);
        for (i, slot) in dest.iter_mut().enumerate() {
            let (start, weights) = stencil(i, n, order);
            let mut acc = Vec3::zeros();
            for (k, w) in weights.iter().enumerate() {
                acc += positions[start + k] * *w;
            }
            *slot = acc / scale;
        }
    }
    Ok(out)
}

/// Flags samples whose curvature is below `tol`, where the Frenet frame is
/// undefined.
pub fn check_regularity(curve: &SampledCurve, tol: f64) -> Vec<bool> {
    (0..curve.len()).map(|i| curve.curvature(i) < tol).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn loads_helix_document() {
        let spec = load_curve_spec(r#"{"kind":"helix","params":{"a":1,"b":1},"domain":[0,12.566],"samples":1000}"#)
            .unwrap();
        assert_eq!(spec.kind, CurveKind::Helix);
        assert_eq!(spec.params["a"], 1.0);
        assert_eq!(spec.params["b"], 1.0);
        assert_eq!(spec.domain, [0.0, 12.566]);
        assert_eq!(spec.sample_count, 1000);
    }

    #[test]
    fn loads_circle_document() {
        let spec = load_curve_spec(r#"{"kind":"circle","params":{"r":2},"domain":[0,6.283],"samples":100}"#).unwrap();
        assert_eq!(spec.kind, CurveKind::Circle);
        assert_eq!(spec.params["r"], 2.0);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(
            load_curve_spec(r#"{"kind":"polyline","points":[[0,0,0],[1,0,0]]}"#),
            Err(CurveError::TooFewPoints(2))
        ));
        assert!(matches!(
            load_curve_spec(r#"{"kind":"spiral","domain":[0,1],"samples":10}"#),
            Err(CurveError::UnknownKind(_))
        ));
        assert!(matches!(
            load_curve_spec(r#"{"kind":"helix","params":{"a":1},"domain":[0,1],"samples":10}"#),
            Err(CurveError::MissingParam { param: "b", .. })
        ));
        assert!(matches!(
            load_curve_spec(r#"{"kind":"circle","params":{"r":1},"domain":[0,1],"samples":4}"#),
            Err(CurveError::TooFewSamples(4))
        ));
        assert!(matches!(load_curve_spec("{not json"), Err(CurveError::Malformed(_))));
        assert!(matches!(
            load_curve_spec(r#"{"kind":"circle","params":{"r":1},"domain":[1,1],"samples":10}"#),
            Err(CurveError::DegenerateDomain(..))
        ));
    }

    #[test]
    fn line_has_constant_tangent_and_zero_higher_derivatives() {
        let c = sample_curve(&CurveSpec::line(Vec3::zeros(), Vec3::x(), [0.0, 1.0], 11)).unwrap();
        for i in 0..c.len() {
            assert_eq!(c.d1[i], Vec3::x());
            assert_eq!(c.d2[i], Vec3::zeros());
            assert_eq!(c.d3[i], Vec3::zeros());
        }
        assert!((c.length() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn helix_is_unit_speed_with_closed_form_curvature() {
        let c = sample_curve(&CurveSpec::helix(1.0, 1.0, [0.0, 4.0 * PI], 1000)).unwrap();
        for i in 0..c.len() {
            assert!((c.d1[i].norm() - 1.0).abs() <= 1e-9);
            assert!((c.d2[i].norm() - 0.5).abs() <= 1e-12);
            assert!(c.regular[i]);
        }
    }

    #[test]
    fn circle_curvature_and_length() {
        let c = sample_curve(&CurveSpec::circle(2.0, [0.0, 2.0 * PI], 10_001)).unwrap();
        for d2 in &c.d2 {
            assert!((d2.norm() - 0.5).abs() < 1e-12);
        }
        assert!((c.length() - 4.0 * PI).abs() <= 1e-6 * 2.0);
    }

    #[test]
    fn polynomial_curve_is_resampled_to_unit_speed() {
        // y = x^3 on x in [-1, 1]
        let mut coeffs = [[0.0; MAX_POLY_DEGREE + 1]; 3];
        coeffs[0][1] = 1.0;
        coeffs[1][3] = 1.0;
        let c = sample_curve(&CurveSpec::polynomial(coeffs, [-1.0, 1.0], 2001)).unwrap();
        let h = c.step();
        for i in 0..c.len() {
            assert!((c.d1[i].norm() - 1.0).abs() <= 1e-9);
        }
        for i in 1..c.len() {
            let chord = (c.position[i] - c.position[i - 1]).norm();
            assert!(chord <= h * (1.0 + 1e-12));
            assert!(chord >= h * (1.0 - 1e-3));
        }
        // d2 against centered differences of d1
        for i in 1..c.len() - 1 {
            let fd = (c.d1[i + 1] - c.d1[i - 1]) / (2.0 * h);
            assert!((fd - c.d2[i]).norm() < 1e-4, "i={i}");
        }
        let flags = check_regularity(&c, DEFAULT_REGULARITY_TOL);
        assert!(flags[1000]);
        assert_eq!(flags.iter().filter(|f| **f).count(), 1);
    }

    #[test]
    fn reparameterize_keeps_unit_speed_line() {
        let params: Vec<f64> = (0..21).map(|i| i as f64 * 0.05).collect();
        let pts: Vec<Vec3> = params.iter().map(|t| Vec3::new(*t, 0.0, 0.0)).collect();
        let c = reparameterize_arclength(&params, &pts).unwrap();
        for i in 0..c.len() {
            assert!((c.s[i] - params[i]).abs() < 1e-12);
            assert!((c.position[i] - pts[i]).norm() < 1e-12);
            assert!((c.d1[i] - Vec3::x()).norm() < 1e-9);
        }
    }

    #[test]
    fn reparameterized_circle_has_near_exact_circumference() {
        let n = 1000;
        let params: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / (n - 1) as f64).collect();
        let pts: Vec<Vec3> = params.iter().map(|t| Vec3::new(t.cos(), t.sin(), 0.0)).collect();
        let c = reparameterize_arclength(&params, &pts).unwrap();
        assert!((c.length() - 2.0 * PI).abs() < 1e-4);
    }

    #[test]
    fn reparameterize_rejects_degenerate_input() {
        let params: Vec<f64> = (0..6).map(|i| i as f64).collect();
        let mut pts: Vec<Vec3> = params.iter().map(|t| Vec3::new(*t, 0.0, 0.0)).collect();
        pts[3] = pts[2];
        assert_eq!(reparameterize_arclength(&params, &pts), Err(CurveError::RepeatedPoint(2)));
        let pts: Vec<Vec3> = params.iter().map(|t| Vec3::new(*t, 0.0, 0.0)).collect();
        let mut bad = params.clone();
        bad[4] = 1.0;
        assert_eq!(reparameterize_arclength(&bad, &pts), Err(CurveError::NonMonotoneParameter(4)));
    }

    #[test]
    fn derivatives_of_straight_line_vanish() {
        let h = 0.01;
        let s: Vec<f64> = (0..50).map(|i| i as f64 * h).collect();
        let pts: Vec<Vec3> = s.iter().map(|t| Vec3::new(0.6 * t, 0.8 * t, 0.0)).collect();
        let [d1, d2, d3] = estimate_derivatives(&s, &pts).unwrap();
        for i in 0..s.len() {
            assert!((d1[i] - Vec3::new(0.6, 0.8, 0.0)).norm() < 1e-12);
            assert!(d2[i].norm() <= 1e-10);
            assert!(d3[i].norm() <= 1e-7);
        }
    }

    #[test]
    fn derivatives_of_unit_circle() {
        let h = 1e-3;
        let s: Vec<f64> = (0..2000).map(|i| i as f64 * h).collect();
        let pts: Vec<Vec3> = s.iter().map(|t| Vec3::new(t.cos(), t.sin(), 0.0)).collect();
        let [_, d2, _] = estimate_derivatives(&s, &pts).unwrap();
        for v in &d2 {
            assert!((v.norm() - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn derivatives_exact_for_quadratics() {
        let h = 0.1;
        let s: Vec<f64> = (0..12).map(|i| i as f64 * h).collect();
        let pts: Vec<Vec3> = s
            .iter()
            .map(|t| Vec3::new(3.0 * t * t - t, -0.5 * t * t + 2.0, t * t))
            .collect();
        let [_, d2, _] = estimate_derivatives(&s, &pts).unwrap();
        for v in &d2 {
            assert!((v - Vec3::new(6.0, -1.0, 2.0)).norm() <= 1e-9);
        }
    }

    #[test]
    fn derivative_estimation_preconditions() {
        let s = [0.0, 1.0, 2.0];
        let pts = [Vec3::zeros(), Vec3::x(), Vec3::x() * 2.0];
        assert!(estimate_derivatives(&s, &pts).is_err());
        let s = [0.0, 1.0, 2.0, 3.5, 4.0];
        let pts = [Vec3::zeros(); 5];
        assert!(matches!(estimate_derivatives(&s, &pts), Err(CurveError::NonUniformGrid(_))));
    }

    #[test]
    fn fornberg_matches_textbook_stencils() {
        let w = fd_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert_eq!(w, vec![1.0, -2.0, 1.0]);
        let w = fd_weights(0.0, &[0.0, 1.0, 2.0], 1);
        assert_eq!(w, vec![-1.5, 2.0, -0.5]);
        let w = fd_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 3);
        for (a, b) in w.iter().zip([-0.5, 1.0, 0.0, -1.0, 0.5]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn regularity_flags() {
        let line = sample_curve(&CurveSpec::line(Vec3::zeros(), Vec3::x(), [0.0, 1.0], 11)).unwrap();
        assert!(check_regularity(&line, DEFAULT_REGULARITY_TOL).iter().all(|f| *f));
        let helix = sample_curve(&CurveSpec::helix(1.0, 1.0, [0.0, 6.0], 101)).unwrap();
        assert!(check_regularity(&helix, DEFAULT_REGULARITY_TOL).iter().all(|f| !*f));
    }

    #[test]
    fn with_step_hits_requested_spacing() {
        let spec = CurveSpec::circle(1.0, [0.0, 2.0 * PI], 10).with_step(1e-3).unwrap();
        let c = sample_curve(&spec).unwrap();
        assert!((c.step() - 1e-3).abs() < 1e-6);
    }
}

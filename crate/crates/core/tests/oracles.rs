//! Comparisons against closed-form solutions computed independently here.

use std::f64::consts::PI;

use num_complex::Complex64;

use spinframe::curve::{sample_curve, CurveSpec, Vec3};
use spinframe::frames::{closed_form_frames, frenet_apparatus, theta1_profile};
use spinframe::integrate::{MidpointRule, PropagationConfig};
use spinframe::spinor::{mate, Spinor, SIGMA};
use spinframe::spinor_ode::{lift_frame, propagate_spinor, RepKind, SpinorRhs};

/// Frenet frame of `(a cos t, a sin t, b t)` at parameter `t`.
fn helix_frenet(a: f64, b: f64, t: f64) -> [Vec3; 3] {
    let c = (a * a + b * b).sqrt();
    let (sin, cos) = t.sin_cos();
    [
        Vec3::new(-a * sin, a * cos, b) / c,
        Vec3::new(-cos, -sin, 0.0),
        Vec3::new(b * sin, -b * cos, a) / c,
    ]
}

#[test]
fn helix_frenet_frame_matches_formula() {
    let (a, b): (f64, f64) = (1.5, 0.7);
    let c = (a * a + b * b).sqrt();
    let curve = sample_curve(&CurveSpec::helix(a, b, [0.0, 5.0], 501)).unwrap();
    let (path, kappa, tau) = frenet_apparatus(&curve).unwrap();
    for (i, frame) in path.frames.iter().enumerate() {
        let expected = helix_frenet(a, b, curve.s[i] / c);
        for (got, want) in frame.vectors().iter().zip(&expected) {
            assert!((got - want).norm() < 1e-10, "sample {i}");
        }
        assert!((kappa[i] - a / (c * c)).abs() < 1e-10);
        assert!((tau[i] - b / (c * c)).abs() < 1e-10);
    }
}

#[test]
fn helix_bishop_curvatures_match_formula() {
    // θ1 = τ s, so k1 = κ cos τs and k2 = κ sin τs
    let curve = sample_curve(&CurveSpec::helix(1.0, 1.0, [0.0, 4.0 * PI / 2f64.sqrt()], 4001)).unwrap();
    let cf = closed_form_frames(&curve, 0.0, 0.0).unwrap();
    for (i, s) in curve.s.iter().enumerate() {
        assert!((cf.profile.k1[i] - 0.5 * (0.5 * s).cos()).abs() < 1e-9);
        assert!((cf.profile.k2[i] - 0.5 * (0.5 * s).sin()).abs() < 1e-9);
        assert!((cf.profile.eps1[i] + 0.5 * (0.5 * s).cos()).abs() < 1e-9);
        assert!((cf.profile.eps2[i] + 0.5 * (0.5 * s).sin()).abs() < 1e-9);
    }
}

#[test]
fn circle_spinor_follows_half_angle_solution() {
    // with τ = 0 and κ = 1 the equation is ψ' = ψ̂/2, solved by
    // ψ(s) = cos(s/2) ψ0 + sin(s/2) ψ̂0
    let curve = sample_curve(&CurveSpec::circle(1.0, [0.0, 2.0 * PI], 2001)).unwrap();
    let (path, kappa, tau) = frenet_apparatus(&curve).unwrap();
    let psi0 = lift_frame(&path.frames[0], RepKind::FrenetNBT).unwrap();
    let out = propagate_spinor(SpinorRhs::Frenet, &kappa, &tau, &psi0, &curve.s, &PropagationConfig::default()).unwrap();
    for (i, s) in curve.s.iter().enumerate() {
        let expected = psi0 * (0.5 * s).cos() + mate(&psi0) * (0.5 * s).sin();
        assert!(out.spinors[i].distance(&expected) < 1e-10, "sample {i}");
    }
}

#[test]
fn theta_profile_integrates_sine() {
    let n = 1001;
    let s: Vec<f64> = (0..n).map(|i| PI * i as f64 / (n - 1) as f64).collect();
    let tau: Vec<f64> = s.iter().map(|x| x.sin()).collect();
    let theta = theta1_profile(&tau, &s, 0.0).unwrap();
    assert!((theta[n - 1] - 2.0).abs() < 1e-8);
}

#[test]
fn linear_midpoints_on_constant_curvature() {
    // constant curvature makes the midpoint rule irrelevant, so the linear
    // rule still closes the circle with the spinor sign flipped
    let curve = sample_curve(&CurveSpec::circle(1.0, [0.0, 2.0 * PI], 201)).unwrap();
    let (path, kappa, tau) = frenet_apparatus(&curve).unwrap();
    let psi0 = lift_frame(&path.frames[0], RepKind::FrenetNBT).unwrap();
    let config = PropagationConfig {
        midpoint: MidpointRule::Linear,
        ..Default::default()
    };
    let out = propagate_spinor(SpinorRhs::Frenet, &kappa, &tau, &psi0, &curve.s, &config).unwrap();
    let end = out.spinors[curve.len() - 1];
    assert!(end.distance(&-psi0) < 1e-8);
}

#[test]
fn sigma_constants() {
    let z = |re: f64, im: f64| Complex64::new(re, im);
    assert_eq!(SIGMA[0], [[z(1.0, 0.0), z(0.0, 0.0)], [z(0.0, 0.0), z(-1.0, 0.0)]]);
    assert_eq!(SIGMA[1], [[z(0.0, 1.0), z(0.0, 0.0)], [z(0.0, 0.0), z(0.0, 1.0)]]);
    assert_eq!(SIGMA[2], [[z(0.0, 0.0), z(-1.0, 0.0)], [z(-1.0, 0.0), z(0.0, 0.0)]]);
    for m in SIGMA {
        assert_eq!(m[0][1], m[1][0]);
    }
}

#[test]
fn type2_pair_at_quarter_turn() {
    // where θ2 = π/2 the type-2 pair is (T, N)
    let curve = sample_curve(&CurveSpec::helix(1.0, 1.0, [0.0, 4.0], 401)).unwrap();
    let cf = closed_form_frames(&curve, 0.0, 0.5 * PI).unwrap();
    let f = &cf.frenet.frames[0];
    let z = &cf.bishop2.frames[0];
    assert!((z.e1 - f.e1).norm() < 1e-12);
    assert!((z.e2 - f.e2).norm() < 1e-12);
    assert!((z.e3 - f.e3).norm() < 1e-12);
}

#[test]
fn standard_basis_spinor() {
    let t = spinframe::spinor::triad_from_spinor(&Spinor::real(1.0, 0.0)).unwrap();
    assert_eq!(t.a, Vec3::x());
    assert_eq!(t.b, Vec3::y());
    assert_eq!(t.c, Vec3::z());
}

use chemotaxis_web::{dispersion_curve, galerkin_profile, stability, Simulation};

/// Leading real part of the eigenvalues of the linearisation about `(1, 1)`.
fn leading_rate(d: f64, chi0: f64, r: f64, q: f64) -> f64 {
    let q2 = q * q;
    let (a, b, c, e) = (-d * q2 - r, chi0 * q2, 1.0, -q2 - 1.0);
    let (tr, det) = (a + e, a * e - b * c);
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        0.5 * (tr + disc.sqrt())
    } else {
        0.5 * tr
    }
}

#[test]
fn dispersion_curve_matches_two_by_two_eigenvalues() {
    let (d, chi0, r, q_max, points) = (1.0, 1.9, 0.1, 3.0, 31);
    let curve = dispersion_curve(d, chi0, r, q_max, points).unwrap();
    assert_eq!(curve.len(), points);
    for (i, g) in curve.iter().enumerate() {
        let q = q_max * i as f64 / (points - 1) as f64;
        assert!((g - leading_rate(d, chi0, r, q)).abs() < 1e-12, "q = {q}");
    }
}

#[test]
fn band_edges_are_neutral() {
    let s = stability(1.0, 1.9, 0.1).unwrap();
    assert!(s.turing() && s.rt > 1.0);
    for q in [s.band_lo, s.band_hi] {
        let q2 = q * q;
        let det = (q2 + 0.1) * (q2 + 1.0) - 1.9 * q2;
        assert!(det.abs() < 1e-9, "q = {q}: det = {det}");
    }
    assert!(s.lambda_implicit.is_finite());
}

#[test]
fn stable_point_has_no_band() {
    let s = stability(1.0, 1.0, 0.1).unwrap();
    assert!(!s.turing());
    assert!(s.band_lo.is_nan() && s.band_hi.is_nan());
}

#[test]
fn one_mode_profile_is_the_closed_form() {
    let (d, chi0, r, l) = (1.0, 1.9, 0.1, 5.5);
    let k2 = (std::f64::consts::PI / l).powi(2);
    let a0 = (d * k2 - r) * (1.0 + k2) / (chi0 * k2 - 2.0 * r * (1.0 + k2));
    let a1 = (2.0 * a0 * (1.0 - a0)).sqrt();
    let p = galerkin_profile(d, chi0, r, 1, l, 3).unwrap();
    assert!((p[0] - (a0 + a1)).abs() < 1e-9);
    assert!((p[1] - a0).abs() < 1e-9);
    assert!((p[2] - (a0 - a1)).abs() < 1e-9);
}

#[test]
fn invalid_input_is_reported_not_panicked() {
    assert!(dispersion_curve(1.0, 1.9, 0.1, 3.0, 1).is_err());
    assert!(galerkin_profile(1.0, 1.9, 0.1, 0, 5.5, 10).is_err());
    assert!(Simulation::new(-1.0, 1.9, 0.1, 10.0, 100).is_err());
}

#[test]
fn simulation_clock_and_pattern_growth() {
    let mut sim = Simulation::new(1.0, 1.9, 0.1, 10.0, 100).unwrap();
    let spread = |v: &[f64]| v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min);
    let initial = spread(&sim.density());
    sim.advance(10).unwrap();
    assert!((sim.time() - 10.0 * sim.dt()).abs() < 1e-12);
    sim.advance((100.0 / sim.dt()) as usize).unwrap();
    let n = sim.density();
    assert_eq!(n.len(), sim.positions().len());
    assert!(n.iter().all(|&v| v >= 0.0));
    assert!(spread(&n) > initial, "unstable state should pattern");
}

use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use chemotaxis::galerkin::{
    self, Branch, ContinuationParameter, GalerkinSystem, MaximisedMode, NewtonOptions,
};
use chemotaxis::ModelSpec;
use proptest::prelude::*;

fn defaults() -> ModelSpec {
    ModelSpec::m3(1.0, 1.9, 0.1)
}

/// Projection of the full stationary residual of `n = sum alpha_i cos(i k x)` (with `c`
/// solving `c'' - c + n = 0` exactly) onto `cos(j k x)`. The integrand is a cosine
/// polynomial of degree `2M` in `k x`; the trapezoid rule on more than `2M` intervals is
/// exact for it.
fn projected_residual(sys: &GalerkinSystem, alpha: &[f64], j: usize) -> f64 {
    let k = sys.k;
    let beta: Vec<f64> = alpha
        .iter()
        .enumerate()
        .map(|(i, a)| a / (1.0 + (i as f64 * k).powi(2)))
        .collect();
    let eval = |coef: &[f64], x: f64| -> (f64, f64, f64) {
        coef.iter().enumerate().fold((0.0, 0.0, 0.0), |(v, d1, d2), (i, a)| {
            let w = i as f64 * k;
            let (s, c) = (w * x).sin_cos();
            (v + a * c, d1 - a * w * s, d2 - a * w * w * c)
        })
    };
    let intervals = 4 * alpha.len() + 8;
    let length = PI / k;
    let h = length / intervals as f64;
    let total: f64 = (0..=intervals)
        .map(|s| {
            let x = s as f64 * h;
            let (n, n1, n2) = eval(alpha, x);
            let (_, c1, c2) = eval(&beta, x);
            let res = sys.d * n2 - sys.chi0 * (n1 * c1 + n * c2) + sys.r * n * (1.0 - n);
            let w = if s == 0 || s == intervals { 0.5 } else { 1.0 };
            w * h * res * (j as f64 * k * x).cos()
        })
        .sum();
    total * if j == 0 { 1.0 } else { 2.0 } / length
}

fn system_and_alpha() -> impl Strategy<Value = (GalerkinSystem, Vec<f64>)> {
    (1usize..=6, 0.1f64..3.0, 0.0f64..5.0, 0.01f64..1.5, 0.05f64..2.0).prop_flat_map(
        |(modes, d, chi0, r, k)| {
            let sys = GalerkinSystem::new(&ModelSpec::m3(d, chi0, r), modes, k).unwrap();
            (Just(sys), prop::collection::vec(-1.5f64..1.5, modes + 1))
        },
    )
}

proptest! {
    #[test]
    fn residual_equals_quadrature_projection((sys, alpha) in system_and_alpha()) {
        let res = sys.residual(&alpha);
        for j in 0..=sys.modes {
            let got = if j == 0 { res[0] * sys.r } else { res[j] };
            let want = projected_residual(&sys, &alpha, j);
            prop_assert!((got - want).abs() <= 1e-8, "j = {}: {} vs {}", j, got, want);
        }
    }

    #[test]
    fn odd_sign_flip_preserves_residual_norm((sys, alpha) in system_and_alpha()) {
        let flipped: Vec<f64> = alpha
            .iter()
            .enumerate()
            .map(|(i, &a)| if i % 2 == 1 { -a } else { a })
            .collect();
        let a = sys.residual(&alpha);
        let b = sys.residual(&flipped);
        for (j, (x, y)) in a.iter().zip(&b).enumerate() {
            let sign = if j % 2 == 1 { -1.0 } else { 1.0 };
            prop_assert!((x - sign * y).abs() <= 1e-12 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn analytic_jacobian_matches_differences((sys, alpha) in system_and_alpha()) {
        let exact = sys.jacobian(&alpha);
        let approx = sys.jacobian_fd(&alpha, 1e-6);
        let scale = 1.0 + exact.abs().max();
        prop_assert!((exact - approx).abs().max() <= 1e-6 * scale);
    }

    #[test]
    fn newton_recovers_closed_form(length in 3.0f64..12.0, jitter in prop::array::uniform2(-0.05f64..0.05)) {
        let sys = GalerkinSystem::for_length(&defaults(), 1, length).unwrap();
        let roots = galerkin::solve_m1_closed_form(&sys).unwrap();
        for root in roots.iter().filter(|r| r.branch.is_pattern()) {
            // near the bifurcation the pattern root approaches (1, 0), so "nearby" is
            // measured against the pattern amplitude
            let scale = root.alpha[1].abs();
            let seed = [root.alpha[0] + jitter[0] * scale, root.alpha[1] + jitter[1] * scale];
            let sol = galerkin::solve(&sys, &seed, NewtonOptions::default()).unwrap();
            for (a, b) in sol.alpha.iter().zip(&root.alpha) {
                prop_assert!((a - b).abs() <= 1e-10);
            }
            prop_assert_eq!(sol.branch, root.branch);
        }
    }
}

#[test]
fn truncation_differences_shrink() {
    let rows = galerkin::truncation_ladder(&defaults(), PI / 5.5, 6, NewtonOptions::default()).unwrap();
    for i in 0..=1 {
        let gaps: Vec<f64> = rows.windows(2).map(|w| (w[0].alpha[i] - w[1].alpha[i]).abs()).collect();
        assert!(gaps.windows(2).all(|g| g[1] < g[0]), "alpha_{i}: {gaps:?}");
    }
    assert!(rows.iter().all(|r| r.branch == Branch::PatternPlus));
}

#[test]
fn beta_follows_alpha() {
    let sys = GalerkinSystem::for_length(&defaults(), 3, 5.5).unwrap();
    let sol = galerkin::solve_from_closed_form(&sys, NewtonOptions::default()).unwrap();
    for (i, (a, b)) in sol.alpha.iter().zip(&sol.beta).enumerate() {
        assert_eq!(*b, a / (1.0 + (i as f64 * sys.k).powi(2)));
    }
}

#[test]
fn branch_fades_as_chemotaxis_weakens() {
    let template = GalerkinSystem::for_length(&defaults(), 3, 5.5).unwrap();
    let values: Vec<f64> = (0..=12).map(|i| 1.9 - 0.015 * i as f64).collect();
    let rows = galerkin::continuation_sweep(&template, ContinuationParameter::Chi0, &values, NewtonOptions::default())
        .unwrap();
    let amplitude: Vec<f64> = rows.iter().map(|r| r.solution.alpha[1]).collect();
    assert!(amplitude.windows(2).all(|w| w[1] <= w[0]), "{amplitude:?}");
    // the M = 1 branch exists only while chi0 k^2 exceeds the homogeneous threshold
    assert_eq!(rows.last().unwrap().solution.branch, Branch::Homogeneous1);
}

#[test]
fn growth_raises_mean_and_lowers_amplitude() {
    let template = GalerkinSystem::for_length(&defaults(), 3, 5.5).unwrap();
    let values = [0.06, 0.08, 0.1, 0.12];
    let rows = galerkin::continuation_sweep(&template, ContinuationParameter::R, &values, NewtonOptions::default())
        .unwrap();
    for w in rows.windows(2) {
        assert!(w[1].solution.alpha[0] > w[0].solution.alpha[0]);
        assert!(w[1].solution.alpha[1] < w[0].solution.alpha[1]);
    }
}

#[test]
fn length_sweep_has_interior_maximum() {
    let template = GalerkinSystem::for_length(&defaults(), 3, 5.5).unwrap();
    let lengths: Vec<f64> = (0..=16).map(|i| 4.0 + 0.25 * i as f64).collect();
    let rows = galerkin::continuation_sweep(&template, ContinuationParameter::Length, &lengths, NewtonOptions::default())
        .unwrap();
    let (best, _) = rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.solution.alpha[1].total_cmp(&b.1.solution.alpha[1]))
        .unwrap();
    assert!(best > 0 && best < rows.len() - 1);
    assert!((rows[best].value - 5.5).abs() <= 0.5);
}

#[test]
fn predicted_maximum_is_stationary() {
    let p = galerkin::predict_wavelength_amplitude(&defaults(), 3, MaximisedMode::First).unwrap();
    assert!((p.lambda0 - 5.5).abs() < 0.25, "{p:?}");
    assert_abs_diff_eq!(p.amplitude, 2.0 * p.alpha_max, epsilon = 1e-15);
    let h = 1e-3;
    let coef = |k: f64| {
        galerkin::pattern_coefficient(&defaults(), 3, k, MaximisedMode::First, NewtonOptions::default()).unwrap()
    };
    let slope = (coef(p.k_star + h) - coef(p.k_star - h)) / (2.0 * h);
    assert!(slope.abs() < 1e-3, "slope {slope}");
}

#[test]
fn one_mode_prediction_overestimates_length() {
    let one = galerkin::predict_wavelength_amplitude(&defaults(), 1, MaximisedMode::First).unwrap();
    let three = galerkin::predict_wavelength_amplitude(&defaults(), 3, MaximisedMode::First).unwrap();
    // more than two sweep steps beyond both the M = 3 estimate and the simulated 5.5
    assert!(one.lambda0 > three.lambda0 + 0.5 && one.lambda0 > 6.0, "{one:?}");
}

#[test]
fn second_mode_convention_on_doubled_domain() {
    let second = galerkin::predict_wavelength_amplitude(&defaults(), 4, MaximisedMode::Second).unwrap();
    let first = galerkin::predict_wavelength_amplitude(&defaults(), 2, MaximisedMode::First).unwrap();
    // two mirrored half-spikes carry only even modes, so alpha_2 at order 4 on the doubled
    // domain is alpha_1 at order 2 on the half-spike
    assert_abs_diff_eq!(second.lambda0, first.lambda0, epsilon = 1e-4);
    assert_abs_diff_eq!(second.alpha_max, first.alpha_max, epsilon = 1e-8);
}

#[test]
fn outside_turing_regime_is_rejected() {
    let m = ModelSpec::m3(1.0, 1.7, 0.1);
    assert!(galerkin::predict_wavelength_amplitude(&m, 3, MaximisedMode::First).is_err());
}

//! Acceptance gate. Every criterion runs to completion at its stated tolerance and
//! reports one `PASS`/`FAIL` line on stderr (written directly, so the harness does not
//! swallow it); the test fails if any criterion fails.
//!
//! Expected values fall in two groups: published reference numbers, quoted as
//! literals with their tolerance, and independent oracles computed here from first
//! principles without calling the routine under test.

use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use chemotaxis::galerkin::{self, GalerkinSystem, MaximisedMode, NewtonOptions};
use chemotaxis::pde::{
    self, Grid1D, InitialCondition, Scheme, SimulationSettings, SimulationState, StationaryCriterion,
    TimeStepping,
};
use chemotaxis::spectral::{self, Profile, SampleGrid};
use chemotaxis::stability::{self, Dispersion};
use chemotaxis::{ModelSpec, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Check {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn within(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let line = format!("{what} = {got:.6} (want {want} ± {tol})");
        if (got - want).abs() <= tol && got.is_finite() {
            self.notes.push(line);
        } else {
            self.failures.push(line);
        }
    }

    fn relative(&mut self, what: &str, got: f64, want: f64, rel: f64) {
        let line = format!("{what} = {got:.6} (want {want} ± {:.0}%)", rel * 100.0);
        if (got - want).abs() <= rel * want.abs() && got.is_finite() {
            self.notes.push(line);
        } else {
            self.failures.push(line);
        }
    }

    fn holds(&mut self, what: impl Into<String>, ok: bool) {
        let what = what.into();
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }

    fn error(&mut self, what: &str, err: impl std::fmt::Display) {
        self.failures.push(format!("{what}: {err}"));
    }
}

fn report(id: usize, title: &str, started: Instant, check: &Check) -> bool {
    let ok = check.failures.is_empty();
    let mut err = std::io::stderr().lock();
    let _ = writeln!(
        err,
        "[criterion {id:>2}] {} {title} ({:.1} s)",
        if ok { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
    for f in &check.failures {
        let _ = writeln!(err, "    x {f}");
    }
    for n in &check.notes {
        let _ = writeln!(err, "      {n}");
    }
    ok
}

fn defaults() -> ModelSpec {
    ModelSpec::m3(1.0, 1.9, 0.1)
}

// ---------------------------------------------------------------------------
// 1. Instability factor of the default growing model

fn instability_factor(c: &mut Check) {
    match stability::instability_factor(&defaults()) {
        Ok(rt) => c.within("R_T(chi0 = 1.9)", rt, 1.10, 0.01),
        Err(e) => c.error("R_T(chi0 = 1.9)", e),
    }
    match stability::instability_factor(&ModelSpec::m3(1.0, 1.7, 0.1)) {
        Ok(rt) => c.within("R_T(chi0 = 1.7)", rt, 0.98, 0.01),
        Err(e) => c.error("R_T(chi0 = 1.7)", e),
    }
}

// ---------------------------------------------------------------------------
// 2. Instability factor of all nine variants against a hand linearisation

/// Sensitivity at the homogeneous state `(s, s)`, transcribed independently per variant.
fn oracle_chi(v: Variant, chi0: f64, nu: f64, nu1: f64, nu2: f64, s: f64) -> f64 {
    match v {
        Variant::M1 => chi0,
        Variant::M2 | Variant::M3 => chi0 * s,
        Variant::M4 | Variant::M5 => chi0 / s,
        Variant::M6 => chi0 * s / s,
        Variant::M7 => chi0 * s / (s + nu),
        Variant::M8 => chi0 * s / ((s + nu) * (s + nu)),
        Variant::M9 => chi0 * (s + nu1) / (s + nu2),
    }
}

/// Linearising `n_t = D n'' - (chi(n, c) c')' + f(n)`, `c_t = c'' + n - c` about a
/// homogeneous state gives, for a perturbation `exp(i k x)` with `q = k^2`,
///
/// ```text
/// | -D q + f'   chi q  |
/// |  1         -q - 1  |
/// ```
///
/// (gradients of `chi` multiply `c' = 0` and drop out). With `f' = -rho` the
/// determinant is `D q^2 + (D + rho - chi) q + rho`. The state turns unstable at the
/// smallest `chi` for which that quadratic touches zero for some `q > 0`; the ratio
/// of the actual `chi` to this threshold is the instability factor. The threshold is
/// found by bisection on the sign of the minimum over `q`, itself located by
/// golden-section search, so no closed form for the factor is assumed.
fn oracle_rt(d: f64, rho: f64, chi: f64) -> f64 {
    let min_det = |chi_trial: f64| {
        let det = |q: f64| d * q * q + (d + rho - chi_trial) * q + rho;
        let (mut lo, mut hi) = (0.0, 100.0);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..200 {
            let a = hi - g * (hi - lo);
            let b = lo + g * (hi - lo);
            if det(a) < det(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        det(0.5 * (lo + hi))
    };
    // min det is decreasing in chi: positive below threshold
    let (mut lo, mut hi) = (0.0, 100.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if min_det(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    chi / (0.5 * (lo + hi))
}

fn table_regression(c: &mut Check) {
    let (d, r, chi0, nu) = (1.0, 0.1, 1.9, 0.2);
    for v in Variant::ALL {
        let mut m = ModelSpec::m3(d, chi0, r)
            .with_variant(v)
            .with_nu(nu)
            .with_nu12(nu, nu);
        let growing = v.has_logistic_kinetics();
        if !growing {
            m = m.with_n0(1.0);
        }
        // logistic kinetics rn(1 - n) at n = 1: f' = -r
        let rho = if growing { r } else { 0.0 };
        let chi = oracle_chi(v, chi0, nu, nu, nu, 1.0);
        let want = oracle_rt(d, rho, chi);
        match stability::instability_factor(&m) {
            Ok(got) => c.within(&format!("R_T({v})"), got, want, 1e-12),
            Err(e) => c.error(&format!("R_T({v})"), e),
        }
        // the matrix itself, at an arbitrary wavenumber
        let q = 0.37;
        match stability::characteristic_matrix(&m, q) {
            Ok(mat) => {
                let want = [-d * q - rho, chi * q, 1.0, -q - 1.0];
                let got = [mat[(0, 0)], mat[(0, 1)], mat[(1, 0)], mat[(1, 1)]];
                let err = got.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                c.holds(
                    format!("{v}: linearisation matrix matches to {err:.1e}"),
                    err <= 1e-12,
                );
            }
            Err(e) => c.error(&format!("matrix({v})"), e),
        }
    }
}

// ---------------------------------------------------------------------------
// 3-4. Truncated cosine-series system

fn base_system(modes: usize) -> GalerkinSystem {
    GalerkinSystem::for_length(&defaults(), modes, 5.5).expect("default system")
}

fn closed_form(c: &mut Check) {
    match galerkin::solve_m1_closed_form(&base_system(1)) {
        Ok(roots) => match roots.iter().find(|s| s.branch == galerkin::Branch::PatternPlus) {
            Some(s) => {
                c.within("alpha_0", s.alpha[0], 0.8462, 5e-4);
                c.within("alpha_1", s.alpha[1], 0.5103, 5e-4);
            }
            None => c.holds("pattern branch exists at M = 1", false),
        },
        Err(e) => c.error("closed form", e),
    }
}

const TRUNCATED_ROWS: [&[f64]; 3] = [
    &[0.8868, 0.4153, 0.1680],
    &[0.8938, 0.4035, 0.1563, 0.0508],
    &[0.8941, 0.4033, 0.1550, 0.0496, 0.0155],
];

fn newton_rows(c: &mut Check) {
    let started = Instant::now();
    match galerkin::truncation_ladder(&defaults(), PI / 5.5, 4, NewtonOptions::default()) {
        Ok(rows) => {
            for (row, want) in rows[1..].iter().zip(TRUNCATED_ROWS) {
                let modes = row.alpha.len() - 1;
                for (i, (&got, &want)) in row.alpha.iter().zip(want).enumerate() {
                    c.within(&format!("M = {modes}: alpha_{i}"), got, want, 2e-3);
                }
                c.holds(
                    format!("M = {modes}: residual {:.1e} < 1e-12", row.residual_norm),
                    row.residual_norm < 1e-12,
                );
            }
        }
        Err(e) => c.error("Newton ladder", e),
    }
    c.holds(
        format!("runtime {:.3} s < 1 s", started.elapsed().as_secs_f64()),
        started.elapsed().as_secs_f64() < 1.0,
    );
}

// ---------------------------------------------------------------------------
// 5-6. Stationary half-spike on L = 5.5

const SIMULATION_ROW: [f64; 5] = [0.9009, 0.3849, 0.1423, 0.0428, 0.0143];

fn half_spike() -> chemotaxis::Result<SimulationState> {
    let settings = SimulationSettings {
        dx: 0.05,
        scheme: Scheme::Explicit,
        dt: None,
        criterion: StationaryCriterion {
            tol: 1e-9,
            ..Default::default()
        },
    };
    let ic = spectral::sweep_initial_condition();
    let (state, converged) = pde::simulate_stationary(&defaults(), 5.5, &ic, &settings)?;
    assert!(converged, "half-spike run did not become stationary");
    Ok(state)
}

/// Positive-`alpha_1` representative of a profile's coefficients.
fn oriented(mut alpha: Vec<f64>) -> Vec<f64> {
    if alpha[1] < 0.0 {
        for (i, a) in alpha.iter_mut().enumerate() {
            if i % 2 == 1 {
                *a = -*a;
            }
        }
    }
    alpha
}

fn simulated_coefficients(c: &mut Check, state: &SimulationState) {
    c.holds(format!("dx = {} <= 0.05", state.grid.dx()), state.grid.dx() <= 0.05 + 1e-12);
    match spectral::decompose(&Profile::cells(state), 4) {
        Ok(series) => {
            let alpha = oriented(series.alpha);
            for (i, (&got, &want)) in alpha.iter().zip(&SIMULATION_ROW).enumerate() {
                c.within(&format!("alpha_{i}"), got, want, 0.02);
            }
        }
        Err(e) => c.error("decompose", e),
    }
}

fn discrepancy_ladder(c: &mut Check, state: &SimulationState) {
    let grid: SampleGrid = state.grid.into();
    let mut simulated = Profile::cells(state);
    if spectral::decompose(&simulated, 1).map(|s| s.alpha[1] < 0.0).unwrap_or(false) {
        simulated.values.reverse();
    }
    let ladder = match galerkin::truncation_ladder(&defaults(), PI / 5.5, 4, NewtonOptions::default()) {
        Ok(rows) => rows,
        Err(e) => return c.error("Newton ladder", e),
    };
    let mut values = Vec::new();
    for row in &ladder {
        let series = spectral::SpectralSeries {
            length: 5.5,
            alpha: row.alpha.clone(),
            beta: None,
        };
        let reconstructed = spectral::reconstruct(&series, grid);
        match spectral::discrepancy(&reconstructed, &simulated) {
            Ok(i) => values.push(i),
            Err(e) => return c.error("discrepancy", e),
        }
    }
    c.relative("I(M = 1)", values[0], 0.1353, 0.15);
    c.relative("I(M = 2)", values[1], 0.0114, 0.25);
    c.relative("I(M = 3)", values[2], 0.0026, 0.50);
    c.holds(
        format!(
            "I(1) > I(2) > I(3) >= I(4): {:.5} > {:.5} > {:.5} >= {:.5}",
            values[0], values[1], values[2], values[3]
        ),
        values[0] > values[1] && values[1] > values[2] && values[2] >= values[3],
    );
}

// ---------------------------------------------------------------------------
// 7. Characteristic length from a sweep over domain lengths

fn characteristic_length(c: &mut Check) {
    let step = 0.25;
    let lengths = spectral::length_range(1.0, 25.0, step);
    let rows = spectral::domain_sweep(&defaults(), &lengths, 10, &SimulationSettings::semi_implicit());
    let failed: Vec<f64> = rows.iter().filter(|r| r.failure.is_some()).map(|r| r.length).collect();
    c.holds(format!("all {} runs succeeded (failed: {failed:?})", rows.len()), failed.is_empty());
    let unconverged = rows.iter().filter(|r| !r.converged).count();
    c.holds(format!("{unconverged} runs hit t_max"), unconverged == 0);
    let first = spectral::characteristic_length(&rows, 1);
    let second = spectral::characteristic_length(&rows, 2);
    match &first {
        Ok(f) => {
            c.within("Lambda_0 (mode 1)", f.lambda0, 5.5, 0.25);
            c.within("alpha_max (mode 1)", f.alpha_max, 0.385, 0.01);
        }
        Err(e) => c.error("mode 1", e),
    }
    match (&first, &second) {
        (Ok(f), Ok(s)) => c.holds(
            format!(
                "modes 1 and 2 agree: Lambda_0 = {:.4} vs {:.4} (within one step {step})",
                f.lambda0, s.lambda0
            ),
            (f.lambda0 - s.lambda0).abs() <= step,
        ),
        (_, Err(e)) => c.error("mode 2", e),
        _ => {}
    }
}

// ---------------------------------------------------------------------------
// 8. Many half-spikes on a long domain

fn large_domain(c: &mut Check) {
    let m = defaults();
    let grid = match Grid1D::with_spacing(100.0, 0.05) {
        Ok(g) => g,
        Err(e) => return c.error("grid", e),
    };
    // spike positions relax on a time scale of ~1.5e3, well past the default horizon
    let settings = SimulationSettings {
        criterion: StationaryCriterion {
            t_max: 30_000.0,
            ..Default::default()
        },
        ..SimulationSettings::semi_implicit()
    };
    let run = pde::run_to_stationary(
        &InitialCondition::FrontSeed,
        &m,
        grid,
        settings.stepping(&grid, &m),
        settings.criterion,
    );
    let state = match run {
        Ok((s, converged)) => {
            c.holds(format!("stationary by t = {:.0}", s.t), converged);
            s
        }
        Err(e) => return c.error("simulation", e),
    };
    let alpha = match spectral::decompose(&Profile::cells(&state), 60) {
        Ok(s) => s.alpha,
        Err(e) => return c.error("decompose", e),
    };
    let dominant = (1..alpha.len())
        .max_by(|&a, &b| alpha[a].abs().total_cmp(&alpha[b].abs()))
        .unwrap();
    c.holds(format!("dominant mode i = {dominant} (want 19)"), dominant == 19);
    c.within("alpha_0", alpha[0], 0.8979, 0.01);
    c.within("|alpha_19|", alpha[19].abs(), 0.3945, 0.02);
    c.within("|alpha_38|", alpha[38].abs(), 0.1293, 0.02);
    let largest_other = (1..alpha.len())
        .filter(|&i| i != 19 && i != 38)
        .map(|i| (i, alpha[i].abs()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    c.holds(
        format!("other modes below 0.1 (largest: i = {}, {:.4})", largest_other.0, largest_other.1),
        largest_other.1 < 0.1,
    );
}

// ---------------------------------------------------------------------------
// 9. Dependence of the two wavelength estimates on the growth rate

fn wavelength_trend(c: &mut Check) {
    let rates: Vec<f64> = (0..=8).map(|i| 0.05 + 0.01 * i as f64).collect();
    let implicit: Vec<f64> = rates
        .iter()
        .map(|&r| stability::wavelength_implicit(&ModelSpec::m3(1.0, 1.9, r)).map(|w| w.1))
        .collect::<chemotaxis::Result<_>>()
        .unwrap_or_default();
    let explicit: Vec<f64> = rates
        .iter()
        .map(|&r| stability::wavelength_explicit(&ModelSpec::m3(1.0, 1.9, r)))
        .collect::<chemotaxis::Result<_>>()
        .unwrap_or_default();
    if implicit.len() != rates.len() || explicit.len() != rates.len() {
        return c.holds("wavelengths defined over r in [0.05, 0.13]", false);
    }
    for i in 1..rates.len() - 1 {
        let h = rates[i + 1] - rates[i - 1];
        let d_imp = (implicit[i + 1] - implicit[i - 1]) / h;
        let d_exp = (explicit[i + 1] - explicit[i - 1]) / h;
        c.holds(
            format!("r = {:.2}: dLambda_implicit/dr = {d_imp:.4} < 0", rates[i]),
            d_imp < 0.0,
        );
        c.holds(
            format!("r = {:.2}: dLambda_explicit/dr = {d_exp:.4} > 0", rates[i]),
            d_exp > 0.0,
        );
    }
}

// ---------------------------------------------------------------------------
// 10. Properties that need no reference numbers

/// Exact projection of the stationary residual of the reconstructed fields onto
/// `cos(j k x)`, computed by sampling the full (untruncated) residual on nodes. The
/// residual is a cosine polynomial of degree `2M` in `k x`, so the trapezoid rule with
/// more than `2M` intervals integrates it exactly.
fn oracle_projection(sys: &GalerkinSystem, alpha: &[f64], j: usize) -> f64 {
    let k = sys.k;
    let modes = alpha.len();
    let beta: Vec<f64> = (0..modes)
        .map(|i| alpha[i] / (1.0 + (i as f64 * k).powi(2)))
        .collect();
    let series = |coef: &[f64], x: f64, derivative: u32| -> f64 {
        coef.iter()
            .enumerate()
            .map(|(i, a)| {
                let w = i as f64 * k;
                let phase = w * x;
                a * match derivative {
                    0 => phase.cos(),
                    1 => -w * phase.sin(),
                    _ => -w * w * phase.cos(),
                }
            })
            .sum()
    };
    let intervals = 8 * modes + 16;
    let length = PI / k;
    let h = length / intervals as f64;
    let mut total = 0.0;
    for s in 0..=intervals {
        let x = s as f64 * h;
        let (n, n1, n2) = (series(alpha, x, 0), series(alpha, x, 1), series(alpha, x, 2));
        let (c1, c2) = (series(&beta, x, 1), series(&beta, x, 2));
        let residual = sys.d * n2 - sys.chi0 * (n1 * c1 + n * c2) + sys.r * n * (1.0 - n);
        let w = if s == 0 || s == intervals { 0.5 } else { 1.0 };
        total += w * h * residual * (j as f64 * k * x).cos();
    }
    total * if j == 0 { 1.0 } else { 2.0 } / length
}

fn quadrature_oracle(c: &mut Check, rng: &mut ChaCha8Rng) {
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let modes = rng.gen_range(1..=6);
        let m = ModelSpec::m3(rng.gen_range(0.2..2.0), rng.gen_range(0.0..4.0), rng.gen_range(0.01..1.0));
        let sys = GalerkinSystem::new(&m, modes, rng.gen_range(0.1..1.5)).unwrap();
        let alpha: Vec<f64> = (0..=modes).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let residual = sys.residual(&alpha);
        for j in 0..=modes {
            // the mean equation is stored divided by r
            let got = if j == 0 { residual[0] * sys.r } else { residual[j] };
            worst = worst.max((got - oracle_projection(&sys, &alpha, j)).abs());
        }
    }
    c.holds(
        format!("Galerkin residual = quadrature projection (max error {worst:.1e} <= 1e-8)"),
        worst <= 1e-8,
    );
}

fn mass_conservation(c: &mut Check) {
    let m = ModelSpec::m3(1.0, 1.2, 0.0).with_variant(Variant::M2).with_n0(1.0);
    let grid = Grid1D::with_spacing(10.0, 0.05).unwrap();
    let ic = InitialCondition::Custom {
        n: grid.centers().iter().map(|x| 1.0 + 0.3 * (0.7 * x).cos() + 0.1 * (2.1 * x).sin()).collect(),
        c: grid.centers().iter().map(|x| 1.0 + 0.2 * (1.3 * x).sin()).collect(),
    };
    for scheme in [Scheme::Explicit, Scheme::SemiImplicit] {
        let stepping = match scheme {
            Scheme::Explicit => TimeStepping::explicit(&grid, &m),
            Scheme::SemiImplicit => TimeStepping::semi_implicit(&grid),
        };
        let start = ic.build(grid).unwrap().total_mass();
        match pde::run(&ic, &m, grid, stepping, 20.0, &[]).and_then(|t| t.into_result()) {
            Ok(states) => {
                let drift = (states.last().unwrap().total_mass() - start).abs() / start;
                c.holds(
                    format!("{scheme:?}: relative mass drift {drift:.1e} <= 1e-10 over t = 20"),
                    drift <= 1e-10,
                );
            }
            Err(e) => c.error("mass run", e),
        }
    }
}

fn homogeneous_fixed(c: &mut Check) {
    let grid = Grid1D::with_spacing(5.5, 0.05).unwrap();
    let cases = [
        (defaults(), (1.0, 1.0)),
        (defaults(), (0.0, 0.0)),
        (ModelSpec::m3(1.0, 1.9, 0.1).with_variant(Variant::M7).with_nu(0.2), (1.0, 1.0)),
        (ModelSpec::m3(1.0, 1.9, 0.0).with_variant(Variant::M4).with_n0(0.7), (0.7, 0.7)),
    ];
    for (m, (n, cc)) in cases {
        let state = InitialCondition::Homogeneous { n, c: cc }.build(grid).unwrap();
        for scheme in [Scheme::Explicit, Scheme::SemiImplicit] {
            match pde::step(&state, &m, 0.01, scheme) {
                Ok(next) => {
                    let drift = next
                        .n
                        .iter()
                        .chain(&next.c)
                        .zip(state.n.iter().chain(&state.c))
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    c.holds(
                        format!("{} at ({n}, {cc}) fixed under {scheme:?} step (drift {drift:.1e})", m.variant),
                        drift <= 1e-14,
                    );
                }
                Err(e) => c.error("homogeneous step", e),
            }
        }
    }
}

fn reflection_symmetry(c: &mut Check) {
    let m = defaults();
    let grid = Grid1D::with_spacing(5.5, 0.05).unwrap();
    let ic = InitialCondition::stimulus_at(Some(1.0));
    let mirrored_ic = {
        let s = ic.build(grid).unwrap().mirrored();
        InitialCondition::Custom { n: s.n, c: s.c }
    };
    for stepping in [TimeStepping::explicit(&grid, &m), TimeStepping::semi_implicit(&grid)] {
        let a = pde::run(&ic, &m, grid, stepping, 50.0, &[]).and_then(|t| t.into_result());
        let b = pde::run(&mirrored_ic, &m, grid, stepping, 50.0, &[]).and_then(|t| t.into_result());
        match (a, b) {
            (Ok(a), Ok(b)) => {
                let a = a.last().unwrap().mirrored();
                let b = b.last().unwrap();
                let gap = a
                    .n
                    .iter()
                    .zip(&b.n)
                    .chain(a.c.iter().zip(&b.c))
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max);
                c.holds(
                    format!("{:?}: mirror commutes with evolution (gap {gap:.1e} <= 1e-12)", stepping.scheme),
                    gap <= 1e-12,
                );
            }
            (Err(e), _) | (_, Err(e)) => c.error("symmetry run", e),
        }
    }
}

fn determinant_signs(c: &mut Check, rng: &mut ChaCha8Rng) {
    let mut violations = 0;
    let mut tested = 0;
    for _ in 0..500 {
        let m = ModelSpec::m3(rng.gen_range(0.1..3.0), rng.gen_range(0.0..8.0), rng.gen_range(0.01..1.0));
        let disp = Dispersion::of(&m).unwrap();
        let Some((k1, k2)) = disp.band().unwrap() else {
            continue;
        };
        tested += 1;
        let inside = [0.25, 0.5, 0.75].map(|t| k1 + t * (k2 - k1));
        let outside = [0.5 * k1, k2 * 1.5, k2 + 10.0];
        violations += inside.iter().filter(|&&q| !(disp.det(q) < 0.0)).count();
        violations += outside.iter().filter(|&&q| !(disp.det(q) > 0.0)).count();
    }
    c.holds(
        format!("det < 0 inside and > 0 outside the band ({tested} parameter sets, {violations} violations)"),
        violations == 0 && tested > 50,
    );
}

fn closed_form_vs_newton(c: &mut Check, rng: &mut ChaCha8Rng) {
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    for _ in 0..200 {
        let length = rng.gen_range(3.0..12.0);
        let sys = GalerkinSystem::for_length(&defaults(), 1, length).unwrap();
        let Ok(roots) = galerkin::solve_m1_closed_form(&sys) else {
            continue;
        };
        for root in roots.iter().filter(|r| r.branch.is_pattern()) {
            let seed: Vec<f64> = root.alpha.iter().map(|a| a + rng.gen_range(-0.01..0.01)).collect();
            if let Ok(sol) = galerkin::solve(&sys, &seed, NewtonOptions::default()) {
                compared += 1;
                for (a, b) in sol.alpha.iter().zip(&root.alpha) {
                    worst = worst.max((a - b).abs());
                }
            } else {
                worst = f64::INFINITY;
            }
        }
    }
    c.holds(
        format!("Newton from nearby seeds matches the closed form ({compared} roots, max gap {worst:.1e} <= 1e-10)"),
        worst <= 1e-10 && compared > 50,
    );
}

fn fisher_speed(c: &mut Check) {
    let (d, r) = (1.0, 0.1);
    let m = ModelSpec::m3(d, 0.0, r);
    let grid = Grid1D::with_spacing(400.0, 0.1).unwrap();
    let times: Vec<f64> = (0..=20).map(|i| 300.0 + 10.0 * i as f64).collect();
    let stepping = TimeStepping {
        scheme: Scheme::SemiImplicit,
        dt: 0.01,
    };
    match pde::run(&InitialCondition::FrontSeed, &m, grid, stepping, 500.0, &times)
        .and_then(|t| t.into_result())
        .and_then(|states| pde::front_speed(&states, 0.5))
    {
        Ok(speed) => c.relative("front speed at chi0 = 0", speed, 2.0 * (d * r).sqrt(), 0.05),
        Err(e) => c.error("front speed", e),
    }
}

fn property_suite(c: &mut Check) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    quadrature_oracle(c, &mut rng);
    mass_conservation(c);
    homogeneous_fixed(c);
    reflection_symmetry(c);
    determinant_signs(c, &mut rng);
    closed_form_vs_newton(c, &mut rng);
    fisher_speed(c);
}

// ---------------------------------------------------------------------------

#[test]
fn acceptance() {
    let mut passed = Vec::new();
    let mut gate = |id: usize, title: &str, body: &mut dyn FnMut(&mut Check)| {
        let started = Instant::now();
        let mut check = Check::new();
        body(&mut check);
        passed.push((id, report(id, title, started, &check)));
    };

    gate(1, "instability factor at chi0 = 1.9 and 1.7", &mut instability_factor);
    gate(2, "instability factor of all nine variants vs hand linearisation", &mut table_regression);
    gate(3, "closed-form one-mode pattern", &mut closed_form);
    gate(4, "Newton solutions for M = 2, 3, 4", &mut newton_rows);

    let started = Instant::now();
    let spike = half_spike();
    gate(5, "stationary half-spike coefficients on L = 5.5", &mut |c| match &spike {
        Ok(state) => {
            c.notes.push(format!("simulation took {:.1} s", started.elapsed().as_secs_f64()));
            simulated_coefficients(c, state)
        }
        Err(e) => c.error("simulation", e),
    });
    gate(6, "discrepancy between truncated series and simulation", &mut |c| match &spike {
        Ok(state) => discrepancy_ladder(c, state),
        Err(e) => c.error("simulation", e),
    });

    gate(7, "characteristic length from the domain-length sweep", &mut characteristic_length);
    gate(8, "pattern on L = 100", &mut large_domain);
    gate(9, "wavelength trends with the growth rate", &mut wavelength_trend);
    gate(10, "property suite", &mut property_suite);

    let failed: Vec<usize> = passed.iter().filter(|(_, ok)| !ok).map(|(id, _)| *id).collect();
    assert!(failed.is_empty(), "acceptance criteria failed: {failed:?}");
}

#[test]
fn predicted_wavelength_is_reported() {
    // not a gate criterion: logs the Galerkin estimate next to the sweep result
    match galerkin::predict_wavelength_amplitude(&defaults(), 3, MaximisedMode::First) {
        Ok(p) => {
            let _ = writeln!(
                std::io::stderr(),
                "[info] truncated-series estimate (M = 3): Lambda_0 = {:.4}, alpha_max = {:.4}",
                p.lambda0,
                p.alpha_max
            );
        }
        Err(e) => panic!("prediction failed: {e}"),
    }
}

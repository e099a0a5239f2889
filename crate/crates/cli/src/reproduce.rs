//! Recipes for the figure and table data. Parameters are the defaults `D = 1`,
//! `chi0 = 1.9`, `r = 0.1` unless a recipe overrides them; every constant a recipe uses is
//! recorded in the manifest.

use std::f64::consts::PI;

use chemotaxis::galerkin::{self, ContinuationParameter, GalerkinSystem, MaximisedMode, NewtonOptions};
use chemotaxis::pde::{
    self, Grid1D, InitialCondition, SimulationSettings, SimulationState, StationaryCriterion, TimeStepping,
};
use chemotaxis::spectral::{self, Profile, SampleGrid, SpectralSeries};
use chemotaxis::stability::{self, PatternClass};
use chemotaxis::{Error, ModelSpec, Variant};
use rayon::prelude::*;

use crate::commands::{linspace, snapshot_table, sweep_table, threshold};
use crate::config::ensure;
use crate::error::CliError;
use crate::keywords::{ModelParam, Target};
use crate::output::{alpha_columns, num, opt, Session, Table};
use crate::ReproduceArgs;

type Result<T, E = CliError> = std::result::Result<T, E>;

fn defaults() -> ModelSpec {
    ModelSpec::m3(1.0, 1.9, 0.1)
}

pub fn run(s: &mut Session, a: &ReproduceArgs) -> Result<()> {
    let target = s
        .res
        .optional("target", a.target)?
        .ok_or_else(|| CliError::Config("--target is required (fig1..fig7, table2 or all)".into()))?;
    let dir = s.res.value(
        "out-dir",
        a.out_dir.as_ref().map(|p| p.display().to_string()),
        "reproduce".to_string(),
    )?;
    ensure(!dir.is_empty(), "out-dir", "a directory path")?;
    s.use_dir(std::path::Path::new(&dir))?;
    let targets: Vec<Target> = match target {
        Target::All => Target::ALL.iter().copied().filter(|t| *t != Target::All).collect(),
        t => vec![t],
    };
    for t in targets {
        match t {
            Target::Fig1 => fig1(s)?,
            Target::Fig2 => fig2(s)?,
            Target::Fig3 => fig3(s)?,
            Target::Fig4 => fig4(s)?,
            Target::Fig5 => fig5(s)?,
            Target::Table2 => table2(s)?,
            Target::Fig6 => fig6(s)?,
            Target::Fig7 => fig7(s)?,
            Target::All => unreachable!(),
        }
    }
    Ok(())
}

/// Records a recipe constant as `<target>.<name>`.
fn fixed(s: &mut Session, target: Target, name: &str, value: impl std::fmt::Display) {
    s.res.fixed(&format!("{target}.{name}"), value);
}

fn record_model(s: &mut Session, target: Target, m: &ModelSpec) {
    fixed(s, target, "D", num(m.d));
    fixed(s, target, "chi0", num(m.chi0));
    fixed(s, target, "r", num(m.r));
}

fn record_settings(s: &mut Session, target: Target, settings: &SimulationSettings) {
    fixed(s, target, "dx", num(settings.dx));
    fixed(s, target, "scheme", format!("{:?}", settings.scheme));
    fixed(s, target, "stationary_tol", num(settings.criterion.tol));
    fixed(s, target, "t_max", num(settings.criterion.t_max));
}

/// Explicit run on the default grid, tightened to `1e-9` so that the coefficients are
/// stationary to well below the printed digits.
fn half_spike_settings() -> SimulationSettings {
    SimulationSettings {
        criterion: StationaryCriterion {
            tol: 1e-9,
            ..Default::default()
        },
        ..Default::default()
    }
}

/// Stationary pattern on `[0, length]` grown from the wall stimulus.
fn stationary_pattern(m: &ModelSpec, length: f64, settings: &SimulationSettings) -> Result<SimulationState> {
    let (state, converged) =
        pde::simulate_stationary(m, length, &spectral::sweep_initial_condition(), settings)?;
    if !converged {
        return Err(CliError::Numerical(format!(
            "L = {length}: not stationary by t = {}",
            settings.criterion.t_max
        )));
    }
    Ok(state)
}

// Travelling front below threshold, spikes above it.
fn fig1(s: &mut Session) -> Result<()> {
    let t = Target::Fig1;
    let (length, dx, level) = (200.0, 0.1, 0.5);
    fixed(s, t, "length", length);
    fixed(s, t, "dx", dx);
    fixed(s, t, "scheme", "SemiImplicit");
    fixed(s, t, "ic", "FrontSeed");
    fixed(s, t, "front_level", level);
    let grid = Grid1D::with_spacing(length, dx)?;
    let stepping = TimeStepping::semi_implicit(&grid);

    let mut table = Table::new(["panel", "chi0", "t", "rt", "class", "front_speed", "fisher_speed"]);
    // A: weak chemotaxis; the front position between t = 100 and 200 gives its speed
    let weak = ModelSpec::m3(1.0, 1.7, 0.1);
    let times: Vec<f64> = (0..5).map(|i| 100.0 + 20.0 * i as f64).collect();
    let run = pde::run(&InitialCondition::FrontSeed, &weak, grid, stepping, 200.0, &times)?;
    let states = run.into_result()?;
    let speed = pde::front_speed(&states, level)?;
    let last = states.last().unwrap();
    s.save("fig1/a_chi0_1.7_t200.csv", &snapshot_table(last))?;
    table.push(vec![
        "A".into(),
        num(weak.chi0),
        num(last.t),
        num(stability::instability_factor(&weak)?),
        stability::classify(&weak)?.to_string(),
        num(speed),
        num(2.0 * (weak.d * weak.r).sqrt()),
    ]);

    // B, C: strong chemotaxis, one run sampled at both times
    let strong = defaults();
    let states = pde::run(&InitialCondition::FrontSeed, &strong, grid, stepping, 800.0, &[200.0])?.into_result()?;
    for (panel, state) in ["B", "C"].iter().zip(&states) {
        s.save(
            &format!("fig1/{}_chi0_1.9_t{}.csv", panel.to_lowercase(), num(state.t)),
            &snapshot_table(state),
        )?;
        table.push(vec![
            panel.to_string(),
            num(strong.chi0),
            num(state.t),
            num(stability::instability_factor(&strong)?),
            stability::classify(&strong)?.to_string(),
            String::new(),
            String::new(),
        ]);
    }
    let weak_class = stability::classify(&weak)?;
    if weak_class != PatternClass::TravellingWave {
        s.warn(format!("fig1: chi0 = 1.7 classified as {weak_class}"));
    }
    s.save("fig1/classification.csv", &table)
}

// R_T = 1 curves in the (D, chi0), (r, chi0) and (D, r) planes for the chi0 n and
// chi0 n / (c + nu) sensitivities.
fn fig2(s: &mut Session) -> Result<()> {
    let t = Target::Fig2;
    let nu = 0.2;
    let points = 200;
    fixed(s, t, "nu", nu);
    fixed(s, t, "points", points);
    let m3 = defaults();
    let m7 = defaults().with_variant(Variant::M7).with_nu(nu);
    record_model(s, t, &m3);
    let panels = [
        ("a_D_chi0", ModelParam::D, (0.01, 3.0), ModelParam::Chi0, (0.0, 50.0)),
        ("b_r_chi0", ModelParam::R, (0.001, 1.0), ModelParam::Chi0, (0.0, 50.0)),
        ("c_D_r", ModelParam::D, (0.01, 3.0), ModelParam::R, (1e-12, 50.0)),
    ];
    for (name, x, (from, to), y, (lo, hi)) in panels {
        fixed(s, t, &format!("{name}.range"), format!("{from}..{to}"));
        let mut table = Table::new([x.as_str().to_string(), format!("{y}_m3"), format!("{y}_m7")]);
        for v in linspace(from, to, points) {
            let mut row = vec![num(v)];
            for base in [m3, m7] {
                let mut m = base;
                x.set(&mut m, v);
                row.push(opt(threshold(&m, y, lo, hi)?));
            }
            table.push(row);
        }
        s.save(&format!("fig2/{name}.csv"), &table)?;
    }
    let mut point = Table::new(["D", "chi0", "r", "rt_m3", "rt_m7"]);
    point.push(vec![
        num(m3.d),
        num(m3.chi0),
        num(m3.r),
        num(stability::instability_factor(&m3)?),
        num(stability::instability_factor(&m7)?),
    ]);
    s.save("fig2/default_point.csv", &point)
}

// Constant, density-proportional and growing sensitivities from a centred stimulus.
fn fig3(s: &mut Session) -> Result<()> {
    let t = Target::Fig3;
    let (length, t_end, chi0) = (50.0, 500.0, 1.8);
    let settings = SimulationSettings::semi_implicit();
    fixed(s, t, "length", length);
    fixed(s, t, "t_end", t_end);
    fixed(s, t, "chi0", chi0);
    fixed(s, t, "dx", settings.dx);
    fixed(s, t, "scheme", "SemiImplicit");
    fixed(s, t, "stimulus", "n = 1.1 on (24, 26)");
    let grid = Grid1D::with_spacing(length, settings.dx)?;
    let panels = [
        ("a", Variant::M1, 0.0, 0.0),
        ("b", Variant::M2, 1.0, 0.0),
        ("c", Variant::M3, 0.0, 0.0),
    ];
    // dense snapshots keep the last state before a blow-up
    let times: Vec<f64> = (1..500).map(|i| i as f64).collect();
    let mut outcome = Table::new(["panel", "variant", "n0", "t_reached", "outcome"]);
    for (panel, variant, n, c) in panels {
        let ic = InitialCondition::HomogeneousPlusStimulus {
            n,
            c,
            level: 1.1,
            center: None,
        };
        let mut m = ModelSpec::m3(1.0, chi0, 0.1).with_variant(variant);
        // without growth the homogeneous level is the conserved mean density
        let n0 = ic.build(grid)?.n.iter().sum::<f64>() / grid.nx() as f64;
        if !variant.has_logistic_kinetics() {
            m = m.with_n0(n0);
        }
        let run = pde::run(&ic, &m, grid, settings.stepping(&grid, &m), t_end, &times)?;
        let last = match run.snapshots.last() {
            Some(state) => state.clone(),
            None => ic.build(grid)?,
        };
        s.save(&format!("fig3/{panel}_{variant}_t{}.csv", num(last.t)), &snapshot_table(&last))?;
        let what = match &run.failure {
            None => "completed".to_string(),
            Some(err @ Error::BlowUp { .. }) => err.to_string(),
            Some(err) => return Err(err.clone().into()),
        };
        outcome.push(vec![
            panel.to_uppercase(),
            variant.to_string(),
            if variant.has_logistic_kinetics() { String::new() } else { num(n0) },
            num(last.t),
            what,
        ]);
    }
    s.save("fig3/outcome.csv", &outcome)
}

// Explicit and implicit linear wavelengths against D, chi0 and r.
fn fig4(s: &mut Session) -> Result<()> {
    let t = Target::Fig4;
    let points = 200;
    fixed(s, t, "points", points);
    record_model(s, t, &defaults());
    let panels = [
        ("a_D", ModelParam::D, (0.05, 1.2)),
        ("b_chi0", ModelParam::Chi0, (1.6, 4.0)),
        ("c_r", ModelParam::R, (0.005, 0.2)),
    ];
    for (name, param, (from, to)) in panels {
        fixed(s, t, &format!("{name}.range"), format!("{from}..{to}"));
        let mut table = Table::new([param.as_str(), "rt", "lambda_explicit", "lambda_implicit"]);
        for v in linspace(from, to, points) {
            let mut m = defaults();
            param.set(&mut m, v);
            let r = stability::report(&m)?;
            table.push(vec![num(v), num(r.rt), opt(r.lambda_explicit), opt(r.lambda_implicit)]);
        }
        s.save(&format!("fig4/{name}.csv"), &table)?;
    }
    Ok(())
}

// Coefficients against domain length.
fn fig5(s: &mut Session) -> Result<()> {
    let t = Target::Fig5;
    let (from, to, step, modes) = (1.0, 25.0, 0.25, 10);
    let settings = SimulationSettings::semi_implicit();
    fixed(s, t, "lengths", format!("{from}..{to} step {step}"));
    fixed(s, t, "modes", modes);
    record_settings(s, t, &settings);
    let rows = spectral::domain_sweep(&defaults(), &spectral::length_range(from, to, step), modes, &settings);
    s.save("fig5/alpha_vs_length.csv", &sweep_table(&rows, modes))?;
    if let Some(bad) = rows.iter().find(|r| r.failure.is_some() || !r.converged) {
        return Err(CliError::Numerical(format!(
            "fig5: L = {} {}",
            bad.length,
            bad.failure.clone().unwrap_or_else(|| "did not become stationary".into())
        )));
    }
    let mut summary = Table::new(["mode", "lambda0", "alpha_max", "amplitude"]);
    for mode in 1..=3 {
        let c = spectral::characteristic_length(&rows, mode)?;
        summary.push(vec![mode.to_string(), num(c.lambda0), num(c.alpha_max), num(c.amplitude())]);
        if mode == 1 {
            s.note("fig5.lambda0", c.lambda0);
            s.note("fig5.alpha_max", c.alpha_max);
            s.note("fig5.amplitude", c.amplitude());
        }
    }
    s.save("fig5/summary.csv", &summary)
}

/// Coefficients with `alpha_1 >= 0` (the mirror image of a pattern flips odd modes).
fn positive(mut alpha: Vec<f64>) -> Vec<f64> {
    if alpha.get(1).is_some_and(|a| *a < 0.0) {
        alpha.iter_mut().skip(1).step_by(2).for_each(|a| *a = -*a);
    }
    alpha
}

// Simulated half-spike against the truncations M = 1..4.
fn table2(s: &mut Session) -> Result<()> {
    let t = Target::Table2;
    let (length, max_modes) = (5.5, 4);
    let settings = half_spike_settings();
    fixed(s, t, "length", length);
    record_model(s, t, &defaults());
    record_settings(s, t, &settings);
    fixed(s, t, "newton_tol", num(galerkin::DEFAULT_TOL));
    let state = stationary_pattern(&defaults(), length, &settings)?;
    let profile = Profile::cells(&state);
    let simulated = positive(spectral::decompose(&profile, max_modes)?.alpha);
    let ladder = galerkin::truncation_ladder(&defaults(), PI / length, max_modes, NewtonOptions::default())?;

    let mut header = vec!["row".to_string()];
    header.extend(alpha_columns("alpha", max_modes));
    header.push("discrepancy".into());
    header.push("residual".into());
    let mut table = Table::new(header);
    let mut row = vec!["Simulation".to_string()];
    row.extend(simulated.iter().map(|v| num(*v)));
    table.push(row);
    for sol in &ladder {
        let order = sol.alpha.len() - 1;
        let series = SpectralSeries {
            length,
            alpha: sol.alpha.clone(),
            beta: None,
        };
        let gap = spectral::discrepancy(&profile, &spectral::reconstruct(&series, profile.grid))?;
        let mut row = vec![format!("M={order}")];
        row.extend(sol.padded(max_modes).iter().map(|v| num(*v)));
        row.push(num(gap));
        row.push(num(sol.residual_norm));
        table.push(row);
    }
    s.save("table2/coefficients.csv", &table)
}

// Simulated and truncated profiles at L = 5.5, and alpha_0, alpha_1 against L.
fn fig6(s: &mut Session) -> Result<()> {
    let t = Target::Fig6;
    let length = 5.5;
    let settings = half_spike_settings();
    let sweep_settings = SimulationSettings::semi_implicit();
    let lengths = spectral::length_range(3.0, 12.0, 0.25);
    fixed(s, t, "length", length);
    fixed(s, t, "sweep_lengths", "3..12 step 0.25");
    record_model(s, t, &defaults());
    record_settings(s, t, &settings);
    fixed(s, t, "sweep_scheme", "SemiImplicit");

    let state = stationary_pattern(&defaults(), length, &settings)?;
    let grid: SampleGrid = state.grid.into();
    let flip = spectral::decompose(&Profile::cells(&state), 1)?.alpha[1] < 0.0;
    let truncated = |modes: usize| -> Result<Profile> {
        let sys = GalerkinSystem::for_length(&defaults(), modes, length)?;
        let mut sol = galerkin::solve_from_closed_form(&sys, NewtonOptions::default())?;
        if flip {
            sol = sol.mirrored(&sys);
        }
        let series = SpectralSeries {
            length,
            alpha: sol.alpha,
            beta: None,
        };
        Ok(spectral::reconstruct(&series, grid))
    };
    let (m1, m3) = (truncated(1)?, truncated(3)?);
    let mut profiles = Table::new(["x", "n_simulation", "n_m1", "n_m3"]);
    for (i, x) in grid.positions().iter().enumerate() {
        profiles.push(vec![num(*x), num(state.n[i]), num(m1.values[i]), num(m3.values[i])]);
    }
    s.save("fig6/a_profiles.csv", &profiles)?;

    let rows = spectral::domain_sweep(&defaults(), &lengths, 4, &sweep_settings);
    let template = |modes| GalerkinSystem::for_length(&defaults(), modes, lengths[0]);
    let opts = NewtonOptions::default();
    let one = galerkin::continuation_sweep(&template(1)?, ContinuationParameter::Length, &lengths, opts)?;
    let three = galerkin::continuation_sweep(&template(3)?, ContinuationParameter::Length, &lengths, opts)?;
    let mut table = Table::new([
        "L",
        "simulation_alpha_0",
        "simulation_alpha_1",
        "m1_alpha_0",
        "m1_alpha_1",
        "m3_alpha_0",
        "m3_alpha_1",
    ]);
    for ((sim, a), b) in rows.iter().zip(&one).zip(&three) {
        let sim_alpha = positive(sim.alpha.clone());
        table.push(vec![
            num(sim.length),
            sim_alpha.first().map(|v| num(*v)).unwrap_or_default(),
            sim_alpha.get(1).map(|v| num(*v)).unwrap_or_default(),
            num(a.solution.alpha[0]),
            num(a.solution.alpha[1]),
            num(b.solution.alpha[0]),
            num(b.solution.alpha[1]),
        ]);
    }
    s.save("fig6/b_alpha_vs_length.csv", &table)?;
    if let Some(bad) = rows.iter().find(|r| r.failure.is_some() || !r.converged) {
        return Err(CliError::Numerical(format!("fig6: L = {} did not become stationary", bad.length)));
    }
    Ok(())
}

struct Fig7Point {
    lambda_linear: Option<f64>,
    galerkin: std::result::Result<(f64, f64, Vec<f64>), String>,
    simulation: std::result::Result<(f64, f64, Vec<f64>, SimulationState), String>,
}

const FIG7_MODES: usize = 3;

fn fig7_point(m: &ModelSpec, settings: &SimulationSettings) -> Fig7Point {
    let lambda_linear = stability::wavelength_implicit(m).ok().map(|(_, l)| l);
    let galerkin = galerkin::predict_wavelength_amplitude(m, FIG7_MODES, MaximisedMode::First)
        .and_then(|p| {
            let sys = GalerkinSystem::for_length(m, FIG7_MODES, p.lambda0)?;
            let sol = galerkin::solve_from_closed_form(&sys, NewtonOptions::default())?;
            Ok((p.lambda0, p.alpha_max, sol.alpha))
        })
        .map_err(|e| e.to_string());
    // bracket the simulated bump around the truncated estimate (or the linear one)
    let centre = galerkin.as_ref().map(|g| g.0).ok().or(lambda_linear);
    let simulation = match centre {
        None => Err("no length estimate to centre the sweep on".to_string()),
        Some(centre) => {
            let lengths = linspace(0.8 * centre, 1.2 * centre, 17);
            let rows = spectral::domain_sweep(m, &lengths, FIG7_MODES, settings);
            spectral::characteristic_length(&rows, 1)
                .map_err(CliError::from)
                .and_then(|c| {
                    let state = stationary_pattern(m, c.lambda0, settings)?;
                    let alpha = positive(spectral::decompose(&Profile::cells(&state), FIG7_MODES)?.alpha);
                    Ok((c.lambda0, c.alpha_max, alpha, state))
                })
                .map_err(|e| e.to_string())
        }
    };
    Fig7Point {
        lambda_linear,
        galerkin,
        simulation,
    }
}

// Characteristic length, coefficients and scaled profiles against D, chi0 and r.
fn fig7(s: &mut Session) -> Result<()> {
    let t = Target::Fig7;
    let points = 10;
    let settings = SimulationSettings::semi_implicit();
    fixed(s, t, "points", points);
    fixed(s, t, "modes", FIG7_MODES);
    fixed(s, t, "maximised_mode", "First");
    record_model(s, t, &defaults());
    record_settings(s, t, &settings);
    let panels = [
        ("D", ModelParam::D, (0.5, 1.05)),
        ("chi0", ModelParam::Chi0, (1.85, 3.2)),
        ("r", ModelParam::R, (0.02, 0.13)),
    ];
    let jobs: Vec<(usize, f64, ModelSpec)> = panels
        .iter()
        .enumerate()
        .flat_map(|(p, (_, param, (from, to)))| {
            linspace(*from, *to, points).into_iter().map(move |v| {
                let mut m = defaults();
                param.set(&mut m, v);
                (p, v, m)
            })
        })
        .collect();
    let results: Vec<Fig7Point> = jobs.par_iter().map(|(_, _, m)| fig7_point(m, &settings)).collect();

    for (p, (name, param, (from, to))) in panels.iter().enumerate() {
        fixed(s, t, &format!("{name}.range"), format!("{from}..{to}"));
        let mut header = vec![
            param.as_str().to_string(),
            "lambda_linear".into(),
            "lambda0_galerkin".into(),
            "lambda0_simulation".into(),
            "alpha_max_galerkin".into(),
            "alpha_max_simulation".into(),
        ];
        header.extend(alpha_columns("galerkin_alpha", FIG7_MODES));
        header.extend(alpha_columns("simulation_alpha", FIG7_MODES));
        header.push("failure".into());
        let mut table = Table::new(header);
        let mut profiles = Table::new(["value", "xi", "n"]);
        for ((_, v, _), point) in jobs.iter().zip(&results).filter(|((q, _, _), _)| *q == p) {
            let (g_len, g_max, g_alpha) = match &point.galerkin {
                Ok((l, a, alpha)) => (num(*l), num(*a), alpha.iter().map(|x| num(*x)).collect()),
                Err(_) => (String::new(), String::new(), vec![String::new(); FIG7_MODES + 1]),
            };
            let (s_len, s_max, s_alpha) = match &point.simulation {
                Ok((l, a, alpha, state)) => {
                    for i in 0..state.grid.nx() {
                        profiles.push(vec![num(*v), num(state.grid.center(i) / l), num(state.n[i])]);
                    }
                    (num(*l), num(*a), alpha.iter().map(|x| num(*x)).collect())
                }
                Err(_) => (String::new(), String::new(), vec![String::new(); FIG7_MODES + 1]),
            };
            let failure: Vec<String> = [&point.galerkin.as_ref().err(), &point.simulation.as_ref().err()]
                .iter()
                .zip(["galerkin", "simulation"])
                .filter_map(|(e, what)| e.map(|e| format!("{what}: {e}")))
                .collect();
            let mut row = vec![num(*v), opt(point.lambda_linear), g_len, s_len, g_max, s_max];
            row.extend(g_alpha);
            row.extend(s_alpha);
            row.push(failure.join("; "));
            table.push(row);
        }
        s.save(&format!("fig7/{name}.csv"), &table)?;
        s.save(&format!("fig7/{name}_profiles.csv"), &profiles)?;
    }
    let failed = results
        .iter()
        .filter(|p| p.galerkin.is_err() || p.simulation.is_err())
        .count();
    if failed > 0 {
        s.warn(format!("fig7: {failed} parameter points have missing entries (see the failure column)"));
    }
    Ok(())
}

use std::path::{Path, PathBuf};

use chemotaxis::galerkin::{self, GalerkinSolution, GalerkinSystem, NewtonOptions};
use chemotaxis::optim;
use chemotaxis::pde::{self, Grid1D, InitialCondition, Scheme, SimulationSettings, SimulationState, StationaryCriterion, TimeStepping};
use chemotaxis::spectral::{self, Layout, Profile, SampleGrid};
use chemotaxis::stability;
use chemotaxis::{ModelSpec, Variant};

use crate::config::{ensure, FloatList, Resolver};
use crate::error::CliError;
use crate::keywords::{IcKind, Maximise, ModelParam, SchemeArg};
use crate::output::{alpha_columns, num, opt, Session, Table};
use crate::{
    DecomposeArgs, FrontSpeedArgs, GalerkinArgs, GalerkinSweepArgs, LengthSweepArgs, ModelArgs, NewtonArgs,
    SimulateArgs, StabilityArgs, StabilitySweepArgs, StationaryArgs,
};

type Result<T, E = CliError> = std::result::Result<T, E>;

pub const STABILITY_COLUMNS: [&str; 8] = [
    "rt",
    "k1_sq",
    "k2_sq",
    "k_av_sq",
    "k_star_sq",
    "lambda_explicit",
    "lambda_implicit",
    "class",
];

pub fn resolve_model(res: &mut Resolver, a: &ModelArgs) -> Result<ModelSpec> {
    let m = ModelSpec {
        variant: res.value("variant", a.variant, Variant::M3)?,
        d: res.value("D", a.d, 1.0)?,
        chi0: res.value("chi0", a.chi0, 1.9)?,
        r: res.value("r", a.r, 0.1)?,
        nu: res.optional("nu", a.nu)?,
        nu1: res.optional("nu1", a.nu1)?,
        nu2: res.optional("nu2", a.nu2)?,
        n0: res.optional("n0", a.n0)?,
    };
    m.validate()?;
    Ok(m)
}

pub fn resolve_stationary(res: &mut Resolver, a: &StationaryArgs) -> Result<StationaryCriterion> {
    let c = StationaryCriterion {
        tol: res.value("tol", a.tol, pde::DEFAULT_TOL)?,
        t_max: res.value("t-max", a.t_max, pde::DEFAULT_T_MAX)?,
        interval: res.value("interval", a.interval, 1.0)?,
    };
    ensure(c.tol > 0.0, "tol", "positive")?;
    ensure(c.t_max > 0.0, "t-max", "positive")?;
    ensure(c.interval > 0.0, "interval", "positive")?;
    Ok(c)
}

fn resolve_newton(res: &mut Resolver, a: &NewtonArgs) -> Result<NewtonOptions> {
    let opts = NewtonOptions {
        tol: res.value("newton-tol", a.newton_tol, galerkin::DEFAULT_TOL)?,
        max_iter: res.value("max-iter", a.max_iter, galerkin::DEFAULT_MAX_ITER)?,
    };
    ensure(opts.tol > 0.0, "newton-tol", "positive")?;
    ensure(opts.max_iter >= 1, "max-iter", "at least 1")?;
    Ok(opts)
}

fn resolve_range(res: &mut Resolver, from: Option<f64>, to: Option<f64>, points: Option<usize>, default_points: usize) -> Result<Vec<f64>> {
    let from = res.optional("from", from)?.ok_or_else(|| CliError::Config("--from is required".into()))?;
    let to = res.optional("to", to)?.ok_or_else(|| CliError::Config("--to is required".into()))?;
    let points = res.value("points", points, default_points)?;
    ensure(from.is_finite() && to.is_finite(), "from", "finite (and so must --to)")?;
    ensure(points >= 1, "points", "at least 1")?;
    ensure(points == 1 || to != from, "to", "different from --from when --points > 1")?;
    Ok(linspace(from, to, points))
}

pub fn linspace(from: f64, to: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![from];
    }
    (0..points)
        .map(|i| if i + 1 == points { to } else { from + (to - from) * i as f64 / (points - 1) as f64 })
        .collect()
}

fn out_dir(res: &mut Resolver, flag: &Option<PathBuf>, default: &str) -> Result<PathBuf> {
    let dir = res.value("out-dir", flag.as_ref().map(|p| p.display().to_string()), default.to_string())?;
    Ok(PathBuf::from(dir))
}

pub fn stability_row(m: &ModelSpec) -> Result<Vec<String>> {
    let r = stability::report(m)?;
    Ok(vec![
        num(r.rt),
        opt(r.band.map(|b| b.0)),
        opt(r.band.map(|b| b.1)),
        opt(r.k_av_sq),
        opt(r.k_star_sq),
        opt(r.lambda_explicit),
        opt(r.lambda_implicit),
        r.class.to_string(),
    ])
}

pub fn stability(s: &mut Session, a: &StabilityArgs) -> Result<()> {
    let m = resolve_model(&mut s.res, &a.model)?;
    let mut t = Table::new(STABILITY_COLUMNS);
    t.push(stability_row(&m)?);
    s.emit(&t, a.out.out.as_deref(), a.out.manifest.as_deref())
}

/// Value of `target` where `R_T = 1` with everything else fixed, if `[lo, hi]` brackets it.
pub fn threshold(m: &ModelSpec, target: ModelParam, lo: f64, hi: f64) -> Result<Option<f64>> {
    let excess = |v: f64| -> Result<f64> {
        let mut p = *m;
        target.set(&mut p, v);
        Ok(stability::instability_factor(&p)? - 1.0)
    };
    let (f_lo, f_hi) = (excess(lo)?, excess(hi)?);
    if f_lo == 0.0 {
        return Ok(Some(lo));
    }
    if (f_lo > 0.0) == (f_hi > 0.0) {
        return Ok(None);
    }
    let mut failure = None;
    let root = optim::bisect(
        |v| match excess(v) {
            Ok(e) => e,
            Err(err) => {
                failure.get_or_insert(err);
                f64::NAN
            }
        },
        lo,
        hi,
        1e-13 * hi.abs().max(1.0),
    );
    match failure {
        Some(err) => Err(err),
        None => Ok(Some(root)),
    }
}

pub fn stability_sweep(s: &mut Session, a: &StabilitySweepArgs) -> Result<()> {
    let base = resolve_model(&mut s.res, &a.model)?;
    let vary = s
        .res
        .optional("vary", a.vary)?
        .ok_or_else(|| CliError::Config("--vary is required".into()))?;
    let values = resolve_range(&mut s.res, a.from, a.to, a.points, 101)?;
    let boundary = s.res.optional("boundary", a.boundary)?;
    let table = match boundary {
        Some(target) => {
            ensure(target != vary, "boundary", "a different parameter from --vary")?;
            let lo = s.res.value("search-from", a.search_from, 1e-6)?;
            let hi = s.res.value("search-to", a.search_to, 50.0)?;
            ensure(lo < hi, "search-to", "greater than --search-from")?;
            let mut t = Table::new([vary.as_str().to_string(), format!("{target}_at_rt_1")]);
            for &v in &values {
                let mut m = base;
                vary.set(&mut m, v);
                t.push(vec![num(v), opt(threshold(&m, target, lo, hi)?)]);
            }
            t
        }
        None => {
            let mut header = vec![vary.as_str().to_string()];
            header.extend(STABILITY_COLUMNS.iter().map(|c| c.to_string()));
            header.push("error".into());
            let mut t = Table::new(header);
            for &v in &values {
                let mut m = base;
                vary.set(&mut m, v);
                let mut row = vec![num(v)];
                match m.validate().map_err(CliError::from).and_then(|_| stability_row(&m)) {
                    Ok(cells) => row.extend(cells),
                    Err(err) => {
                        row.resize(1 + STABILITY_COLUMNS.len(), String::new());
                        row.push(err.to_string());
                    }
                }
                t.push(row);
            }
            t
        }
    };
    s.emit(&table, a.out.out.as_deref(), a.out.manifest.as_deref())
}

pub fn snapshot_table(state: &SimulationState) -> Table {
    let mut t = Table::new(["x", "n", "c"]);
    for i in 0..state.grid.nx() {
        t.push(vec![num(state.grid.center(i)), num(state.n[i]), num(state.c[i])]);
    }
    t
}

pub fn snapshot_name(prefix: &str, t: f64) -> String {
    format!("{prefix}_t{}.csv", num(t))
}

pub fn simulate(s: &mut Session, a: &SimulateArgs) -> Result<()> {
    let res = &mut s.res;
    let m = resolve_model(res, &a.model)?;
    let length = res.value("length", a.length, 50.0)?;
    ensure(length > 0.0 && length.is_finite(), "length", "positive")?;
    let nx = res.optional("nx", a.nx)?;
    let dx = res.value("dx", a.dx, pde::DEFAULT_DX)?;
    let grid = match nx {
        Some(nx) => {
            ensure(nx >= Grid1D::MIN_CELLS, "nx", &format!("at least {} (grid too coarse)", Grid1D::MIN_CELLS))?;
            Grid1D::new(length, nx)?
        }
        None => {
            ensure(dx > 0.0 && dx <= length / Grid1D::MIN_CELLS as f64, "dx", "positive and at most length / 8")?;
            Grid1D::with_spacing(length, dx)?
        }
    };
    let scheme: Scheme = res.value("scheme", a.scheme, SchemeArg::Explicit)?.into();
    let dt = res.optional("dt", a.dt)?;
    let stable = match scheme {
        Scheme::Explicit => TimeStepping::explicit(&grid, &m),
        Scheme::SemiImplicit => TimeStepping::semi_implicit(&grid),
    };
    if let Some(dt) = dt {
        ensure(dt > 0.0 && dt.is_finite(), "dt", "positive")?;
    }
    let stepping = TimeStepping {
        dt: dt.unwrap_or(stable.dt),
        ..stable
    };
    let ic = match res.value("ic", a.ic, IcKind::Stimulus)? {
        IcKind::FrontSeed => InitialCondition::FrontSeed,
        IcKind::Stimulus => InitialCondition::HomogeneousPlusStimulus {
            n: res.value("ic-n", a.ic_n, 1.0)?,
            c: res.value("ic-c", a.ic_c, 1.0)?,
            level: res.value("stimulus", a.stimulus, 1.1)?,
            center: res.optional("stimulus-center", a.stimulus_center)?,
        },
        IcKind::Homogeneous => InitialCondition::Homogeneous {
            n: res.value("ic-n", a.ic_n, 1.0)?,
            c: res.value("ic-c", a.ic_c, 1.0)?,
        },
    };
    let to_stationary = res.value("to-stationary", a.to_stationary.then_some(true), false)?;
    let snapshots = res.value("snapshots", a.snapshots.clone(), FloatList::default())?;
    let prefix = res.value("prefix", a.prefix.clone(), "snapshot".to_string())?;
    let dir = out_dir(res, &a.out_dir, ".")?;
    res.fixed("nx_effective", grid.nx());
    res.fixed("dt_effective", num(stepping.dt));
    if scheme == Scheme::Explicit && stepping.dt > stable.dt {
        s.warn(format!("--dt {} exceeds the explicit stability estimate {}", stepping.dt, stable.dt));
    }

    if to_stationary {
        ensure(snapshots.0.is_empty(), "snapshots", "omitted together with --to-stationary")?;
        let criterion = resolve_stationary(&mut s.res, &a.stationary)?;
        s.use_dir(&dir)?;
        let (state, converged) = pde::run_to_stationary(&ic, &m, grid, stepping, criterion)?;
        s.save(&snapshot_name(&prefix, state.t), &snapshot_table(&state))?;
        s.note("t_final", state.t);
        s.note("stationary", converged);
        if !converged {
            return Err(CliError::Numerical(format!(
                "not stationary by t = {} (tolerance {})",
                criterion.t_max, criterion.tol
            )));
        }
        return Ok(());
    }
    let t_end = s.res.value("t-end", a.t_end, 200.0)?;
    ensure(t_end > 0.0 && t_end.is_finite(), "t-end", "positive")?;
    ensure(snapshots.0.iter().all(|t| *t > 0.0 && *t <= t_end), "snapshots", "times in (0, t-end]")?;
    s.use_dir(&dir)?;
    let trajectory = pde::run(&ic, &m, grid, stepping, t_end, &snapshots.0)?;
    for state in &trajectory.snapshots {
        s.save(&snapshot_name(&prefix, state.t), &snapshot_table(state))?;
    }
    match trajectory.failure {
        Some(err) => Err(err.into()),
        None => Ok(()),
    }
}

/// Columns `x`, `n` and (optionally) `c` of a profile CSV.
pub fn read_profile(path: &Path) -> Result<(Vec<f64>, Vec<f64>, Option<Vec<f64>>)> {
    let bad = |msg: String| CliError::Config(format!("{}: {msg}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let column = |name: &str| headers.iter().position(|h| h.trim() == name);
    let ix = column("x").ok_or_else(|| bad("missing column `x`".into()))?;
    let in_ = column("n").ok_or_else(|| bad("missing column `n`".into()))?;
    let ic = column("c");
    let (mut x, mut n, mut c) = (Vec::new(), Vec::new(), Vec::new());
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let field = |i: usize| -> Result<f64> {
            let raw = record.get(i).unwrap_or("").trim();
            raw.parse::<f64>()
                .map_err(|_| bad(format!("row {}: `{raw}` is not a number", line + 2)))
        };
        x.push(field(ix)?);
        n.push(field(in_)?);
        if let Some(i) = ic {
            c.push(field(i)?);
        }
    }
    Ok((x, n, ic.map(|_| c)))
}

/// Time encoded in a snapshot name `<anything>_t<time>.csv`.
pub fn time_from_name(path: &Path) -> Result<f64> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .and_then(|s| s.rsplit_once("_t"))
        .and_then(|(_, t)| t.parse::<f64>().ok())
        .ok_or_else(|| CliError::Config(format!("{}: cannot read the time from the file name (expected `_t<time>.csv`)", path.display())))
}

pub fn front_speed(s: &mut Session, a: &FrontSpeedArgs) -> Result<()> {
    let level = s.res.value("level", a.level, 0.5)?;
    ensure(level > 0.0 && level < 1.0, "level", "in (0, 1)")?;
    ensure(a.inputs.len() >= 2, "inputs", "at least two snapshot files")?;
    let mut states = Vec::with_capacity(a.inputs.len());
    for path in &a.inputs {
        let t = time_from_name(path)?;
        let (x, n, c) = read_profile(path)?;
        let grid = SampleGrid::from_positions(&x)?;
        if grid.layout != Layout::CellCentered {
            return Err(CliError::Config(format!("{}: positions must be cell centres", path.display())));
        }
        let grid = Grid1D::new(grid.length, grid.count)?;
        let c = c.unwrap_or_else(|| vec![0.0; n.len()]);
        states.push(SimulationState { grid, n, c, t });
    }
    states.sort_by(|a, b| a.t.total_cmp(&b.t));
    let speed = pde::front_speed(&states, level)?;
    let mut t = Table::new(["level", "snapshots", "t_first", "t_last", "speed"]);
    t.push(vec![
        num(level),
        states.len().to_string(),
        num(states[0].t),
        num(states[states.len() - 1].t),
        num(speed),
    ]);
    s.emit(&t, a.out.out.as_deref(), a.out.manifest.as_deref())
}

pub fn decompose(s: &mut Session, a: &DecomposeArgs) -> Result<()> {
    let modes = s.res.value("modes", a.modes, 10)?;
    ensure(modes >= 1, "modes", "at least 1")?;
    let (x, n, c) = read_profile(&a.input)?;
    let grid = SampleGrid::from_positions(&x)?;
    let alpha = spectral::decompose(&Profile::new(grid, n)?, modes)?.alpha;
    let beta = match c {
        Some(c) => Some(spectral::decompose(&Profile::new(grid, c)?, modes)?.alpha),
        None => None,
    };
    let mut header = vec!["mode", "alpha"];
    if beta.is_some() {
        header.push("beta");
    }
    let mut t = Table::new(header);
    for (i, a_i) in alpha.iter().enumerate() {
        let mut row = vec![i.to_string(), num(*a_i)];
        if let Some(b) = &beta {
            row.push(num(b[i]));
        }
        t.push(row);
    }
    s.note("length", grid.length);
    s.note("samples", grid.count);
    s.emit(&t, a.out.out.as_deref(), a.out.manifest.as_deref())
}

pub fn sweep_table(rows: &[spectral::SweepRow], modes: usize) -> Table {
    let mut header = vec!["L".to_string()];
    header.extend(alpha_columns("alpha", modes));
    header.push("converged".into());
    header.push("failure".into());
    let mut t = Table::new(header);
    for r in rows {
        let mut row = vec![num(r.length)];
        row.extend((0..=modes).map(|i| r.alpha.get(i).map(|v| num(*v)).unwrap_or_default()));
        row.push(r.converged.to_string());
        row.push(r.failure.clone().unwrap_or_default());
        t.push(row);
    }
    t
}

pub fn length_sweep(s: &mut Session, a: &LengthSweepArgs) -> Result<()> {
    let res = &mut s.res;
    let m = resolve_model(res, &a.model)?;
    let from = res.value("from", a.from, 1.0)?;
    let to = res.value("to", a.to, 25.0)?;
    let step = res.value("step", a.step, 0.25)?;
    let modes = res.value("modes", a.modes, 10)?;
    let summary_mode = res.value("summary-mode", a.summary_mode, 1)?;
    ensure(from > 0.0, "from", "a positive length")?;
    ensure(to >= from, "to", "at least --from")?;
    ensure(step > 0.0, "step", "positive")?;
    ensure(modes >= 1, "modes", "at least 1")?;
    ensure((1..=modes).contains(&summary_mode), "summary-mode", "between 1 and --modes")?;
    let settings = SimulationSettings {
        dx: res.value("dx", a.dx, pde::DEFAULT_DX)?,
        scheme: res.value("scheme", a.scheme, SchemeArg::SemiImplicit)?.into(),
        dt: res.optional("dt", a.dt)?,
        criterion: resolve_stationary(res, &a.stationary)?,
    };
    ensure(settings.dx > 0.0, "dx", "positive")?;
    ensure(settings.dt.is_none_or(|dt| dt > 0.0), "dt", "positive")?;

    let rows = spectral::domain_sweep(&m, &spectral::length_range(from, to, step), modes, &settings);
    for r in &rows {
        if let Some(f) = &r.failure {
            s.warn(format!("L = {}: {f}", r.length));
        } else if !r.converged {
            s.warn(format!("L = {}: not stationary by t = {}", r.length, settings.criterion.t_max));
        }
    }
    s.emit(&sweep_table(&rows, modes), a.out.out.as_deref(), a.out.manifest.as_deref())?;
    let summary = spectral::characteristic_length(&rows, summary_mode)?;
    s.note("lambda0", summary.lambda0);
    s.note("alpha_max", summary.alpha_max);
    s.note("amplitude", summary.amplitude());
    eprintln!(
        "summary: lambda0 = {}, alpha_max = {}, amplitude = {}",
        num(summary.lambda0),
        num(summary.alpha_max),
        num(summary.amplitude())
    );
    Ok(())
}

pub fn galerkin_header(modes: usize) -> Vec<String> {
    let mut header = vec!["M".to_string()];
    header.extend(alpha_columns("alpha", modes));
    header.push("residual".into());
    header.push("branch".into());
    header
}

pub fn galerkin_row(sol: &GalerkinSolution, width: usize) -> Vec<String> {
    let mut row = vec![(sol.alpha.len() - 1).to_string()];
    row.extend(sol.padded(width).iter().map(|v| num(*v)));
    row.push(num(sol.residual_norm));
    row.push(format!("{:?}", sol.branch));
    row
}

pub fn galerkin(s: &mut Session, a: &GalerkinArgs) -> Result<()> {
    let res = &mut s.res;
    let m = resolve_model(res, &a.model)?;
    let modes = res.value("modes", a.modes, 3)?;
    ensure(modes >= 1, "modes", "at least 1")?;
    let predict = res.value("predict", a.predict.then_some(true), false)?;
    if predict {
        let mode = res.value("maximise", a.maximise, Maximise::First)?;
        ensure(mode != Maximise::Second || modes >= 2, "modes", "at least 2 with --maximise second")?;
        let p = galerkin::predict_wavelength_amplitude(&m, modes, mode.into())?;
        let mut t = Table::new(["M", "maximise", "lambda0", "k_star", "alpha_max", "amplitude"]);
        t.push(vec![
            modes.to_string(),
            mode.to_string(),
            num(p.lambda0),
            num(p.k_star),
            num(p.alpha_max),
            num(p.amplitude),
        ]);
        return s.emit(&t, a.out.out.as_deref(), a.out.manifest.as_deref());
    }
    let k = match res.optional("k", a.k)? {
        Some(k) => k,
        None => {
            let length = res.value("length", a.length, 5.5)?;
            ensure(length > 0.0, "length", "positive")?;
            std::f64::consts::PI / length
        }
    };
    ensure(k > 0.0 && k.is_finite(), "k", "positive")?;
    let opts = resolve_newton(res, &a.newton)?;
    let ladder = res.value("ladder", a.ladder.then_some(true), false)?;
    let mut t = Table::new(galerkin_header(modes));
    if ladder {
        for sol in galerkin::truncation_ladder(&m, k, modes, opts)? {
            t.push(galerkin_row(&sol, modes));
        }
    } else {
        let sys = GalerkinSystem::new(&m, modes, k)?;
        t.push(galerkin_row(&galerkin::solve_from_closed_form(&sys, opts)?, modes));
    }
    s.note("k", k);
    s.emit(&t, a.out.out.as_deref(), a.out.manifest.as_deref())
}

pub fn galerkin_sweep(s: &mut Session, a: &GalerkinSweepArgs) -> Result<()> {
    let res = &mut s.res;
    let m = resolve_model(res, &a.model)?;
    let vary = res
        .optional("vary", a.vary)?
        .ok_or_else(|| CliError::Config("--vary is required".into()))?;
    let values = resolve_range(res, a.from, a.to, a.points, 41)?;
    let modes = res.value("modes", a.modes, 3)?;
    ensure(modes >= 1, "modes", "at least 1")?;
    let length = res.value("length", a.length, 5.5)?;
    ensure(length > 0.0, "length", "positive")?;
    let opts = resolve_newton(res, &a.newton)?;
    let template = GalerkinSystem::for_length(&m, modes, length)?;
    let rows = galerkin::continuation_sweep(&template, vary.into(), &values, opts)?;
    let mut header = vec![vary.as_str().to_string(), "k".into()];
    header.extend(alpha_columns("alpha", modes));
    header.push("residual".into());
    header.push("branch".into());
    let mut t = Table::new(header);
    for row in &rows {
        let mut cells = vec![num(row.value), num(row.system.k)];
        cells.extend(row.solution.alpha.iter().map(|v| num(*v)));
        cells.push(num(row.solution.residual_norm));
        cells.push(format!("{:?}", row.solution.branch));
        t.push(cells);
    }
    s.emit(&t, a.out.out.as_deref(), a.out.manifest.as_deref())
}

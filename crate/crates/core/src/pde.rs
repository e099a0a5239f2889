//! Finite-volume integration of the one-dimensional system on `[0, L]` with no-flux ends.
//!
//! Cells are centred at `x_i = (i + 1/2) dx`. The cell flux across face `i + 1/2` is
//!
//! ```text
//! J = -D (n_{i+1} - n_i) / dx + chi(n_f, c_f) (c_{i+1} - c_i) / dx
//! ```
//!
//! with face values `n_f`, `c_f` the arithmetic means of the neighbours, and both boundary
//! fluxes are zero. Without growth the scheme therefore conserves `sum(n) dx` up to
//! round-off.

use serde::{Deserialize, Serialize};

use crate::error::{BlowUpKind, Error, Result};
use crate::model::ModelSpec;

/// Negative values below this threshold are treated as a failed (unphysical) run.
pub const NEGATIVITY_THRESHOLD: f64 = -1e-9;
pub const DEFAULT_DX: f64 = 0.05;
pub const DEFAULT_TOL: f64 = 1e-7;
pub const DEFAULT_T_MAX: f64 = 5000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    length: f64,
    nx: usize,
}

impl Grid1D {
    pub const MIN_CELLS: usize = 8;

    pub fn new(length: f64, nx: usize) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "L",
                value: length,
                reason: "domain length must be positive",
            });
        }
        if nx < Self::MIN_CELLS {
            return Err(Error::InvalidParameter {
                name: "nx",
                value: nx as f64,
                reason: "grid needs at least 8 cells",
            });
        }
        Ok(Grid1D { length, nx })
    }

    /// Grid whose spacing is as close as possible to `dx` without exceeding it.
    pub fn with_spacing(length: f64, dx: f64) -> Result<Self> {
        if !(dx > 0.0) {
            return Err(Error::InvalidParameter {
                name: "dx",
                value: dx,
                reason: "grid spacing must be positive",
            });
        }
        let nx = ((length / dx) - 1e-9).ceil().max(1.0) as usize;
        Grid1D::new(length, nx.max(Self::MIN_CELLS))
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn dx(&self) -> f64 {
        self.length / self.nx as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.center(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationState {
    pub grid: Grid1D,
    pub n: Vec<f64>,
    pub c: Vec<f64>,
    pub t: f64,
}

impl SimulationState {
    pub fn total_mass(&self) -> f64 {
        self.n.iter().sum::<f64>() * self.grid.dx()
    }

    /// Mirror image `x -> L - x`.
    pub fn mirrored(&self) -> Self {
        let rev = |v: &[f64]| v.iter().rev().copied().collect();
        SimulationState {
            grid: self.grid,
            n: rev(&self.n),
            c: rev(&self.c),
            t: self.t,
        }
    }

    fn check(&self) -> Result<()> {
        for (i, (&n, &c)) in self.n.iter().zip(&self.c).enumerate() {
            let kind = if !n.is_finite() || !c.is_finite() {
                BlowUpKind::NonFinite
            } else if n < NEGATIVITY_THRESHOLD || c < NEGATIVITY_THRESHOLD {
                BlowUpKind::Negative
            } else {
                continue;
            };
            return Err(Error::BlowUp {
                time: self.t,
                x: self.grid.center(i),
                kind,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InitialCondition {
    /// `n = 1` on `[0, 2]`, zero elsewhere; `c = 0`.
    FrontSeed,
    /// Homogeneous `(n, c)` plus `n = level` on a window of width 2 around `center`
    /// (the domain midpoint when `None`).
    HomogeneousPlusStimulus {
        n: f64,
        c: f64,
        level: f64,
        center: Option<f64>,
    },
    Homogeneous {
        n: f64,
        c: f64,
    },
    Custom {
        n: Vec<f64>,
        c: Vec<f64>,
    },
}

impl InitialCondition {
    /// Unit state with the usual `n = 1.1` stimulus.
    pub fn stimulus_at(center: Option<f64>) -> Self {
        InitialCondition::HomogeneousPlusStimulus {
            n: 1.0,
            c: 1.0,
            level: 1.1,
            center,
        }
    }

    pub fn build(&self, grid: Grid1D) -> Result<SimulationState> {
        let x = grid.centers();
        let (n, c) = match self {
            InitialCondition::FrontSeed => (
                x.iter().map(|&x| if x <= 2.0 { 1.0 } else { 0.0 }).collect(),
                vec![0.0; grid.nx()],
            ),
            InitialCondition::HomogeneousPlusStimulus {
                n,
                c,
                level,
                center,
            } => {
                let mid = center.unwrap_or(0.5 * grid.length());
                (
                    x.iter()
                        .map(|&x| if (x - mid).abs() < 1.0 { *level } else { *n })
                        .collect(),
                    vec![*c; grid.nx()],
                )
            }
            InitialCondition::Homogeneous { n, c } => (vec![*n; grid.nx()], vec![*c; grid.nx()]),
            InitialCondition::Custom { n, c } => {
                if n.len() != grid.nx() || c.len() != grid.nx() {
                    return Err(Error::GridMismatch);
                }
                (n.clone(), c.clone())
            }
        };
        Ok(SimulationState {
            grid,
            n,
            c,
            t: 0.0,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Forward Euler for every term.
    Explicit,
    /// Backward Euler for diffusion and chemical decay, forward Euler for chemotaxis and growth.
    SemiImplicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeStepping {
    pub scheme: Scheme,
    pub dt: f64,
}

impl TimeStepping {
    /// `dt = 0.2 dx^2 / max(D, 1)`.
    pub fn explicit(grid: &Grid1D, m: &ModelSpec) -> Self {
        TimeStepping {
            scheme: Scheme::Explicit,
            dt: 0.2 * grid.dx().powi(2) / m.d.max(1.0),
        }
    }

    /// Step limited by the chemotactic advection only.
    pub fn semi_implicit(grid: &Grid1D) -> Self {
        TimeStepping {
            scheme: Scheme::SemiImplicit,
            dt: (0.4 * grid.dx()).min(0.05),
        }
    }
}

/// Right-hand side `(dn/dt, dc/dt)` of the semi-discrete system.
pub fn rhs(state: &SimulationState, m: &ModelSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut dn = vec![0.0; state.grid.nx()];
    let mut dc = vec![0.0; state.grid.nx()];
    transport(state, m, true, &mut dn, &mut dc)?;
    Ok((dn, dc))
}

/// Accumulates the spatial terms into `dn`, `dc`. With `with_diffusion = false` only the
/// chemotaxis, growth and chemical production terms are added (decay is then implicit).
fn transport(
    s: &SimulationState,
    m: &ModelSpec,
    with_diffusion: bool,
    dn: &mut [f64],
    dc: &mut [f64],
) -> Result<()> {
    let nx = s.grid.nx();
    let inv_dx = 1.0 / s.grid.dx();
    let (n, c) = (&s.n, &s.c);
    for face in 0..nx - 1 {
        let (l, r) = (face, face + 1);
        let grad_c = (c[r] - c[l]) * inv_dx;
        let chi = m.chi_at(0.5 * (n[l] + n[r]), 0.5 * (c[l] + c[r]))?;
        let mut flux = chi * grad_c;
        if with_diffusion {
            flux -= m.d * (n[r] - n[l]) * inv_dx;
            let flux_c = -grad_c;
            dc[l] -= flux_c * inv_dx;
            dc[r] += flux_c * inv_dx;
        }
        dn[l] -= flux * inv_dx;
        dn[r] += flux * inv_dx;
    }
    for i in 0..nx {
        let (f, g) = m.kinetics_at(n[i], c[i]);
        dn[i] += f;
        dc[i] += if with_diffusion { g } else { n[i] };
    }
    Ok(())
}

/// Pre-factored `(a I - b Laplacian)` with Neumann ends.
///
/// Elimination runs inward from both walls and meets in the middle. The matrix is
/// mirror-symmetric, so the two sweeps perform identical floating-point operations and
/// a mirrored right-hand side yields an exactly mirrored solution.
#[derive(Debug, Clone)]
struct NeumannSolve {
    off: f64,
    diag: Vec<f64>,
    // pivots and normalised couplings toward the middle
    pivot: Vec<f64>,
    coupling: Vec<f64>,
}

impl NeumannSolve {
    fn new(nx: usize, a: f64, b: f64) -> Self {
        let off = -b;
        let diag: Vec<f64> = (0..nx)
            .map(|i| {
                let neighbours = if i == 0 || i == nx - 1 { 1.0 } else { 2.0 };
                a + b * neighbours
            })
            .collect();
        let half = nx / 2;
        let mut pivot = vec![0.0; nx];
        let mut coupling = vec![0.0; nx];
        for i in 0..half {
            let outer = if i == 0 { 0.0 } else { coupling[i - 1] };
            pivot[i] = diag[i] - off * outer;
            coupling[i] = off / pivot[i];
            let j = nx - 1 - i;
            let outer = if i == 0 { 0.0 } else { coupling[j + 1] };
            pivot[j] = diag[j] - off * outer;
            coupling[j] = off / pivot[j];
        }
        NeumannSolve {
            off,
            diag,
            pivot,
            coupling,
        }
    }

    fn solve(&self, rhs: &mut [f64]) {
        let nx = rhs.len();
        let half = nx / 2;
        let off = self.off;
        for i in 0..half {
            let j = nx - 1 - i;
            if i == 0 {
                rhs[i] /= self.pivot[i];
                rhs[j] /= self.pivot[j];
            } else {
                rhs[i] = (rhs[i] - off * rhs[i - 1]) / self.pivot[i];
                rhs[j] = (rhs[j] - off * rhs[j + 1]) / self.pivot[j];
            }
        }
        // each side now reads x_i + coupling_i x_(inner neighbour) = rhs_i
        if nx % 2 == 1 {
            let m = half;
            let (l, r) = (m - 1, m + 1);
            rhs[m] = (rhs[m] - off * (rhs[l] + rhs[r]))
                / (self.diag[m] - off * (self.coupling[l] + self.coupling[r]));
        } else {
            let (l, r) = (half - 1, half);
            let det = 1.0 - self.coupling[l] * self.coupling[r];
            let (yl, yr) = (rhs[l], rhs[r]);
            rhs[l] = (yl - self.coupling[l] * yr) / det;
            rhs[r] = (yr - self.coupling[r] * yl) / det;
        }
        let inner_start = if nx % 2 == 1 { half } else { half - 1 };
        for i in (0..inner_start).rev() {
            let j = nx - 1 - i;
            rhs[i] -= self.coupling[i] * rhs[i + 1];
            rhs[j] -= self.coupling[j] * rhs[j - 1];
        }
    }
}

/// Advances states of one model on one grid, caching the implicit factorizations.
#[derive(Debug, Clone)]
pub struct Stepper {
    model: ModelSpec,
    grid: Grid1D,
    scheme: Scheme,
    implicit: Option<(f64, NeumannSolve, NeumannSolve)>,
    dn: Vec<f64>,
    dc: Vec<f64>,
}

impl Stepper {
    pub fn new(model: ModelSpec, grid: Grid1D, scheme: Scheme) -> Self {
        Stepper {
            model,
            grid,
            scheme,
            implicit: None,
            dn: vec![0.0; grid.nx()],
            dc: vec![0.0; grid.nx()],
        }
    }

    pub fn step(&mut self, state: &mut SimulationState, dt: f64) -> Result<()> {
        if state.grid != self.grid {
            return Err(Error::GridMismatch);
        }
        self.dn.iter_mut().for_each(|v| *v = 0.0);
        self.dc.iter_mut().for_each(|v| *v = 0.0);
        match self.scheme {
            Scheme::Explicit => {
                transport(state, &self.model, true, &mut self.dn, &mut self.dc)?;
                for i in 0..self.grid.nx() {
                    state.n[i] += dt * self.dn[i];
                    state.c[i] += dt * self.dc[i];
                }
            }
            Scheme::SemiImplicit => {
                transport(state, &self.model, false, &mut self.dn, &mut self.dc)?;
                for i in 0..state.n.len() {
                    state.n[i] += dt * self.dn[i];
                    state.c[i] += dt * self.dc[i];
                }
                let (solve_n, solve_c) = self.factors(dt);
                solve_n.solve(&mut state.n);
                solve_c.solve(&mut state.c);
            }
        }
        state.t += dt;
        state.check()
    }

    fn factors(&mut self, dt: f64) -> (&NeumannSolve, &NeumannSolve) {
        let stale = !matches!(self.implicit, Some((cached, _, _)) if cached == dt);
        if stale {
            let nx = self.grid.nx();
            let b = dt / self.grid.dx().powi(2);
            self.implicit = Some((
                dt,
                NeumannSolve::new(nx, 1.0, self.model.d * b),
                NeumannSolve::new(nx, 1.0 + dt, b),
            ));
        }
        let (_, solve_n, solve_c) = self.implicit.as_ref().unwrap();
        (solve_n, solve_c)
    }

    /// Integrates up to exactly `t_end`, shortening steps so the last one lands on it.
    pub fn advance_to(&mut self, state: &mut SimulationState, t_end: f64, dt: f64) -> Result<()> {
        let span = t_end - state.t;
        if span <= 0.0 {
            return Ok(());
        }
        let steps = (span / dt - 1e-9).ceil().max(1.0) as usize;
        let h = span / steps as f64;
        for _ in 0..steps {
            self.step(state, h)?;
        }
        state.t = t_end;
        Ok(())
    }
}

/// One step of size `dt`.
pub fn step(state: &SimulationState, m: &ModelSpec, dt: f64, scheme: Scheme) -> Result<SimulationState> {
    let mut next = state.clone();
    Stepper::new(*m, state.grid, scheme).step(&mut next, dt)?;
    Ok(next)
}

/// Snapshots of a run. When integration fails the snapshots taken so far are kept.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub snapshots: Vec<SimulationState>,
    pub failure: Option<Error>,
}

impl Trajectory {
    pub fn into_result(self) -> Result<Vec<SimulationState>> {
        match self.failure {
            Some(err) => Err(err),
            None => Ok(self.snapshots),
        }
    }
}

/// Integrates from `ic` and records the state at each requested time (`t_end` is always
/// recorded last).
pub fn run(
    ic: &InitialCondition,
    m: &ModelSpec,
    grid: Grid1D,
    stepping: TimeStepping,
    t_end: f64,
    snapshot_times: &[f64],
) -> Result<Trajectory> {
    if !(t_end > 0.0) {
        return Err(Error::InvalidParameter {
            name: "t_end",
            value: t_end,
            reason: "must be positive",
        });
    }
    m.validate()?;
    let mut times: Vec<f64> = snapshot_times
        .iter()
        .copied()
        .filter(|&t| (0.0..t_end).contains(&t))
        .collect();
    times.push(t_end);
    times.sort_by(f64::total_cmp);
    times.dedup();

    let mut state = ic.build(grid)?;
    let mut stepper = Stepper::new(*m, grid, stepping.scheme);
    let mut snapshots = Vec::with_capacity(times.len());
    for t in times {
        if let Err(err) = stepper.advance_to(&mut state, t, stepping.dt) {
            return Ok(Trajectory {
                snapshots,
                failure: Some(err),
            });
        }
        snapshots.push(state.clone());
    }
    Ok(Trajectory {
        snapshots,
        failure: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryCriterion {
    /// Threshold on `max |n(t + interval) - n(t)| / interval`.
    pub tol: f64,
    pub interval: f64,
    pub t_max: f64,
}

impl Default for StationaryCriterion {
    fn default() -> Self {
        StationaryCriterion {
            tol: DEFAULT_TOL,
            interval: 1.0,
            t_max: DEFAULT_T_MAX,
        }
    }
}

/// Integrates until the cell density stops changing or `t_max` is reached.
/// Returns the final state and whether the stationarity criterion was met.
pub fn run_to_stationary(
    ic: &InitialCondition,
    m: &ModelSpec,
    grid: Grid1D,
    stepping: TimeStepping,
    criterion: StationaryCriterion,
) -> Result<(SimulationState, bool)> {
    if !(criterion.tol > 0.0 && criterion.interval > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: criterion.tol,
            reason: "tolerance and reporting interval must be positive",
        });
    }
    m.validate()?;
    let mut state = ic.build(grid)?;
    let mut stepper = Stepper::new(*m, grid, stepping.scheme);
    let mut previous = state.n.clone();
    while state.t < criterion.t_max {
        let target = (state.t + criterion.interval).min(criterion.t_max);
        let span = target - state.t;
        stepper.advance_to(&mut state, target, stepping.dt)?;
        let rate = state
            .n
            .iter()
            .zip(&previous)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
            / span;
        if rate < criterion.tol {
            return Ok((state, true));
        }
        previous.copy_from_slice(&state.n);
    }
    Ok((state, false))
}

/// Grid, time stepping and stopping rule for a run to stationarity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationSettings {
    pub dx: f64,
    pub scheme: Scheme,
    /// Scheme default when `None`.
    pub dt: Option<f64>,
    pub criterion: StationaryCriterion,
}

impl Default for SimulationSettings {
    fn default() -> Self {
        SimulationSettings {
            dx: DEFAULT_DX,
            scheme: Scheme::Explicit,
            dt: None,
            criterion: StationaryCriterion::default(),
        }
    }
}

impl SimulationSettings {
    pub fn semi_implicit() -> Self {
        SimulationSettings {
            scheme: Scheme::SemiImplicit,
            ..Default::default()
        }
    }

    pub fn stepping(&self, grid: &Grid1D, m: &ModelSpec) -> TimeStepping {
        let default = match self.scheme {
            Scheme::Explicit => TimeStepping::explicit(grid, m),
            Scheme::SemiImplicit => TimeStepping::semi_implicit(grid),
        };
        TimeStepping {
            dt: self.dt.unwrap_or(default.dt),
            ..default
        }
    }
}

/// Runs `ic` on a domain of the given length to stationarity.
pub fn simulate_stationary(
    m: &ModelSpec,
    length: f64,
    ic: &InitialCondition,
    settings: &SimulationSettings,
) -> Result<(SimulationState, bool)> {
    let grid = Grid1D::with_spacing(length, settings.dx)?;
    run_to_stationary(ic, m, grid, settings.stepping(&grid, m), settings.criterion)
}

/// Rightmost position where `n` drops through `level`, by linear interpolation.
pub fn front_position(state: &SimulationState, level: f64) -> Result<f64> {
    let n = &state.n;
    (0..n.len() - 1)
        .rev()
        .find(|&i| n[i] >= level && n[i + 1] < level)
        .map(|i| {
            let (x0, x1) = (state.grid.center(i), state.grid.center(i + 1));
            x0 + (n[i] - level) / (n[i] - n[i + 1]) * (x1 - x0)
        })
        .ok_or(Error::NoCrossing {
            level,
            time: state.t,
        })
}

/// Least-squares slope of front position against time.
pub fn front_speed(states: &[SimulationState], level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParameter {
            name: "level",
            value: level,
            reason: "must lie in (0, 1)",
        });
    }
    if states.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "snapshots",
            value: states.len() as f64,
            reason: "need at least two snapshots",
        });
    }
    let points = states
        .iter()
        .map(|s| Ok((s.t, front_position(s, level)?)))
        .collect::<Result<Vec<_>>>()?;
    let count = points.len() as f64;
    let t_mean = points.iter().map(|p| p.0).sum::<f64>() / count;
    let x_mean = points.iter().map(|p| p.1).sum::<f64>() / count;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(t, x) in &points {
        sxy += (t - t_mean) * (x - x_mean);
        sxx += (t - t_mean) * (t - t_mean);
    }
    if sxx == 0.0 {
        return Err(Error::Degenerate("snapshots share a single time"));
    }
    Ok(sxy / sxx)
}

//! Cosine-series analysis of profiles on `[0, L]`:
//! `n(x) = sum_i alpha_i cos(i pi x / L)`, with
//! `alpha_0 = (1/L) int n dx` and `alpha_i = (2/L) int n cos(i pi x / L) dx`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::optim;
use crate::pde::{self, Grid1D, InitialCondition, SimulationSettings};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Layout {
    /// Samples at `(i + 1/2) dx`, as produced by the finite-volume solver.
    CellCentered,
    /// Samples at `i dx` including both ends.
    Nodes,
}

/// Uniform sampling of `[0, L]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub length: f64,
    pub count: usize,
    pub layout: Layout,
}

impl SampleGrid {
    pub fn positions(&self) -> Vec<f64> {
        let n = self.count;
        match self.layout {
            Layout::CellCentered => {
                let dx = self.length / n as f64;
                (0..n).map(|i| (i as f64 + 0.5) * dx).collect()
            }
            Layout::Nodes => {
                let dx = self.length / (n - 1) as f64;
                (0..n).map(|i| i as f64 * dx).collect()
            }
        }
    }

    /// Composite trapezoid weights. On cell centres the no-flux (even) reflection at both
    /// walls closes the rule, which leaves every weight equal to `dx`.
    pub fn weights(&self) -> Vec<f64> {
        let n = self.count;
        match self.layout {
            Layout::CellCentered => vec![self.length / n as f64; n],
            Layout::Nodes => {
                let dx = self.length / (n - 1) as f64;
                let mut w = vec![dx; n];
                w[0] = 0.5 * dx;
                w[n - 1] = 0.5 * dx;
                w
            }
        }
    }

    /// Infers the layout from sample positions; they must be uniform.
    pub fn from_positions(x: &[f64]) -> Result<Self> {
        let invalid = |reason| Error::InvalidParameter {
            name: "x",
            value: x.len() as f64,
            reason,
        };
        if x.len() < 2 {
            return Err(invalid("need at least two samples"));
        }
        let dx = x[1] - x[0];
        if !(dx > 0.0) || x.windows(2).any(|w| ((w[1] - w[0]) - dx).abs() > 1e-6 * dx.max(1.0)) {
            return Err(invalid("samples must be uniformly spaced and increasing"));
        }
        if x[0].abs() <= 1e-9 * dx.max(1.0) {
            Ok(SampleGrid {
                length: x[x.len() - 1],
                count: x.len(),
                layout: Layout::Nodes,
            })
        } else if (x[0] - 0.5 * dx).abs() <= 1e-6 * dx {
            Ok(SampleGrid {
                length: dx * x.len() as f64,
                count: x.len(),
                layout: Layout::CellCentered,
            })
        } else {
            Err(invalid("first sample must sit at 0 (nodes) or dx/2 (cell centres)"))
        }
    }
}

impl From<Grid1D> for SampleGrid {
    fn from(g: Grid1D) -> Self {
        SampleGrid {
            length: g.length(),
            count: g.nx(),
            layout: Layout::CellCentered,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub grid: SampleGrid,
    pub values: Vec<f64>,
}

impl Profile {
    pub fn new(grid: SampleGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.count {
            return Err(Error::GridMismatch);
        }
        Ok(Profile { grid, values })
    }

    pub fn from_fn(grid: SampleGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.positions().into_iter().map(f).collect();
        Profile { grid, values }
    }

    pub fn cells(state: &pde::SimulationState) -> Self {
        Profile {
            grid: state.grid.into(),
            values: state.n.clone(),
        }
    }

    pub fn integral(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v)
            .sum()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn amplitude(&self) -> f64 {
        let max = self.values.iter().copied().fold(f64::MIN, f64::max);
        let min = self.values.iter().copied().fold(f64::MAX, f64::min);
        max - min
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSeries {
    pub length: f64,
    /// `alpha_0 ..= alpha_M`.
    pub alpha: Vec<f64>,
    pub beta: Option<Vec<f64>>,
}

impl SpectralSeries {
    pub fn order(&self) -> usize {
        self.alpha.len() - 1
    }

    /// `kappa = pi / L`.
    pub fn kappa(&self) -> f64 {
        PI / self.length
    }

    pub fn eval(&self, x: f64) -> f64 {
        let kappa = self.kappa();
        self.alpha
            .iter()
            .enumerate()
            .map(|(i, a)| a * (i as f64 * kappa * x).cos())
            .sum()
    }
}

/// Cosine coefficients `alpha_0 ..= alpha_modes` by quadrature of the sampled profile.
pub fn decompose(profile: &Profile, modes: usize) -> Result<SpectralSeries> {
    let nx = profile.grid.count;
    let needed = 4 * modes;
    if nx < needed {
        return Err(Error::Aliasing { nx, modes, needed });
    }
    Ok(SpectralSeries {
        length: profile.grid.length,
        alpha: cosine_coefficients(profile, modes),
        beta: None,
    })
}

/// Decomposes both fields of a solver state.
pub fn decompose_state(state: &pde::SimulationState, modes: usize) -> Result<SpectralSeries> {
    let mut series = decompose(&Profile::cells(state), modes)?;
    let c = Profile {
        grid: state.grid.into(),
        values: state.c.clone(),
    };
    series.beta = Some(cosine_coefficients(&c, modes));
    Ok(series)
}

fn cosine_coefficients(profile: &Profile, modes: usize) -> Vec<f64> {
    let length = profile.grid.length;
    let x = profile.grid.positions();
    let w = profile.grid.weights();
    (0..=modes)
        .map(|i| {
            let kappa = i as f64 * PI / length;
            let scale = if i == 0 { 1.0 } else { 2.0 } / length;
            scale
                * x.iter()
                    .zip(&w)
                    .zip(&profile.values)
                    .map(|((&x, &w), &v)| w * v * (kappa * x).cos())
                    .sum::<f64>()
        })
        .collect()
}

/// Evaluates the truncated series on `grid`.
pub fn reconstruct(series: &SpectralSeries, grid: SampleGrid) -> Profile {
    Profile::from_fn(grid, |x| series.eval(x))
}

/// `I = int (p1 - p2)^2 dx` with the grid's quadrature.
pub fn discrepancy(p1: &Profile, p2: &Profile) -> Result<f64> {
    if p1.grid != p2.grid {
        return Err(Error::GridMismatch);
    }
    Ok(p1
        .grid
        .weights()
        .iter()
        .zip(p1.values.iter().zip(&p2.values))
        .map(|(w, (a, b))| w * (a - b) * (a - b))
        .sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub length: f64,
    pub alpha: Vec<f64>,
    pub converged: bool,
    /// Solver failure for this length, if any; `alpha` is empty then.
    pub failure: Option<String>,
}

/// Initial condition used for the length sweep: the unit state with the stimulus against
/// the left wall, so that the pattern is not pinned to mirror-symmetric modes.
pub fn sweep_initial_condition() -> InitialCondition {
    InitialCondition::stimulus_at(Some(1.0))
}

/// Simulates each domain length to stationarity and decomposes the cell density.
pub fn domain_sweep(
    m: &ModelSpec,
    lengths: &[f64],
    modes: usize,
    settings: &SimulationSettings,
) -> Vec<SweepRow> {
    let ic = sweep_initial_condition();
    let one = |&length: &f64| -> SweepRow {
        // short domains get a finer grid so that every requested mode stays resolved
        let settings = SimulationSettings {
            dx: settings.dx.min(length / (4 * modes).max(Grid1D::MIN_CELLS) as f64),
            ..*settings
        };
        let outcome = pde::simulate_stationary(m, length, &ic, &settings).and_then(|(state, ok)| {
            let series = decompose(&Profile::cells(&state), modes)?;
            Ok((series.alpha, ok))
        });
        match outcome {
            Ok((alpha, converged)) => SweepRow {
                length,
                alpha,
                converged,
                failure: None,
            },
            Err(err) => SweepRow {
                length,
                alpha: Vec::new(),
                converged: false,
                failure: Some(err.to_string()),
            },
        }
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        lengths.par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        lengths.iter().map(one).collect()
    }
}

/// Evenly spaced lengths from `start` to `end` inclusive.
pub fn length_range(start: f64, end: f64, step: f64) -> Vec<f64> {
    let count = ((end - start) / step + 1e-9).floor() as usize;
    (0..=count).map(|i| start + i as f64 * step).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicLength {
    /// Length maximising `|alpha_i|`, divided by `i`.
    pub lambda0: f64,
    pub alpha_max: f64,
}

impl CharacteristicLength {
    /// `A = 2 alpha_max`.
    pub fn amplitude(&self) -> f64 {
        2.0 * self.alpha_max
    }
}

/// Locates the bump of `|alpha_mode|` over a length sweep, refining the discrete maximum
/// with a parabola through its neighbours.
pub fn characteristic_length(rows: &[SweepRow], mode: usize) -> Result<CharacteristicLength> {
    if mode == 0 {
        return Err(Error::InvalidParameter {
            name: "mode",
            value: 0.0,
            reason: "characteristic length needs a non-constant mode",
        });
    }
    let samples: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.alpha.len() > mode)
        .map(|r| (r.length, r.alpha[mode].abs()))
        .collect();
    let best = samples
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .ok_or(Error::NoInteriorMaximum { mode })?;
    if best == 0 || best + 1 == samples.len() || samples[best].1 == 0.0 {
        return Err(Error::NoInteriorMaximum { mode });
    }
    let (left, mid, right) = (samples[best - 1], samples[best], samples[best + 1]);
    let uniform = ((mid.0 - left.0) - (right.0 - mid.0)).abs() < 1e-9;
    let (l_star, alpha_max) = if uniform {
        optim::parabolic_peak(mid.0, mid.0 - left.0, left.1, mid.1, right.1)
    } else {
        mid
    };
    Ok(CharacteristicLength {
        lambda0: l_star / mode as f64,
        alpha_max,
    })
}

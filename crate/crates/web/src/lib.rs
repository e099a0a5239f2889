//! WebAssembly bindings behind `www/index.html`.
//!
//! Errors cross the boundary as plain strings so everything here also runs natively.

use std::f64::consts::PI;

use chemotaxis::galerkin::{self, GalerkinSystem, NewtonOptions};
use chemotaxis::pde::{Grid1D, InitialCondition, SimulationState, Stepper, TimeStepping};
use chemotaxis::{stability, ModelSpec};
use wasm_bindgen::prelude::*;

fn model(d: f64, chi0: f64, r: f64) -> Result<ModelSpec, String> {
    let m = ModelSpec::m3(d, chi0, r);
    m.validate().map_err(|e| e.to_string())?;
    Ok(m)
}

/// Linear stability summary of the homogeneous state. Absent quantities are `NaN`.
#[wasm_bindgen]
#[derive(Debug, Clone, Copy)]
pub struct Stability {
    pub rt: f64,
    pub band_lo: f64,
    pub band_hi: f64,
    pub lambda_explicit: f64,
    pub lambda_implicit: f64,
    turing: bool,
}

#[wasm_bindgen]
impl Stability {
    #[wasm_bindgen(getter)]
    pub fn turing(&self) -> bool {
        self.turing
    }
}

#[wasm_bindgen]
pub fn stability(d: f64, chi0: f64, r: f64) -> Result<Stability, String> {
    let rep = stability::report(&model(d, chi0, r)?).map_err(|e| e.to_string())?;
    let (lo, hi) = rep.band.map_or((f64::NAN, f64::NAN), |(a, b)| (a.sqrt(), b.sqrt()));
    Ok(Stability {
        rt: rep.rt,
        band_lo: lo,
        band_hi: hi,
        lambda_explicit: rep.lambda_explicit.unwrap_or(f64::NAN),
        lambda_implicit: rep.lambda_implicit.unwrap_or(f64::NAN),
        turing: rep.class == stability::PatternClass::TuringUnstable,
    })
}

/// Growth rate of the leading eigenvalue at `points` wavenumbers evenly spaced on `[0, q_max]`.
#[wasm_bindgen]
pub fn dispersion_curve(d: f64, chi0: f64, r: f64, q_max: f64, points: usize) -> Result<Vec<f64>, String> {
    if points < 2 || !(q_max > 0.0) {
        return Err("need at least 2 points and q_max > 0".into());
    }
    let disp = stability::Dispersion::of(&model(d, chi0, r)?).map_err(|e| e.to_string())?;
    Ok((0..points)
        .map(|i| {
            let q = q_max * i as f64 / (points - 1) as f64;
            disp.growth_rate(q * q)
        })
        .collect())
}

/// Stationary cell density of the `modes`-term cosine truncation on `[0, length]`,
/// sampled at `points` evenly spaced positions. The spike sits at `x = 0`.
#[wasm_bindgen]
pub fn galerkin_profile(
    d: f64,
    chi0: f64,
    r: f64,
    modes: usize,
    length: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    if modes == 0 || points < 2 || !(length > 0.0) {
        return Err("need modes >= 1, points >= 2 and length > 0".into());
    }
    let m = model(d, chi0, r)?;
    let sys = GalerkinSystem::for_length(&m, modes, length).map_err(|e| e.to_string())?;
    let sol = galerkin::solve_from_closed_form(&sys, NewtonOptions::default())
        .map_err(|e| e.to_string())?
        .positive(&sys);
    let kappa = PI / length;
    Ok((0..points)
        .map(|i| {
            let x = length * i as f64 / (points - 1) as f64;
            sol.alpha
                .iter()
                .enumerate()
                .map(|(j, a)| a * (j as f64 * kappa * x).cos())
                .sum()
        })
        .collect())
}

/// Live semi-implicit simulation started from the unit state with a central stimulus.
#[wasm_bindgen]
pub struct Simulation {
    stepper: Stepper,
    state: SimulationState,
    dt: f64,
}

#[wasm_bindgen]
impl Simulation {
    #[wasm_bindgen(constructor)]
    pub fn new(d: f64, chi0: f64, r: f64, length: f64, nx: usize) -> Result<Simulation, String> {
        let m = model(d, chi0, r)?;
        let grid = Grid1D::new(length, nx).map_err(|e| e.to_string())?;
        let state = InitialCondition::stimulus_at(None)
            .build(grid)
            .map_err(|e| e.to_string())?;
        let stepping = TimeStepping::semi_implicit(&grid);
        Ok(Simulation {
            stepper: Stepper::new(m, grid, stepping.scheme),
            state,
            dt: stepping.dt,
        })
    }

    /// Advances by `steps` time steps; on blow-up the state is left where it failed.
    pub fn advance(&mut self, steps: usize) -> Result<(), String> {
        for _ in 0..steps {
            self.stepper.step(&mut self.state, self.dt).map_err(|e| e.to_string())?;
        }
        Ok(())
    }

    #[wasm_bindgen(getter)]
    pub fn time(&self) -> f64 {
        self.state.t
    }

    #[wasm_bindgen(getter)]
    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn positions(&self) -> Vec<f64> {
        self.state.grid.centers()
    }

    pub fn density(&self) -> Vec<f64> {
        self.state.n.clone()
    }

    pub fn chemical(&self) -> Vec<f64> {
        self.state.c.clone()
    }
}

//! Truncated cosine-series (Galerkin) solution of the stationary M3 system.
//!
//! Substituting `n = sum alpha_i cos(i k x)` and `c = sum beta_i cos(i k x)` into the
//! stationary equations and collecting the coefficient of each `cos(j k x)` gives
//! `M + 1` algebraic equations. The chemical equation is linear and yields
//! `beta_i = alpha_i / (1 + (i k)^2)`, which leaves a closed system in `alpha`.
//!
//! Products are expanded with `cos a cos b = (cos(a + b) + cos(a - b)) / 2` and
//! `cos a sin b = (sin(a + b) - sin(a - b)) / 2`; generated modes above `M` are dropped.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelSpec, Variant};
use crate::optim;
use crate::stability;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 100;
/// Modes below this magnitude count as absent when classifying a solution.
pub const HOMOGENEOUS_THRESHOLD: f64 = 1e-10;

/// Weight of `a_i b_m` in the `cos(j k x)` coefficient of `(sum a_i cos)(sum b_m cos)`.
fn quadratic_weight(j: usize, i: usize, m: usize) -> f64 {
    let mut w = 0.0;
    if i + m == j {
        w += 0.5;
    }
    if i.abs_diff(m) == j {
        w += 0.5;
    }
    w
}

/// Weight of `a_i b_m` in the `cos(j k x)` coefficient of
/// `d/dx [(sum a_i cos(i k x)) (sum m k b_m sin(m k x))]`, divided by `k^2`.
fn chemotaxis_weight(j: usize, i: usize, m: usize) -> f64 {
    let (i_f, m_f) = (i as f64, m as f64);
    let mut w = 0.0;
    if i + m == j {
        w += 0.5 * m_f * (i_f + m_f);
    }
    if i.abs_diff(m) == j {
        w += 0.5 * m_f * (m_f - i_f);
    }
    w
}

/// Coefficient of `cos(j k x)` in the product of two cosine series.
pub fn project_quadratic(a: &[f64], b: &[f64], j: usize) -> f64 {
    let mut sum = 0.0;
    for (i, &ai) in a.iter().enumerate() {
        for (m, &bm) in b.iter().enumerate() {
            sum += quadratic_weight(j, i, m) * ai * bm;
        }
    }
    sum
}

/// Coefficient of `cos(j k x)` in `d/dx [n c_x']` where `c_x' = sum m k beta_m sin(m k x)`,
/// divided by `k^2`. The caller multiplies by `chi0 k^2`.
pub fn project_chemotaxis(alpha: &[f64], beta: &[f64], j: usize) -> f64 {
    let mut sum = 0.0;
    for (i, &ai) in alpha.iter().enumerate() {
        for (m, &bm) in beta.iter().enumerate() {
            sum += chemotaxis_weight(j, i, m) * ai * bm;
        }
    }
    sum
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GalerkinSystem {
    /// Truncation order `M`.
    pub modes: usize,
    /// Base wavenumber `pi / L`.
    pub k: f64,
    pub d: f64,
    pub chi0: f64,
    pub r: f64,
}

impl GalerkinSystem {
    pub fn new(m: &ModelSpec, modes: usize, k: f64) -> Result<Self> {
        if m.variant != Variant::M3 {
            return Err(Error::Regime("the coefficient system is derived for variant M3"));
        }
        m.validate()?;
        if !(m.r > 0.0) {
            return Err(Error::Degenerate("the coefficient system needs r > 0"));
        }
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "k",
                value: k,
                reason: "base wavenumber must be positive",
            });
        }
        Ok(GalerkinSystem {
            modes,
            k,
            d: m.d,
            chi0: m.chi0,
            r: m.r,
        })
    }

    pub fn for_length(m: &ModelSpec, modes: usize, length: f64) -> Result<Self> {
        Self::new(m, modes, PI / length)
    }

    pub fn length(&self) -> f64 {
        PI / self.k
    }

    pub fn with_modes(self, modes: usize) -> Self {
        GalerkinSystem { modes, ..self }
    }

    pub fn model(&self) -> ModelSpec {
        ModelSpec::m3(self.d, self.chi0, self.r)
    }

    /// `beta_i = alpha_i / (1 + (i k)^2)`.
    pub fn beta(&self, alpha: &[f64]) -> Vec<f64> {
        alpha
            .iter()
            .enumerate()
            .map(|(i, a)| a / self.chemical_factor(i))
            .collect()
    }

    fn chemical_factor(&self, i: usize) -> f64 {
        1.0 + (i as f64 * self.k).powi(2)
    }

    /// Mode-wise stationary equations. Component 0 is the mean equation divided by `r`.
    pub fn residual(&self, alpha: &[f64]) -> Vec<f64> {
        debug_assert_eq!(alpha.len(), self.modes + 1);
        let beta = self.beta(alpha);
        let k_sq = self.k * self.k;
        (0..=self.modes)
            .map(|j| {
                let logistic = alpha[j] - project_quadratic(alpha, alpha, j);
                if j == 0 {
                    logistic
                } else {
                    let jf = j as f64;
                    -self.d * jf * jf * k_sq * alpha[j]
                        + self.chi0 * k_sq * project_chemotaxis(alpha, &beta, j)
                        + self.r * logistic
                }
            })
            .collect()
    }

    /// Analytic Jacobian of [`residual`](Self::residual).
    pub fn jacobian(&self, alpha: &[f64]) -> DMatrix<f64> {
        let size = self.modes + 1;
        let beta = self.beta(alpha);
        let k_sq = self.k * self.k;
        DMatrix::from_fn(size, size, |j, p| {
            let d_quad: f64 = (0..size)
                .map(|m| 2.0 * quadratic_weight(j, p, m) * alpha[m])
                .sum();
            let d_logistic = if j == p { 1.0 } else { 0.0 } - d_quad;
            if j == 0 {
                return d_logistic;
            }
            let d_chem: f64 = (0..size)
                .map(|m| {
                    chemotaxis_weight(j, p, m) * beta[m]
                        + chemotaxis_weight(j, m, p) * alpha[m] / self.chemical_factor(p)
                })
                .sum();
            let diffusion = if j == p {
                -self.d * (j * j) as f64 * k_sq
            } else {
                0.0
            };
            diffusion + self.chi0 * k_sq * d_chem + self.r * d_logistic
        })
    }

    /// Central-difference Jacobian, kept as a check on the analytic one.
    pub fn jacobian_fd(&self, alpha: &[f64], h: f64) -> DMatrix<f64> {
        let size = self.modes + 1;
        let mut jac = DMatrix::zeros(size, size);
        let mut probe = alpha.to_vec();
        for p in 0..size {
            probe[p] = alpha[p] + h;
            let up = self.residual(&probe);
            probe[p] = alpha[p] - h;
            let down = self.residual(&probe);
            probe[p] = alpha[p];
            for j in 0..size {
                jac[(j, p)] = (up[j] - down[j]) / (2.0 * h);
            }
        }
        jac
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `n = c = 0`.
    Homogeneous0,
    /// `n = c = 1`.
    Homogeneous1,
    PatternPlus,
    PatternMinus,
}

impl Branch {
    pub fn is_pattern(self) -> bool {
        matches!(self, Branch::PatternPlus | Branch::PatternMinus)
    }

    fn classify(alpha: &[f64]) -> Self {
        if alpha[1..].iter().all(|a| a.abs() < HOMOGENEOUS_THRESHOLD) {
            if alpha[0] > 0.5 {
                Branch::Homogeneous1
            } else {
                Branch::Homogeneous0
            }
        } else if alpha.get(1).copied().unwrap_or(0.0) >= 0.0 {
            Branch::PatternPlus
        } else {
            Branch::PatternMinus
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalerkinSolution {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub residual_norm: f64,
    pub branch: Branch,
    pub iterations: usize,
}

impl GalerkinSolution {
    fn new(sys: &GalerkinSystem, alpha: Vec<f64>, iterations: usize) -> Self {
        let residual_norm = max_norm(&sys.residual(&alpha));
        GalerkinSolution {
            beta: sys.beta(&alpha),
            branch: Branch::classify(&alpha),
            alpha,
            residual_norm,
            iterations,
        }
    }

    /// The mirror image `x -> L - x`: odd modes change sign.
    pub fn mirrored(&self, sys: &GalerkinSystem) -> Self {
        let alpha = self
            .alpha
            .iter()
            .enumerate()
            .map(|(i, &a)| if i % 2 == 1 { -a } else { a })
            .collect();
        GalerkinSolution::new(sys, alpha, self.iterations)
    }

    /// Representative with `alpha_1 >= 0`.
    pub fn positive(self, sys: &GalerkinSystem) -> Self {
        if self.branch == Branch::PatternMinus {
            self.mirrored(sys)
        } else {
            self
        }
    }

    /// `alpha_0 ..= alpha_M` padded with zeros to `modes + 1` entries.
    pub fn padded(&self, modes: usize) -> Vec<f64> {
        let mut alpha = self.alpha.clone();
        alpha.resize(modes + 1, 0.0);
        alpha
    }
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc: f64, x| acc.max(x.abs()))
}

/// All real roots of the `M = 1` system: both homogeneous states and, when
/// `0 < alpha_0 < 1`, the pattern pair `alpha_1 = +-sqrt(2 alpha_0 (1 - alpha_0))`.
pub fn solve_m1_closed_form(sys: &GalerkinSystem) -> Result<Vec<GalerkinSolution>> {
    let sys = sys.with_modes(1);
    let k_sq = sys.k * sys.k;
    let den = sys.chi0 * k_sq - 2.0 * sys.r * (1.0 + k_sq);
    if den == 0.0 {
        return Err(Error::Degenerate("chi0 k^2 = 2 r (1 + k^2)"));
    }
    let alpha0 = (sys.d * k_sq - sys.r) * (1.0 + k_sq) / den;
    let mut roots = vec![
        GalerkinSolution::new(&sys, vec![0.0, 0.0], 0),
        GalerkinSolution::new(&sys, vec![1.0, 0.0], 0),
    ];
    let spread = 2.0 * alpha0 * (1.0 - alpha0);
    if spread > 0.0 {
        let alpha1 = spread.sqrt();
        roots.push(GalerkinSolution::new(&sys, vec![alpha0, alpha1], 0));
        roots.push(GalerkinSolution::new(&sys, vec![alpha0, -alpha1], 0));
    }
    Ok(roots)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// Newton iteration from `guess` (length `M + 1`) with a backtracking safeguard.
pub fn solve(sys: &GalerkinSystem, guess: &[f64], opts: NewtonOptions) -> Result<GalerkinSolution> {
    if sys.modes == 0 {
        return Err(Error::InvalidParameter {
            name: "M",
            value: 0.0,
            reason: "Newton solve needs M >= 1",
        });
    }
    if guess.len() != sys.modes + 1 {
        return Err(Error::InvalidParameter {
            name: "guess",
            value: guess.len() as f64,
            reason: "initial guess must have M + 1 entries",
        });
    }
    let mut alpha = guess.to_vec();
    let mut res = sys.residual(&alpha);
    let mut norm = max_norm(&res);
    for iteration in 0..opts.max_iter {
        if norm < opts.tol {
            return Ok(GalerkinSolution::new(sys, alpha, iteration));
        }
        let rhs = -DVector::from_column_slice(&res);
        let step = sys
            .jacobian(&alpha)
            .lu()
            .solve(&rhs)
            .filter(|s| s.iter().all(|v| v.is_finite()))
            .ok_or(Error::SingularJacobian { iteration })?;
        let mut scale = 1.0;
        loop {
            let trial: Vec<f64> = alpha
                .iter()
                .zip(step.iter())
                .map(|(a, s)| a + scale * s)
                .collect();
            let trial_res = sys.residual(&trial);
            let trial_norm = max_norm(&trial_res);
            if trial_norm < norm || scale < 1e-3 {
                alpha = trial;
                res = trial_res;
                norm = trial_norm;
                break;
            }
            scale *= 0.5;
        }
    }
    if norm < opts.tol {
        return Ok(GalerkinSolution::new(sys, alpha, opts.max_iter));
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        residual: norm,
        last: alpha,
    })
}

/// Pattern solution at order `M` reached by solving `M = 1` in closed form and
/// zero-padding each order into the next.
pub fn solve_from_closed_form(sys: &GalerkinSystem, opts: NewtonOptions) -> Result<GalerkinSolution> {
    let seed = solve_m1_closed_form(sys)?
        .into_iter()
        .find(|s| s.branch == Branch::PatternPlus)
        .ok_or(Error::Regime("no real pattern branch at this wavenumber"))?;
    if sys.modes <= 1 {
        return Ok(GalerkinSolution::new(sys, seed.padded(sys.modes), 0));
    }
    let mut current = seed;
    for modes in 2..=sys.modes {
        let level = sys.with_modes(modes);
        current = solve(&level, &current.padded(modes), opts)?.positive(&level);
    }
    Ok(current)
}

/// Order-by-order solutions `M = 1 ..= max_modes`, as reported in a truncation table.
pub fn truncation_ladder(
    m: &ModelSpec,
    k: f64,
    max_modes: usize,
    opts: NewtonOptions,
) -> Result<Vec<GalerkinSolution>> {
    let base = GalerkinSystem::new(m, 1, k)?;
    let mut rows = vec![solve_from_closed_form(&base, opts)?];
    for modes in 2..=max_modes {
        let sys = base.with_modes(modes);
        let prev = rows.last().unwrap();
        rows.push(solve(&sys, &prev.padded(modes), opts)?.positive(&sys));
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContinuationParameter {
    /// Base wavenumber `k`.
    K,
    /// Domain length, `k = pi / L`.
    Length,
    D,
    Chi0,
    R,
}

impl ContinuationParameter {
    pub fn name(self) -> &'static str {
        match self {
            ContinuationParameter::K => "k",
            ContinuationParameter::Length => "L",
            ContinuationParameter::D => "D",
            ContinuationParameter::Chi0 => "chi0",
            ContinuationParameter::R => "r",
        }
    }

    fn apply(self, sys: &GalerkinSystem, value: f64) -> Result<GalerkinSystem> {
        let m = sys.model();
        let (m, k) = match self {
            ContinuationParameter::K => (m, value),
            ContinuationParameter::Length => (m, PI / value),
            ContinuationParameter::D => (ModelSpec { d: value, ..m }, sys.k),
            ContinuationParameter::Chi0 => (ModelSpec { chi0: value, ..m }, sys.k),
            ContinuationParameter::R => (ModelSpec { r: value, ..m }, sys.k),
        };
        GalerkinSystem::new(&m, sys.modes, k)
    }
}

impl std::str::FromStr for ContinuationParameter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "k" => Ok(ContinuationParameter::K),
            "L" | "l" | "length" => Ok(ContinuationParameter::Length),
            "D" | "d" => Ok(ContinuationParameter::D),
            "chi0" => Ok(ContinuationParameter::Chi0),
            "r" => Ok(ContinuationParameter::R),
            _ => Err(format!("cannot vary `{s}` (expected one of k, L, D, chi0, r)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuationRow {
    pub value: f64,
    pub system: GalerkinSystem,
    pub solution: GalerkinSolution,
}

/// Natural-parameter continuation: each point is seeded from the previous pattern
/// solution. Where no pattern branch exists the homogeneous state `(1, 0, ...)` is
/// recorded instead.
pub fn continuation_sweep(
    template: &GalerkinSystem,
    parameter: ContinuationParameter,
    values: &[f64],
    opts: NewtonOptions,
) -> Result<Vec<ContinuationRow>> {
    let mut rows: Vec<ContinuationRow> = Vec::with_capacity(values.len());
    for &value in values {
        let wrap = |source: Error| Error::Continuation {
            parameter: parameter.name(),
            value,
            source: Box::new(source),
        };
        let sys = parameter.apply(template, value).map_err(wrap)?;
        let previous = rows
            .last()
            .map(|row| &row.solution)
            .filter(|s| s.branch.is_pattern());
        let continued = previous.and_then(|prev| {
            solve(&sys, &prev.alpha, opts)
                .ok()
                .filter(|s| s.branch.is_pattern())
        });
        let solution = match continued {
            Some(s) => s.positive(&sys),
            None => match solve_from_closed_form(&sys, opts) {
                Ok(s) if s.branch.is_pattern() => s,
                Ok(_) | Err(Error::Regime(_)) => {
                    let mut unit = vec![0.0; sys.modes + 1];
                    unit[0] = 1.0;
                    GalerkinSolution::new(&sys, unit, 0)
                }
                Err(err) => return Err(wrap(err)),
            },
        };
        rows.push(ContinuationRow {
            value,
            system: sys,
            solution,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MaximisedMode {
    /// Maximise `alpha_1` on a domain of one half-spike, `L = Lambda_0`.
    First,
    /// Maximise `alpha_2` on a domain of two half-spikes, `L = 2 Lambda_0`.
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavelengthPrediction {
    /// Characteristic length (half-spike).
    pub lambda0: f64,
    /// `2 alpha_max`.
    pub amplitude: f64,
    pub alpha_max: f64,
    /// Base wavenumber of the half-spike domain, `pi / lambda0`.
    pub k_star: f64,
}

/// Pattern coefficient of a half-spike of length `pi / k` under the chosen convention.
pub fn pattern_coefficient(
    m: &ModelSpec,
    modes: usize,
    k: f64,
    mode: MaximisedMode,
    opts: NewtonOptions,
) -> Result<f64> {
    let half = GalerkinSystem::new(m, modes, k)?;
    match mode {
        MaximisedMode::First => Ok(solve_from_closed_form(&half, opts)?.alpha[1]),
        MaximisedMode::Second => {
            // two mirrored half-spikes: embed the half-spike's modes on the even indices
            let inner = solve_from_closed_form(&half.with_modes(modes / 2), opts)?;
            let double = GalerkinSystem::new(m, modes, 0.5 * k)?;
            let mut seed = vec![0.0; modes + 1];
            for (i, a) in inner.alpha.iter().enumerate() {
                seed[2 * i] = *a;
            }
            let sol = solve(&double, &seed, opts)?;
            Ok(sol.alpha[2].abs())
        }
    }
}

/// Characteristic length and amplitude of the pattern by maximising the leading
/// pattern coefficient over the base wavenumber.
pub fn predict_wavelength_amplitude(
    m: &ModelSpec,
    modes: usize,
    mode: MaximisedMode,
) -> Result<WavelengthPrediction> {
    let opts = NewtonOptions::default();
    if stability::instability_factor(m)? <= 1.0 {
        return Err(Error::Regime("no Turing instability (R_T <= 1)"));
    }
    let (k1_sq, k2_sq) = stability::unstable_band(m)?
        .ok_or(Error::Regime("no unstable band (R_T <= 1)"))?;
    let (k_lo, k_hi) = (k1_sq.sqrt(), k2_sq.sqrt());
    let coefficient = |k: f64| pattern_coefficient(m, modes, k, mode, opts).unwrap_or(0.0);

    const SCAN: usize = 64;
    let ks: Vec<f64> = (1..SCAN)
        .map(|i| k_lo + (k_hi - k_lo) * i as f64 / SCAN as f64)
        .collect();
    let values: Vec<f64> = ks.iter().map(|&k| coefficient(k)).collect();
    let best = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    if values[best] <= 0.0 {
        return Err(Error::Regime("no pattern branch inside the unstable band"));
    }
    let lo = if best == 0 { k_lo } else { ks[best - 1] };
    let hi = if best + 1 == ks.len() { k_hi } else { ks[best + 1] };
    let (k_star, alpha_max) = optim::golden_max(coefficient, lo, hi, 1e-6);
    Ok(WavelengthPrediction {
        lambda0: PI / k_star,
        amplitude: 2.0 * alpha_max,
        alpha_max,
        k_star,
    })
}

use thiserror::Error;

use crate::model::Variant;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` = {value} is invalid: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("variant {variant} requires parameter `{name}`")]
    MissingParameter { variant: Variant, name: &'static str },

    /// A chemotactic sensitivity denominator reached zero or went negative.
    #[error("chemotactic sensitivity of {variant} is singular at n = {n}, c = {c}")]
    Singularity { variant: Variant, n: f64, c: f64 },

    #[error("degenerate parameters: {0}")]
    Degenerate(&'static str),

    /// The requested quantity only exists in another stability regime.
    #[error("outside the required regime: {0}")]
    Regime(&'static str),

    #[error("solution blew up at t = {time}, x = {x}: {kind}")]
    BlowUp { time: f64, x: f64, kind: BlowUpKind },

    #[error("no crossing of level {level} at t = {time}")]
    NoCrossing { level: f64, time: f64 },

    #[error("{nx} samples cannot resolve {modes} modes (need at least {needed})")]
    Aliasing {
        nx: usize,
        modes: usize,
        needed: usize,
    },

    #[error("profiles live on different grids")]
    GridMismatch,

    #[error("no interior maximum for mode {mode}: the bump is clipped by the sweep range")]
    NoInteriorMaximum { mode: usize },

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        last: Vec<f64>,
    },

    #[error("singular Jacobian at iteration {iteration}")]
    SingularJacobian { iteration: usize },

    #[error("continuation failed at {parameter} = {value}: {source}")]
    Continuation {
        parameter: &'static str,
        value: f64,
        source: Box<Error>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlowUpKind {
    NonFinite,
    Negative,
}

impl std::fmt::Display for BlowUpKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BlowUpKind::NonFinite => f.write_str("non-finite value"),
            BlowUpKind::Negative => f.write_str("negative density or concentration"),
        }
    }
}

impl Error {
    /// Blow-up, singularity and non-convergence are numerical failures; the rest are input problems.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singularity { .. }
                | Error::BlowUp { .. }
                | Error::NonConvergence { .. }
                | Error::SingularJacobian { .. }
                | Error::Continuation { .. }
                | Error::NoCrossing { .. }
                | Error::NoInteriorMaximum { .. }
        )
    }
}

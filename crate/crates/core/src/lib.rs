//! Chemotactic Turing patterns in a Keller–Segel model with logistic growth.
//!
//! - [`model`]: the nine model variants and their parameters.
//! - [`stability`]: linear stability of the homogeneous state, unstable band, wavelengths.
//! - [`pde`]: finite-volume simulation with zero-flux boundaries.
//! - [`spectral`]: cosine-series decomposition of profiles and domain-length sweeps.
//! - [`galerkin`]: truncated cosine-series solution of the stationary problem.

pub mod error;
pub mod galerkin;
pub mod model;
pub mod optim;
pub mod pde;
pub mod spectral;
pub mod stability;

pub use error::{Error, Result};
pub use model::{ModelSpec, Variant};

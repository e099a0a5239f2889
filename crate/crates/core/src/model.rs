//! The chemotaxis model family.
//!
//! Every variant shares the dimensionless system
//!
//! ```text
//! n_t = D n_xx - (chi(n, c) c_x)_x + f(n, c)
//! c_t = c_xx + n - c
//! ```
//!
//! and differs only in the chemotactic sensitivity `chi` and the cell kinetics `f`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// `chi = chi0`, no growth.
    M1,
    /// `chi = chi0 n`, no growth.
    M2,
    /// `chi = chi0 n`, logistic growth.
    M3,
    /// `chi = chi0 / c`, no growth.
    M4,
    /// `chi = chi0 / c`, logistic growth.
    M5,
    /// `chi = chi0 n / c`, logistic growth.
    M6,
    /// `chi = chi0 n / (c + nu)`, logistic growth.
    M7,
    /// `chi = chi0 n / (c + nu)^2`, logistic growth.
    M8,
    /// `chi = chi0 (n + nu1) / (c + nu2)`, logistic growth.
    M9,
}

impl Variant {
    pub const ALL: [Variant; 9] = [
        Variant::M1,
        Variant::M2,
        Variant::M3,
        Variant::M4,
        Variant::M5,
        Variant::M6,
        Variant::M7,
        Variant::M8,
        Variant::M9,
    ];

    /// Whether the tabulated kinetics is logistic (`f = r n (1 - n)`) rather than zero.
    pub fn has_logistic_kinetics(self) -> bool {
        !matches!(self, Variant::M1 | Variant::M2 | Variant::M4)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let idx = s
            .trim()
            .trim_start_matches(['M', 'm'])
            .parse::<usize>()
            .map_err(|_| format!("unknown variant `{s}` (expected M1..M9)"))?;
        Variant::ALL
            .get(idx.wrapping_sub(1))
            .copied()
            .ok_or_else(|| format!("unknown variant `{s}` (expected M1..M9)"))
    }
}

/// A dimensionless parameter point for one model variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub variant: Variant,
    /// Cell to chemical diffusion ratio.
    pub d: f64,
    /// Chemotactic sensitivity; negative values model chemorepulsion.
    pub chi0: f64,
    /// Reproduction rate, used only by logistic variants.
    pub r: f64,
    pub nu: Option<f64>,
    pub nu1: Option<f64>,
    pub nu2: Option<f64>,
    /// Mean cell density, which fixes the steady state when there is no growth.
    pub n0: Option<f64>,
}

impl Default for ModelSpec {
    fn default() -> Self {
        ModelSpec::m3(1.0, 1.9, 0.1)
    }
}

impl ModelSpec {
    pub fn m3(d: f64, chi0: f64, r: f64) -> Self {
        ModelSpec {
            variant: Variant::M3,
            d,
            chi0,
            r,
            nu: None,
            nu1: None,
            nu2: None,
            n0: None,
        }
    }

    pub fn with_variant(self, variant: Variant) -> Self {
        ModelSpec { variant, ..self }
    }

    pub fn with_nu(self, nu: f64) -> Self {
        ModelSpec {
            nu: Some(nu),
            ..self
        }
    }

    pub fn with_nu12(self, nu1: f64, nu2: f64) -> Self {
        ModelSpec {
            nu1: Some(nu1),
            nu2: Some(nu2),
            ..self
        }
    }

    pub fn with_n0(self, n0: f64) -> Self {
        ModelSpec {
            n0: Some(n0),
            ..self
        }
    }

    /// Logistic growth is active. A logistic variant with `r = 0` falls back to the
    /// mass-conserving regime whose steady state is set by `n0`.
    pub fn is_growing(&self) -> bool {
        self.variant.has_logistic_kinetics() && self.r > 0.0
    }

    pub fn validate(&self) -> Result<()> {
        non_negative("D", self.d)?;
        if !self.chi0.is_finite() {
            return Err(Error::InvalidParameter {
                name: "chi0",
                value: self.chi0,
                reason: "must be finite",
            });
        }
        non_negative("r", self.r)?;
        match self.variant {
            Variant::M7 | Variant::M8 => {
                non_negative("nu", self.require("nu", self.nu)?)?;
            }
            Variant::M9 => {
                non_negative("nu1", self.require("nu1", self.nu1)?)?;
                non_negative("nu2", self.require("nu2", self.nu2)?)?;
            }
            _ => {}
        }
        if !self.is_growing() {
            let n0 = self.require("n0", self.n0)?;
            if !(n0 > 0.0 && n0.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "n0",
                    value: n0,
                    reason: "mean density must be positive",
                });
            }
        }
        Ok(())
    }

    fn require(&self, name: &'static str, value: Option<f64>) -> Result<f64> {
        value.ok_or(Error::MissingParameter {
            variant: self.variant,
            name,
        })
    }

    fn nu(&self) -> Result<f64> {
        self.require("nu", self.nu)
    }

    /// Chemotactic sensitivity `chi(n, c)` as tabulated for the variant.
    pub fn chi_at(&self, n: f64, c: f64) -> Result<f64> {
        let chi0 = self.chi0;
        let singular = || Error::Singularity {
            variant: self.variant,
            n,
            c,
        };
        let positive = |den: f64| if den > 0.0 { Ok(den) } else { Err(singular()) };
        Ok(match self.variant {
            Variant::M1 => chi0,
            Variant::M2 | Variant::M3 => chi0 * n,
            Variant::M4 | Variant::M5 => chi0 / positive(c)?,
            Variant::M6 => chi0 * n / positive(c)?,
            Variant::M7 => chi0 * n / positive(c + self.nu()?)?,
            Variant::M8 => {
                let den = positive(c + self.nu()?)?;
                chi0 * n / (den * den)
            }
            Variant::M9 => {
                let nu1 = self.require("nu1", self.nu1)?;
                let nu2 = self.require("nu2", self.nu2)?;
                chi0 * (n + nu1) / positive(c + nu2)?
            }
        })
    }

    /// Cell and chemical kinetics `(f, g)`.
    pub fn kinetics_at(&self, n: f64, c: f64) -> (f64, f64) {
        let f = if self.is_growing() {
            self.r * n * (1.0 - n)
        } else {
            0.0
        };
        (f, n - c)
    }

    /// `df/dn`; no variant has kinetics depending on `c`.
    pub fn growth_slope(&self, n: f64) -> f64 {
        if self.is_growing() {
            self.r * (1.0 - 2.0 * n)
        } else {
            0.0
        }
    }

    pub fn homogeneous_steady_states(&self) -> Result<Vec<(f64, f64)>> {
        if self.is_growing() {
            Ok(vec![(0.0, 0.0), (1.0, 1.0)])
        } else {
            let n0 = self.require("n0", self.n0)?;
            Ok(vec![(n0, n0)])
        }
    }

    /// The homogeneous state whose Turing instability is of interest: `(1, 1)` with
    /// growth, `(n0, n0)` without.
    pub fn patterned_state(&self) -> Result<(f64, f64)> {
        if self.is_growing() {
            Ok((1.0, 1.0))
        } else {
            let n0 = self.require("n0", self.n0)?;
            Ok((n0, n0))
        }
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and non-negative",
        })
    }
}

/// Dimensional parameters of the growing-population model (variant M3).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionalParams {
    pub dn: f64,
    pub dc: f64,
    pub chi_tilde: f64,
    pub r0: f64,
    pub k_cap: f64,
    pub h: f64,
    pub p: f64,
}

/// Rescales `t -> t p`, `x -> x sqrt(p / Dc)`, `n -> n / k`, `c -> c p / (h k)`.
pub fn nondimensionalize(dp: &DimensionalParams) -> Result<ModelSpec> {
    if dp.dc == 0.0 {
        return Err(Error::InvalidParameter {
            name: "Dc",
            value: dp.dc,
            reason: "division by zero",
        });
    }
    if dp.p == 0.0 {
        return Err(Error::InvalidParameter {
            name: "p",
            value: dp.p,
            reason: "division by zero",
        });
    }
    let spec = ModelSpec::m3(
        dp.dn / dp.dc,
        dp.chi_tilde * dp.h * dp.k_cap / (dp.dc * dp.p),
        dp.r0 * dp.k_cap / dp.p,
    );
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn dp(dn: f64, dc: f64, chi_tilde: f64, r0: f64, k_cap: f64, h: f64, p: f64) -> DimensionalParams {
        DimensionalParams {
            dn,
            dc,
            chi_tilde,
            r0,
            k_cap,
            h,
            p,
        }
    }

    #[test]
    fn unit_scalings_give_default_set() {
        let m = nondimensionalize(&dp(1.0, 1.0, 1.9, 0.1, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!((m.d, m.chi0, m.r), (1.0, 1.9, 0.1));
        assert_eq!(m.variant, Variant::M3);
    }

    #[test]
    fn nondimensional_quotients() {
        let m = nondimensionalize(&dp(2.0, 4.0, 1.0, 1.0, 3.0, 2.0, 2.0)).unwrap();
        assert_relative_eq!(m.d, 0.5);
        assert_relative_eq!(m.chi0, 0.75);
        assert_relative_eq!(m.r, 1.5);
    }

    #[test]
    fn zero_cell_diffusion_is_admissible() {
        let m = nondimensionalize(&dp(0.0, 1.0, 1.9, 0.1, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(m.d, 0.0);
        m.validate().unwrap();
    }

    #[test]
    fn nondimensionalize_rejects_zero_divisors() {
        assert!(nondimensionalize(&dp(1.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0)).is_err());
        assert!(nondimensionalize(&dp(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0)).is_err());
    }

    #[test]
    fn chi_values() {
        let m3 = ModelSpec::default();
        assert_eq!(m3.chi_at(1.0, 0.3).unwrap(), 1.9);
        let m7 = m3.with_variant(Variant::M7).with_nu(0.2);
        assert_relative_eq!(m7.chi_at(1.0, 1.0).unwrap(), 1.9 / 1.2, epsilon = 1e-15);
        let m4 = m3.with_variant(Variant::M4).with_n0(1.0);
        assert!(matches!(m4.chi_at(1.0, 0.0), Err(Error::Singularity { .. })));
        assert!(matches!(m4.chi_at(1.0, -0.5), Err(Error::Singularity { .. })));
    }

    #[test]
    fn kinetics_values() {
        let m3 = ModelSpec::default();
        assert_eq!(m3.kinetics_at(1.0, 1.0), (0.0, 0.0));
        let (f, g) = m3.kinetics_at(0.5, 0.0);
        assert_relative_eq!(f, 0.025);
        assert_eq!(g, 0.5);
        let m1 = m3.with_variant(Variant::M1).with_n0(1.0);
        assert_eq!(m1.kinetics_at(2.0, 3.0), (0.0, -1.0));
    }

    #[test]
    fn steady_states() {
        assert_eq!(
            ModelSpec::default().homogeneous_steady_states().unwrap(),
            vec![(0.0, 0.0), (1.0, 1.0)]
        );
        let m2 = ModelSpec::default().with_variant(Variant::M2).with_n0(1.0);
        assert_eq!(m2.homogeneous_steady_states().unwrap(), vec![(1.0, 1.0)]);

        let no_growth = ModelSpec::m3(1.0, 1.9, 0.0);
        assert!(matches!(
            no_growth.homogeneous_steady_states(),
            Err(Error::MissingParameter { name: "n0", .. })
        ));
        assert_eq!(
            no_growth.with_n0(0.7).homogeneous_steady_states().unwrap(),
            vec![(0.7, 0.7)]
        );
    }

    #[test]
    fn validation_names_missing_parameter() {
        let m7 = ModelSpec::default().with_variant(Variant::M7);
        assert_eq!(
            m7.validate(),
            Err(Error::MissingParameter {
                variant: Variant::M7,
                name: "nu"
            })
        );
        assert!(ModelSpec::m3(-1.0, 1.9, 0.1).validate().is_err());
        assert!(ModelSpec::m3(1.0, 1.9, -0.1).validate().is_err());
        assert!(ModelSpec::m3(1.0, -1.9, 0.1).validate().is_ok());
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("M7".parse::<Variant>().unwrap(), Variant::M7);
        assert_eq!("m1".parse::<Variant>().unwrap(), Variant::M1);
        assert!("M0".parse::<Variant>().is_err());
        assert!("M10".parse::<Variant>().is_err());
    }
}

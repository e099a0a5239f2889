//! Linear stability of the patterned homogeneous state.
//!
//! Perturbations `exp(lambda t) cos(k x)` around the homogeneous state `(n*, c*)` grow
//! with the eigenvalues of
//!
//! ```text
//!     | -D k^2 + f_n    chi* k^2 |
//! M = |                          |
//!     |      1         -k^2 - 1  |
//! ```
//!
//! where `chi* = chi(n*, c*)` and `f_n = df/dn (n*)`. Writing `r_eff = -f_n`, the
//! determinant is the quadratic `D q^2 + q (D + r_eff - chi*) + r_eff` in `q = k^2`,
//! so every variant reduces to the same three effective coefficients.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelSpec, Variant};
use crate::optim;

/// Effective coefficients of the dispersion relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion {
    pub d: f64,
    pub chi_eff: f64,
    pub r_eff: f64,
}

impl Dispersion {
    pub fn of(m: &ModelSpec) -> Result<Self> {
        let (n, c) = m.patterned_state()?;
        Ok(Dispersion {
            d: m.d,
            chi_eff: m.chi_at(n, c)?,
            r_eff: -m.growth_slope(n),
        })
    }

    pub fn matrix(&self, k_sq: f64) -> Matrix2<f64> {
        Matrix2::new(
            -self.d * k_sq - self.r_eff,
            self.chi_eff * k_sq,
            1.0,
            -k_sq - 1.0,
        )
    }

    pub fn det(&self, k_sq: f64) -> f64 {
        self.d * k_sq * k_sq + k_sq * (self.d + self.r_eff - self.chi_eff) + self.r_eff
    }

    /// Largest eigenvalue of the characteristic matrix.
    pub fn growth_rate(&self, k_sq: f64) -> f64 {
        let (a, b, c, d) = self.entries(k_sq);
        let disc = ((a - d) * (a - d) + 4.0 * b * c).max(0.0);
        0.5 * (a + d + disc.sqrt())
    }

    /// `d lambda_2 / d(k^2)` from the matrix entries and their (linear) derivatives.
    pub fn growth_rate_slope(&self, k_sq: f64) -> f64 {
        let (a, b, c, d) = self.entries(k_sq);
        let (da, db, dd) = (-self.d, self.chi_eff, -1.0);
        let disc = (a - d) * (a - d) + 4.0 * b * c;
        let d_disc = 2.0 * (a - d) * (da - dd) + 4.0 * db * c;
        0.5 * (da + dd + d_disc / (2.0 * disc.sqrt()))
    }

    fn entries(&self, k_sq: f64) -> (f64, f64, f64, f64) {
        let m = self.matrix(k_sq);
        (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
    }

    /// Roots of `det M = 0` in `k^2` when both are real and the determinant dips negative.
    pub fn band(&self) -> Result<Option<(f64, f64)>> {
        let Dispersion { d, chi_eff, r_eff } = *self;
        let excess = chi_eff - d - r_eff;
        if excess <= 0.0 {
            return Ok(None);
        }
        if d <= 0.0 {
            return Err(Error::Degenerate("D = 0 leaves the unstable band unbounded"));
        }
        let disc = excess * excess - 4.0 * d * r_eff;
        if disc <= 0.0 {
            return Ok(None);
        }
        let k2_sq = (excess + disc.sqrt()) / (2.0 * d);
        // product of the roots is r_eff / D; avoids cancellation in the small root
        let k1_sq = r_eff / (d * k2_sq);
        Ok(Some((k1_sq, k2_sq)))
    }
}

/// Linearisation of `m` at its patterned state for perturbations of squared wavenumber `k_sq`.
pub fn characteristic_matrix(m: &ModelSpec, k_sq: f64) -> Result<Matrix2<f64>> {
    if !(k_sq >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "k_sq",
            value: k_sq,
            reason: "squared wavenumber must be non-negative",
        });
    }
    Ok(Dispersion::of(m)?.matrix(k_sq))
}

/// Instability factor `R_T`; Turing patterns are predicted when it exceeds one.
pub fn instability_factor(m: &ModelSpec) -> Result<f64> {
    let chi0 = m.chi0;
    let d = m.d;
    let degenerate = |den: f64, what| {
        if den > 0.0 {
            Ok(den)
        } else {
            Err(Error::Degenerate(what))
        }
    };
    if m.is_growing() {
        let base = degenerate(
            d + m.r + 2.0 * (d * m.r).sqrt(),
            "D + r + 2 sqrt(D r) vanishes",
        )?;
        let nu = || m.nu.ok_or(missing(m.variant, "nu"));
        Ok(match m.variant {
            Variant::M3 | Variant::M5 | Variant::M6 => chi0 / base,
            Variant::M7 => chi0 / ((nu()? + 1.0) * base),
            Variant::M8 => chi0 / ((nu()? + 1.0).powi(2) * base),
            Variant::M9 => {
                let nu1 = m.nu1.ok_or(missing(m.variant, "nu1"))?;
                let nu2 = m.nu2.ok_or(missing(m.variant, "nu2"))?;
                chi0 * (1.0 + nu1) / ((nu2 + 1.0) * base)
            }
            Variant::M1 | Variant::M2 | Variant::M4 => unreachable!("no growth in {}", m.variant),
        })
    } else {
        let d = degenerate(d, "D = 0 without growth")?;
        let (n0, c0) = m.patterned_state()?;
        match m.variant {
            Variant::M1 => Ok(chi0 / d),
            Variant::M2 | Variant::M3 => Ok(chi0 * n0 / d),
            Variant::M4 | Variant::M5 => Ok(chi0 / (d * n0)),
            // r = 0 in a growth variant: the tabulated sensitivity at (n0, n0) over D
            _ => Ok(m.chi_at(n0, c0)? / d),
        }
    }
}

fn missing(variant: Variant, name: &'static str) -> Error {
    Error::MissingParameter { variant, name }
}

/// Squared-wavenumber interval where `det M < 0`, if any.
pub fn unstable_band(m: &ModelSpec) -> Result<Option<(f64, f64)>> {
    Dispersion::of(m)?.band()
}

/// Average unstable mode `k_av^2 = (chi - D - r) / (2 D)`, the midpoint of the band.
/// Only defined while the band exists.
pub fn average_mode(m: &ModelSpec) -> Result<f64> {
    let disp = Dispersion::of(m)?;
    let excess = disp.chi_eff - disp.d - disp.r_eff;
    if excess <= 0.0 {
        return Err(Error::Regime("chemotaxis must exceed D + r"));
    }
    if disp.band()?.is_none() {
        return Err(Error::Regime("no unstable band (R_T <= 1)"));
    }
    Ok(excess / (2.0 * disp.d))
}

/// Wavelength `pi / k_av` of the average unstable mode.
pub fn wavelength_explicit(m: &ModelSpec) -> Result<f64> {
    Ok(PI / average_mode(m)?.sqrt())
}

/// Most unstable mode by maximising the growth eigenvalue over the band.
/// Returns `(k_star_sq, pi / k_star)`.
pub fn wavelength_implicit(m: &ModelSpec) -> Result<(f64, f64)> {
    let disp = Dispersion::of(m)?;
    let (lo, hi) = disp
        .band()?
        .ok_or(Error::Regime("no unstable band (R_T <= 1)"))?;
    // lambda_2 is increasing at k1 and decreasing at k2; the slope changes sign once
    let k_star_sq = optim::bisect(|q| disp.growth_rate_slope(q), lo, hi, 1e-13);
    Ok((k_star_sq, PI / k_star_sq.sqrt()))
}

/// Closed-form stationarity condition `d lambda_2 / d(k^2)` for the growing M3 system,
/// independent of the matrix route. Zero at the most unstable mode.
pub fn stationarity_condition_m3(d: f64, chi0: f64, r: f64, k_sq: f64) -> f64 {
    let a = 2.0 * chi0 + d * r - d - r + 1.0;
    let s = (1.0 - d).powi(2);
    let radicand = k_sq * k_sq * s + 2.0 * k_sq * a + (1.0 - r).powi(2);
    -(d + 1.0) / 2.0 + (k_sq * s + a) / (2.0 * radicand.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternClass {
    HomogeneousStable,
    TravellingWave,
    TuringUnstable,
}

impl std::fmt::Display for PatternClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

pub fn classify(m: &ModelSpec) -> Result<PatternClass> {
    let rt = instability_factor(m)?;
    Ok(if rt > 1.0 {
        PatternClass::TuringUnstable
    } else if m.is_growing() {
        PatternClass::TravellingWave
    } else {
        PatternClass::HomogeneousStable
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub rt: f64,
    pub band: Option<(f64, f64)>,
    pub k_av_sq: Option<f64>,
    pub k_star_sq: Option<f64>,
    pub lambda_explicit: Option<f64>,
    pub lambda_implicit: Option<f64>,
    pub class: PatternClass,
}

pub fn report(m: &ModelSpec) -> Result<StabilityReport> {
    m.validate()?;
    let rt = instability_factor(m)?;
    let band = unstable_band(m)?;
    let k_av_sq = average_mode(m).ok();
    let implicit = band.map(|_| wavelength_implicit(m)).transpose()?;
    Ok(StabilityReport {
        rt,
        band,
        k_av_sq,
        k_star_sq: implicit.map(|(k, _)| k),
        lambda_explicit: k_av_sq.map(|k| PI / k.sqrt()),
        lambda_implicit: implicit.map(|(_, l)| l),
        class: classify(m)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn defaults() -> ModelSpec {
        ModelSpec::default()
    }

    #[test]
    fn matrix_at_unit_wavenumber() {
        let m = characteristic_matrix(&defaults(), 1.0).unwrap();
        assert_abs_diff_eq!(m, Matrix2::new(-1.1, 1.9, 1.0, -2.0), epsilon = 1e-15);
    }

    #[test]
    fn matrix_at_zero_wavenumber() {
        for v in [Variant::M3, Variant::M5, Variant::M6] {
            let m = characteristic_matrix(&defaults().with_variant(v), 0.0).unwrap();
            assert_abs_diff_eq!(m, Matrix2::new(-0.1, 0.0, 1.0, -1.0), epsilon = 1e-15);
        }
    }

    #[test]
    fn negative_wavenumber_rejected() {
        assert!(characteristic_matrix(&defaults(), -1.0).is_err());
    }

    #[test]
    fn instability_factor_values() {
        let rt = instability_factor(&defaults()).unwrap();
        assert_abs_diff_eq!(rt, 1.9 / (1.1 + 2.0 * 0.1f64.sqrt()), epsilon = 1e-15);
        assert_abs_diff_eq!(rt, 1.0967, epsilon = 1e-4);
        let rt = instability_factor(&ModelSpec::m3(1.0, 1.7, 0.1)).unwrap();
        assert_abs_diff_eq!(rt, 0.9813, epsilon = 1e-4);
        let m1 = ModelSpec::m3(1.0, 0.5, 0.1).with_variant(Variant::M1).with_n0(1.0);
        assert_eq!(instability_factor(&m1).unwrap(), 0.5);
        let m7 = defaults().with_variant(Variant::M7).with_nu(0.2);
        assert_abs_diff_eq!(instability_factor(&m7).unwrap(), 0.9139, epsilon = 1e-4);
    }

    #[test]
    fn degenerate_denominator() {
        let m = ModelSpec::m3(0.0, 1.9, 0.0).with_n0(1.0);
        assert!(matches!(instability_factor(&m), Err(Error::Degenerate(_))));
    }

    #[test]
    fn band_endpoints() {
        let (k1, k2) = unstable_band(&defaults()).unwrap().unwrap();
        // (0.8 -+ sqrt(0.24)) / 2
        assert_abs_diff_eq!(k1, (0.8 - 0.24f64.sqrt()) / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k2, (0.8 + 0.24f64.sqrt()) / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k1, 0.15505, epsilon = 1e-5);
        assert_abs_diff_eq!(k2, 0.64495, epsilon = 1e-5);
        assert_eq!(unstable_band(&ModelSpec::m3(1.0, 1.7, 0.1)).unwrap(), None);
    }

    #[test]
    fn band_without_growth_starts_at_zero() {
        let m = ModelSpec::m3(1.0, 1.9, 0.0).with_n0(1.0);
        let (k1, k2) = unstable_band(&m).unwrap().unwrap();
        assert_eq!(k1, 0.0);
        assert_abs_diff_eq!(k2, 0.9, epsilon = 1e-15);
    }

    #[test]
    fn explicit_wavelength() {
        let lambda = wavelength_explicit(&defaults()).unwrap();
        assert_abs_diff_eq!(lambda, PI * (2.0f64 / 0.8).sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(lambda, 4.9673, epsilon = 1e-4);
        assert_abs_diff_eq!(average_mode(&defaults()).unwrap(), 0.4, epsilon = 1e-15);
        assert!(matches!(
            wavelength_explicit(&ModelSpec::m3(1.0, 1.7, 0.1)),
            Err(Error::Regime(_))
        ));
    }

    #[test]
    fn implicit_wavelength_inside_band() {
        let m = defaults();
        let disp = Dispersion::of(&m).unwrap();
        let (k1, k2) = unstable_band(&m).unwrap().unwrap();
        let (k_star, lambda) = wavelength_implicit(&m).unwrap();
        assert!(k1 < k_star && k_star < k2);
        assert!(disp.growth_rate(k_star) > 0.0);
        assert!(disp.growth_rate(k1).abs() < 1e-12);
        assert!(disp.growth_rate(k2).abs() < 1e-12);
        assert!((3.91..=7.98).contains(&lambda));
        assert!(wavelength_implicit(&ModelSpec::m3(1.0, 1.7, 0.1)).is_err());
    }

    #[test]
    fn implicit_maximiser_beats_dense_scan() {
        let m = defaults();
        let disp = Dispersion::of(&m).unwrap();
        let (k1, k2) = unstable_band(&m).unwrap().unwrap();
        let (k_star, _) = wavelength_implicit(&m).unwrap();
        let best = disp.growth_rate(k_star);
        let n = 20_000;
        let scan = (0..=n)
            .map(|i| k1 + (k2 - k1) * i as f64 / n as f64)
            .map(|q| (q, disp.growth_rate(q)))
            .fold((0.0, f64::MIN), |acc, p| if p.1 > acc.1 { p } else { acc });
        assert!(best >= scan.1 - 1e-15);
        assert!((scan.0 - k_star).abs() < 2.0 * (k2 - k1) / n as f64);
    }

    #[test]
    fn closed_form_stationarity_agrees() {
        for &(d, chi0, r) in &[(1.0, 1.9, 0.1), (0.5, 2.5, 0.2), (0.8, 3.0, 0.05)] {
            let m = ModelSpec::m3(d, chi0, r);
            let (k_star, _) = wavelength_implicit(&m).unwrap();
            assert!(stationarity_condition_m3(d, chi0, r, k_star).abs() < 1e-10);
            let disp = Dispersion::of(&m).unwrap();
            for q in [0.2, 0.4, 0.6] {
                assert_abs_diff_eq!(
                    stationarity_condition_m3(d, chi0, r, q),
                    disp.growth_rate_slope(q),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&defaults()).unwrap(), PatternClass::TuringUnstable);
        assert_eq!(
            classify(&ModelSpec::m3(1.0, 1.7, 0.1)).unwrap(),
            PatternClass::TravellingWave
        );
        let m1 = ModelSpec::m3(1.0, 0.5, 0.1).with_variant(Variant::M1).with_n0(1.0);
        assert_eq!(classify(&m1).unwrap(), PatternClass::HomogeneousStable);
    }

    #[test]
    fn report_fields_are_consistent() {
        let rep = report(&defaults()).unwrap();
        let (k1, k2) = rep.band.unwrap();
        let k_av = rep.k_av_sq.unwrap();
        assert!(0.0 < k1 && k1 < k_av && k_av < k2);
        assert_abs_diff_eq!(k_av, 0.5 * (k1 + k2), epsilon = 1e-15);
        assert_abs_diff_eq!(rep.lambda_explicit.unwrap(), PI / k_av.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(
            rep.lambda_implicit.unwrap(),
            PI / rep.k_star_sq.unwrap().sqrt(),
            epsilon = 1e-15
        );
        let sub = report(&ModelSpec::m3(1.0, 1.7, 0.1)).unwrap();
        assert!(sub.band.is_none() && sub.lambda_implicit.is_none());
        assert_eq!(sub.class, PatternClass::TravellingWave);
    }
}

//! Network parameters and the deterministic part of the propagation model.
//!
//! All quantities are SI: watts, meters, BSs per square meter.

use crate::error::{Error, Result};
use crate::fading::FadingModel;
use crate::units;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinkType {
    Nlos,
    Los,
}

impl LinkType {
    pub const BOTH: [LinkType; 2] = [LinkType::Nlos, LinkType::Los];

    pub fn other(self) -> LinkType {
        match self {
            LinkType::Nlos => LinkType::Los,
            LinkType::Los => LinkType::Nlos,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LinkType::Nlos => "nlos",
            LinkType::Los => "los",
        }
    }
}

impl fmt::Display for LinkType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Probability that a link of length `r` is line-of-sight.
pub trait LosProfile: Send + Sync {
    fn los_probability(&self, r: f64) -> f64;

    /// Distances where the profile is not smooth; quadrature splits there.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Radial mass `∫_0^ρ p^U(r) r dr`; `ρ` may be infinite.
    fn radial_integral(&self, link: LinkType, rho: f64) -> f64;

    fn probability(&self, link: LinkType, r: f64) -> f64 {
        match link {
            LinkType::Los => self.los_probability(r),
            LinkType::Nlos => 1.0 - self.los_probability(r),
        }
    }
}

/// Every BS within `cutoff` (inclusive) is LOS, every BS beyond it NLOS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepLos {
    pub cutoff: f64,
}

impl LosProfile for StepLos {
    fn los_probability(&self, r: f64) -> f64 {
        if r <= self.cutoff {
            1.0
        } else {
            0.0
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        vec![self.cutoff]
    }

    fn radial_integral(&self, link: LinkType, rho: f64) -> f64 {
        let d = self.cutoff;
        match link {
            LinkType::Los => 0.5 * rho.min(d).powi(2),
            LinkType::Nlos if rho.is_infinite() => f64::INFINITY,
            LinkType::Nlos if rho > d => 0.5 * (rho * rho - d * d),
            LinkType::Nlos => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    /// Transmit power P_t in watts.
    pub tx_power: f64,
    /// Path loss intercepts at the 1 m reference distance (linear).
    pub a_nlos: f64,
    pub a_los: f64,
    pub alpha_nlos: f64,
    pub alpha_los: f64,
    /// Receiver noise power in watts; zero gives the SIR variant.
    pub noise_power: f64,
    /// LOS cutoff distance of the step profile, meters.
    pub los_cutoff_d: f64,
    /// BS intensity in BSs per square meter.
    pub bs_intensity: f64,
    pub fading_nlos: FadingModel,
    pub fading_los: FadingModel,
}

impl NetworkConfig {
    /// Urban small-cell parameters: 24 dBm transmit power, intercepts
    /// 10^-3.29 / 10^-4.14, exponents 3.75 / 2.09, -95 dBm noise, 250 m LOS
    /// cutoff, 10 BSs/km², Rayleigh fading on both link types.
    pub fn urban_default() -> Self {
        Self {
            tx_power: units::dbm_to_watts(24.0),
            a_nlos: 10f64.powf(-3.29),
            a_los: 10f64.powf(-4.14),
            alpha_nlos: 3.75,
            alpha_los: 2.09,
            noise_power: units::dbm_to_watts(-95.0),
            los_cutoff_d: 250.0,
            bs_intensity: units::per_km2_to_per_m2(10.0),
            fading_nlos: FadingModel::Rayleigh,
            fading_los: FadingModel::Rayleigh,
        }
    }

    pub fn with_intensity_per_km2(mut self, v: f64) -> Self {
        self.bs_intensity = units::per_km2_to_per_m2(v);
        self
    }

    pub fn with_fading(mut self, nlos: FadingModel, los: FadingModel) -> Self {
        self.fading_nlos = nlos;
        self.fading_los = los;
        self
    }

    pub fn with_noise_power(mut self, watts: f64) -> Self {
        self.noise_power = watts;
        self
    }

    pub fn with_los_cutoff(mut self, d: f64) -> Self {
        self.los_cutoff_d = d;
        self
    }

    pub fn with_exponents(mut self, alpha_nlos: f64, alpha_los: f64) -> Self {
        self.alpha_nlos = alpha_nlos;
        self.alpha_los = alpha_los;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("tx_power", self.tx_power),
            ("a_nlos", self.a_nlos),
            ("a_los", self.a_los),
            ("bs_intensity", self.bs_intensity),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        for (name, v) in [("alpha_nlos", self.alpha_nlos), ("alpha_los", self.alpha_los)] {
            if !(v.is_finite() && v > 2.0) {
                return Err(Error::config(format!("{name} must be > 2, got {v}")));
            }
        }
        if !(self.noise_power.is_finite() && self.noise_power >= 0.0) {
            return Err(Error::config(format!(
                "noise_power must be >= 0, got {}",
                self.noise_power
            )));
        }
        if !(self.los_cutoff_d.is_finite() && self.los_cutoff_d >= 0.0) {
            return Err(Error::config(format!(
                "los_cutoff_d must be >= 0, got {}",
                self.los_cutoff_d
            )));
        }
        self.fading_nlos.validate()?;
        self.fading_los.validate()?;
        Ok(())
    }

    pub fn los_profile(&self) -> StepLos {
        StepLos {
            cutoff: self.los_cutoff_d,
        }
    }

    pub fn alpha(&self, link: LinkType) -> f64 {
        match link {
            LinkType::Nlos => self.alpha_nlos,
            LinkType::Los => self.alpha_los,
        }
    }

    /// B^U = P_t A^U.
    pub fn gain_constant(&self, link: LinkType) -> f64 {
        match link {
            LinkType::Nlos => self.tx_power * self.a_nlos,
            LinkType::Los => self.tx_power * self.a_los,
        }
    }

    pub fn fading(&self, link: LinkType) -> FadingModel {
        match link {
            LinkType::Nlos => self.fading_nlos,
            LinkType::Los => self.fading_los,
        }
    }
}

pub fn los_probability(cfg: &NetworkConfig, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::domain(format!("distance must be >= 0, got {r}")));
    }
    Ok(cfg.los_profile().los_probability(r))
}

pub fn nlos_probability(cfg: &NetworkConfig, r: f64) -> Result<f64> {
    Ok(1.0 - los_probability(cfg, r)?)
}

/// Deterministic factor `B^U r^{-α^U}` of the received power.
pub fn path_gain(cfg: &NetworkConfig, link: LinkType, r: f64) -> Result<f64> {
    if !(r > 0.0) || r.is_infinite() {
        return Err(Error::domain(format!("path gain needs 0 < r < inf, got {r}")));
    }
    Ok(cfg.gain_constant(link) * r.powf(-cfg.alpha(link)))
}

pub fn received_power(cfg: &NetworkConfig, link: LinkType, r: f64, h: f64) -> Result<f64> {
    if !(h >= 0.0) {
        return Err(Error::domain(format!("fading gain must be >= 0, got {h}")));
    }
    Ok(h * path_gain(cfg, link, r)?)
}

pub fn sinr(serving_power: f64, interference_sum: f64, noise: f64) -> Result<f64> {
    if !(serving_power >= 0.0 && interference_sum >= 0.0 && noise >= 0.0) {
        return Err(Error::domain("sinr arguments must be >= 0"));
    }
    let denom = interference_sum + noise;
    if denom == 0.0 {
        return Err(Error::domain("sinr denominator is zero"));
    }
    Ok(serving_power / denom)
}

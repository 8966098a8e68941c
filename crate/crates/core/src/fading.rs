//! Unit-mean channel power-gain distributions.
//!
//! Every model is a Gamma(m, 1/m) law: Rayleigh is m = 1 and Rician(K)
//! is carried through its Nakagami fit m = (K+1)²/(2K+1).

use crate::error::{Error, Result};
use crate::special::{gamma_q, ln_gamma};
use crate::units;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FadingModel {
    Rayleigh,
    Nakagami {
        m: f64,
    },
    /// Rician with a linear K-factor.
    Rician {
        k: f64,
    },
}

pub fn rician_to_nakagami_m(k_linear: f64) -> Result<f64> {
    if !(k_linear >= 0.0) || k_linear.is_infinite() {
        return Err(Error::domain(format!(
            "Rician K must be finite and >= 0, got {k_linear}"
        )));
    }
    Ok((k_linear + 1.0).powi(2) / (2.0 * k_linear + 1.0))
}

impl FadingModel {
    pub fn rician_db(k_db: f64) -> Self {
        FadingModel::Rician {
            k: units::db_to_linear(k_db),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FadingModel::Rayleigh => Ok(()),
            FadingModel::Nakagami { m } => {
                if m.is_finite() && m >= 0.5 {
                    Ok(())
                } else {
                    Err(Error::config(format!("Nakagami m must be >= 0.5, got {m}")))
                }
            }
            FadingModel::Rician { k } => rician_to_nakagami_m(k)
                .map(|_| ())
                .map_err(|e| Error::config(e.to_string())),
        }
    }

    /// Shape of the Gamma(m, 1/m) power-gain law.
    pub fn gamma_shape(&self) -> f64 {
        match *self {
            FadingModel::Rayleigh => 1.0,
            FadingModel::Nakagami { m } => m,
            FadingModel::Rician { k } => (k + 1.0).powi(2) / (2.0 * k + 1.0),
        }
    }

    /// Density of the power gain at `h`.
    pub fn pdf(&self, h: f64) -> Result<f64> {
        if !(h >= 0.0) {
            return Err(Error::domain(format!("power gain must be >= 0, got {h}")));
        }
        Ok(gamma_pdf(self.gamma_shape(), h))
    }

    /// Smallest `h` (to bisection precision) with `Pr[H > h] <= tail`.
    pub fn tail_quantile(&self, tail: f64) -> f64 {
        let m = self.gamma_shape();
        let mut hi = 1.0;
        while gamma_q(m, m * hi) > tail {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if gamma_q(m, m * mid) > tail {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    /// `E[h^p]` for the unit-mean Gamma law.
    pub fn moment(&self, p: f64) -> f64 {
        let m = self.gamma_shape();
        (ln_gamma(m + p) - ln_gamma(m) - p * m.ln()).exp()
    }

    pub fn sampler(&self) -> GainSampler {
        let m = self.gamma_shape();
        if m == 1.0 {
            GainSampler::Exponential
        } else {
            GainSampler::Gamma(Gamma::new(m, 1.0 / m).expect("validated shape"))
        }
    }
}

fn gamma_pdf(m: f64, h: f64) -> f64 {
    if h == 0.0 {
        return if m < 1.0 {
            f64::INFINITY
        } else if m == 1.0 {
            1.0
        } else {
            0.0
        };
    }
    if m == 1.0 {
        return (-h).exp();
    }
    (m * m.ln() - ln_gamma(m) + (m - 1.0) * h.ln() - m * h).exp()
}

/// Draws unit-mean power gains. Gamma draws use Marsaglia-Tsang rejection
/// (with the `U^{1/m}` boost below shape 1), exact for fractional shapes.
#[derive(Debug, Clone, Copy)]
pub enum GainSampler {
    Exponential,
    Gamma(Gamma<f64>),
}

impl GainSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            GainSampler::Exponential => Exp1.sample(rng),
            GainSampler::Gamma(g) => g.sample(rng),
        }
    }
}

pub fn sample_power_gain<R: Rng + ?Sized>(model: &FadingModel, rng: &mut R) -> f64 {
    model.sampler().sample(rng)
}

impl fmt::Display for FadingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FadingModel::Rayleigh => f.write_str("rayleigh"),
            FadingModel::Nakagami { m } => write!(f, "nakagami:{m}"),
            FadingModel::Rician { k } => write!(f, "rician:{}", units::linear_to_db(k)),
        }
    }
}

/// Parses `rayleigh`, `nakagami:<m>` or `rician:<K_dB>`.
impl FromStr for FadingModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s, None),
        };
        let number = |a: Option<&str>| -> Result<f64> {
            let a = a.ok_or_else(|| Error::config(format!("fading model `{s}` needs a parameter")))?;
            a.parse::<f64>()
                .map_err(|_| Error::config(format!("bad fading parameter `{a}`")))
        };
        let model = match name.to_ascii_lowercase().as_str() {
            "rayleigh" if arg.is_none() => FadingModel::Rayleigh,
            "nakagami" => FadingModel::Nakagami { m: number(arg)? },
            "rician" => FadingModel::rician_db(number(arg)?),
            _ => return Err(Error::config(format!("unknown fading model `{s}`"))),
        };
        model.validate()?;
        Ok(model)
    }
}

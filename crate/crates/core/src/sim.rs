//! Monte Carlo simulator of the downlink seen by a user at the origin.
//!
//! Each trial draws a Poisson number of BSs uniformly on a disc, marks each
//! LOS with probability `p^L(r)`, draws a unit-mean fading gain per link type
//! and associates with the strongest received power. Trial `i` uses its own
//! ChaCha8 stream of the root seed, so results do not depend on scheduling.

use crate::error::{Error, Result};
use crate::fading::GainSampler;
use crate::model::{LinkType, LosProfile, NetworkConfig};
use crate::quad::pairwise_sum;
use crate::units::per_m2_to_per_km2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::io::Write;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;
/// Excluded-annulus interference allowed, relative to the included mean.
const TRUNCATION_RATIO: f64 = 1e-3;
const MIN_DISC_RADIUS: f64 = 3000.0;

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub cfg: NetworkConfig,
    /// Meters.
    pub disc_radius: f64,
    pub n_trials: u64,
    pub root_seed: u64,
}

impl SimConfig {
    /// Uses the smallest adequate disc radius for `cfg`.
    pub fn new(cfg: NetworkConfig, n_trials: u64, root_seed: u64) -> Result<Self> {
        let disc_radius = adequate_disc_radius(&cfg)?;
        Self::with_radius(cfg, disc_radius, n_trials, root_seed)
    }

    pub fn with_radius(cfg: NetworkConfig, disc_radius: f64, n_trials: u64, root_seed: u64) -> Result<Self> {
        cfg.validate()?;
        if n_trials == 0 {
            return Err(Error::config("n_trials must be >= 1"));
        }
        if !(disc_radius > 0.0 && disc_radius.is_finite()) {
            return Err(Error::config(format!(
                "disc radius must be positive, got {disc_radius}"
            )));
        }
        Ok(Self {
            cfg,
            disc_radius,
            n_trials,
            root_seed,
        })
    }

    /// Expected number of BSs on the disc.
    pub fn mean_bs_count(&self) -> f64 {
        self.cfg.bs_intensity * PI * self.disc_radius * self.disc_radius
    }
}

/// Mean interference from `[lo, hi]` for the step profile (all BSs beyond
/// the cutoff are NLOS), with unit-mean fading.
fn mean_power_between(cfg: &NetworkConfig, lo: f64, hi: f64) -> f64 {
    let piece = |link: LinkType, a: f64, b: f64| -> f64 {
        if b <= a {
            return 0.0;
        }
        let alpha = cfg.alpha(link);
        let k = 2.0 * PI * cfg.bs_intensity * cfg.gain_constant(link);
        if b.is_infinite() {
            k * a.powf(2.0 - alpha) / (alpha - 2.0)
        } else {
            k * (a.powf(2.0 - alpha) - b.powf(2.0 - alpha)) / (alpha - 2.0)
        }
    };
    let d = cfg.los_cutoff_d;
    piece(LinkType::Los, lo, hi.min(d)) + piece(LinkType::Nlos, lo.max(d), hi)
}

/// Starts at `max(3000 m, 10/√λ)` and doubles until the mean interference
/// beyond the disc is below 0.1% of the mean from `[0.5/√λ, R]`.
pub fn adequate_disc_radius(cfg: &NetworkConfig) -> Result<f64> {
    cfg.validate()?;
    let scale = 1.0 / cfg.bs_intensity.sqrt();
    let inner = 0.5 * scale;
    let mut r = MIN_DISC_RADIUS.max(10.0 * scale).max(2.0 * inner);
    for _ in 0..60 {
        let excluded = mean_power_between(cfg, r, f64::INFINITY);
        let included = mean_power_between(cfg, inner, r);
        if excluded < TRUNCATION_RATIO * included {
            return Ok(r);
        }
        r *= 2.0;
    }
    Err(Error::config("no adequate disc radius below 2^60 times the start"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub trial: u64,
    pub n_bs: u64,
    /// `None` when the realization is empty.
    pub serving_link: Option<LinkType>,
    pub serving_power: f64,
    pub interference: f64,
    /// Zero when the realization is empty.
    pub sinr: f64,
    pub max_power_index: Option<usize>,
    pub max_sinr_index: Option<usize>,
    /// Whether the SINR argmax is also a received-power argmax.
    pub association_consistent: bool,
    /// Smallest equivalent distance `(B h)^{-1/α} r` per link type, NLOS then LOS.
    pub min_equivalent_distance: [Option<f64>; 2],
}

fn trial_rng(root_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(root_seed);
    rng.set_stream(trial);
    rng
}

/// One independent realization; deterministic in `(root_seed, trial)`.
pub fn sample_realization(sim: &SimConfig, trial: u64) -> TrialOutcome {
    let cfg = &sim.cfg;
    let profile = cfg.los_profile();
    let mut rng = trial_rng(sim.root_seed, trial);
    let n_bs = Poisson::new(sim.mean_bs_count())
        .map(|p| p.sample(&mut rng) as u64)
        .unwrap_or(0);
    let samplers: [GainSampler; 2] = [cfg.fading_nlos.sampler(), cfg.fading_los.sampler()];
    let mut powers = Vec::with_capacity(n_bs as usize);
    let mut links = Vec::with_capacity(n_bs as usize);
    let mut min_equiv = [None::<f64>; 2];
    for _ in 0..n_bs {
        let mut u: f64 = rng.random();
        while u == 0.0 {
            u = rng.random();
        }
        let r = sim.disc_radius * u.sqrt();
        let link = if rng.random::<f64>() < profile.los_probability(r) {
            LinkType::Los
        } else {
            LinkType::Nlos
        };
        let idx = link_index(link);
        let h = samplers[idx].sample(&mut rng);
        let p = cfg.gain_constant(link) * h * r.powf(-cfg.alpha(link));
        let y = if p > 0.0 {
            p.powf(-1.0 / cfg.alpha(link))
        } else {
            f64::INFINITY
        };
        min_equiv[idx] = Some(min_equiv[idx].map_or(y, |m: f64| m.min(y)));
        powers.push(p);
        links.push(link);
    }
    let Some(best) = argmax(&powers) else {
        return TrialOutcome {
            trial,
            n_bs,
            serving_link: None,
            serving_power: 0.0,
            interference: 0.0,
            sinr: 0.0,
            max_power_index: None,
            max_sinr_index: None,
            association_consistent: true,
            min_equivalent_distance: min_equiv,
        };
    };
    let total = pairwise_sum(&powers);
    let eta = cfg.noise_power;
    let sinrs: Vec<f64> = powers.iter().map(|&p| p / ((total - p).max(0.0) + eta)).collect();
    let best_sinr = argmax(&sinrs).expect("nonempty");
    let serving_power = powers[best];
    let interference: f64 = pairwise_sum(
        &powers
            .iter()
            .enumerate()
            .map(|(i, &p)| if i == best { 0.0 } else { p })
            .collect::<Vec<_>>(),
    );
    let sinr = if interference + eta > 0.0 {
        serving_power / (interference + eta)
    } else {
        f64::INFINITY
    };
    TrialOutcome {
        trial,
        n_bs,
        serving_link: Some(links[best]),
        serving_power,
        interference,
        sinr,
        max_power_index: Some(best),
        max_sinr_index: Some(best_sinr),
        association_consistent: best == best_sinr || powers[best_sinr] == serving_power,
        min_equivalent_distance: min_equiv,
    }
}

fn link_index(link: LinkType) -> usize {
    match link {
        LinkType::Nlos => 0,
        LinkType::Los => 1,
    }
}

/// Index of the largest value, lowest index on ties.
fn argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if best.is_none_or(|b| v > values[b]) {
            best = Some(i);
        }
    }
    best
}

/// All trials in index order.
pub fn run_trials(sim: &SimConfig) -> Vec<TrialOutcome> {
    (0..sim.n_trials)
        .into_par_iter()
        .map(|i| sample_realization(sim, i))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageEstimate {
    pub n_trials: u64,
    pub p_hat: f64,
    /// 95% Wilson interval.
    pub ci_low: f64,
    pub ci_high: f64,
    /// Fractions of trials that are covered and served by each link type.
    pub p_nlos_branch: f64,
    pub p_los_branch: f64,
    pub association_violations: u64,
}

impl CoverageEstimate {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }
}

/// Wilson score interval for `successes` out of `n` at 95%.
pub fn wilson_interval(successes: u64, n: u64) -> (f64, f64) {
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Coverage at linear threshold `t` from precomputed trials.
pub fn coverage_from_outcomes(outcomes: &[TrialOutcome], t: f64) -> CoverageEstimate {
    let n = outcomes.len() as u64;
    let mut covered = [0u64; 2];
    let mut violations = 0;
    for o in outcomes {
        if !o.association_consistent {
            violations += 1;
        }
        if let Some(link) = o.serving_link {
            if o.sinr > t {
                covered[link_index(link)] += 1;
            }
        }
    }
    let total = covered[0] + covered[1];
    let (ci_low, ci_high) = wilson_interval(total, n);
    CoverageEstimate {
        n_trials: n,
        p_hat: total as f64 / n as f64,
        ci_low,
        ci_high,
        p_nlos_branch: covered[0] as f64 / n as f64,
        p_los_branch: covered[1] as f64 / n as f64,
        association_violations: violations,
    }
}

pub fn estimate_coverage(sim: &SimConfig, t: f64) -> Result<CoverageEstimate> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("threshold must be > 0, got {t}")));
    }
    Ok(coverage_from_outcomes(&run_trials(sim), t))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AseEstimate {
    /// bps/Hz/km².
    pub ase: f64,
    /// 95% CLT half-width, bps/Hz/km².
    pub half_width: f64,
}

/// `λ log2(1 + SINR)` averaged over trials.
pub fn ase_from_outcomes(lambda_per_m2: f64, outcomes: &[TrialOutcome]) -> AseEstimate {
    let n = outcomes.len() as f64;
    let rates: Vec<f64> = outcomes
        .iter()
        .map(|o| o.sinr.ln_1p() / std::f64::consts::LN_2)
        .collect();
    let mean = pairwise_sum(&rates) / n;
    let sq: Vec<f64> = rates.iter().map(|r| (r - mean) * (r - mean)).collect();
    let var = if n > 1.0 { pairwise_sum(&sq) / (n - 1.0) } else { 0.0 };
    let scale = per_m2_to_per_km2(lambda_per_m2);
    AseEstimate {
        ase: scale * mean,
        half_width: scale * Z95 * (var / n).sqrt(),
    }
}

pub fn estimate_ase(sim: &SimConfig) -> AseEstimate {
    ase_from_outcomes(sim.cfg.bs_intensity, &run_trials(sim))
}

pub const TRIAL_CSV_HEADER: &str = "trial,n_bs,serving_link,serving_power_w,interference_w,sinr";

/// Per-trial dump; the serving link is `none` for empty realizations.
pub fn write_trials_csv<W: Write>(outcomes: &[TrialOutcome], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{TRIAL_CSV_HEADER}")?;
    for o in outcomes {
        let link = o.serving_link.map_or("none", LinkType::as_str);
        writeln!(
            out,
            "{},{},{},{:.17e},{:.17e},{:.17e}",
            o.trial, o.n_bs, link, o.serving_power, o.interference, o.sinr
        )?;
    }
    Ok(())
}

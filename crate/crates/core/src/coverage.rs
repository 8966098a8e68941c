//! Coverage probability `p_c(λ, T) = Pr[SINR > T]` under strongest-power
//! association.
//!
//! For a serving link type `U` at equivalent distance `y`, the coverage
//! condition is `Z < a` with `Z = I y^{α_U}` the normalized interference and
//! `a = 1/T - η y^{α_U}`. `Z` is a Poisson shot noise over the displaced
//! processes beyond the serving point, so its Laplace transform is
//!
//! ```text
//! L_Z(s) = exp(-Σ_V ∫_{t0_V}^∞ (1 - e^{-s (t0_V/t)^{α_V}}) λ^V(t) dt),  t0_V = y^{α_U/α_V}
//! ```
//!
//! and the characteristic function of 1/SINR is `e^{jωη y^{α_U}} L_Z(-jω)`.
//!
//! The CDF of `Z` is recovered from `L_Z` in one of two ways:
//!
//! * [`Inversion::DampedContour`] (default): the inversion integral
//!   `∫ (1 - e^{-jω/T}) / (2πjω) F(ω) dω` has an entire integrand (every
//!   interferer contributes a bounded jump, so `L_Z` is entire), so its
//!   path may be shifted off the real axis. On the shifted line the
//!   trapezoidal rule with Euler summation (Abate-Whitt) converges
//!   geometrically, even when the interference is negligible next to the
//!   noise and the real-axis integrand decays only like `1/ω`.
//! * [`Inversion::RealAxis`]: the folded real-line integral
//!   `2 ∫_0^∞ Re{...} dω`, extended octave by octave. Kept as an
//!   independent cross-check for interference-limited settings.
//!
//! The branch terms `p_c^U = ∫ λ^U(y) e^{-Λ^U(y)} e^{-Λ^V(y^{α_U/α_V})} Pr[Z < a | y] dy`
//! are integrated adaptively in `ln y`.

use crate::error::{Error, Result};
use crate::intensity::{IntensityFns, LinkIntensity};
use crate::model::{LinkType, NetworkConfig};
use crate::quad::{integrate, Tolerance};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Damping of the shifted contour; aliasing error is about e^{-A}.
const EULER_A: f64 = 18.4;
const EULER_TERMS: usize = 15;
const EULER_AVERAGING: usize = 11;
/// Absolute accuracy of the interference exponents.
const EXPONENT_TOL: f64 = 1e-10;
/// Survival probability beyond which the serving-distance integral is cut.
const SURVIVAL_CUT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Inversion {
    #[default]
    DampedContour,
    RealAxis,
}

#[derive(Debug, Clone, Copy)]
pub struct CoverageOptions {
    /// Absolute tolerance on `p_c`.
    pub tol: f64,
    pub inversion: Inversion,
    /// Octave cap of the real-axis ω integral.
    pub max_octaves: usize,
}

impl Default for CoverageOptions {
    fn default() -> Self {
        Self {
            tol: 1e-3,
            inversion: Inversion::DampedContour,
            max_octaves: 48,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CoverageQuery {
    pub cfg: NetworkConfig,
    /// Linear SINR threshold.
    pub threshold: f64,
    /// Restrict the computation to one serving link type.
    pub branch: Option<LinkType>,
    pub options: CoverageOptions,
}

impl CoverageQuery {
    pub fn new(cfg: NetworkConfig, threshold: f64) -> Self {
        Self {
            cfg,
            threshold,
            branch: None,
            options: CoverageOptions::default(),
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.options.tol = tol;
        self
    }

    pub fn with_branch(mut self, branch: LinkType) -> Self {
        self.branch = Some(branch);
        self
    }

    pub fn with_inversion(mut self, inversion: Inversion) -> Self {
        self.options.inversion = inversion;
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    /// Serving-distance integrand evaluations.
    pub y_evaluations: usize,
    /// Integrand evaluations spent in the interference exponents.
    pub inner_evaluations: usize,
    /// Serving-distance truncation `(y_lo, y_hi)` per branch, NLOS then LOS.
    pub y_ranges: Vec<(LinkType, f64, f64)>,
    /// Largest error estimate of a conditional coverage evaluation.
    pub max_inversion_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageResult {
    pub p_nlos_branch: f64,
    pub p_los_branch: f64,
    pub p_total: f64,
    pub error_estimate: f64,
    pub diagnostics: Diagnostics,
}

/// The analytical engine for one network configuration.
#[derive(Debug, Clone)]
pub struct CoverageEngine {
    cfg: NetworkConfig,
    fns: IntensityFns,
    options: CoverageOptions,
}

/// Transform arguments `s_k = first + k·step`, `k < len`, all with `Re s >= 0`.
#[derive(Debug, Clone, Copy)]
struct Ladder {
    first: Complex64,
    step: Complex64,
    len: usize,
}

impl Ladder {
    fn single(s: Complex64) -> Self {
        Self {
            first: s,
            step: Complex64::new(0.0, 0.0),
            len: 1,
        }
    }

    fn get(&self, k: usize) -> Complex64 {
        self.first + self.step * k as f64
    }

    fn max_norm(&self) -> f64 {
        self.first.norm().max(self.get(self.len - 1).norm())
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Work {
    evals: usize,
}

impl CoverageEngine {
    pub fn new(cfg: &NetworkConfig) -> Result<Self> {
        Self::with_intensity(cfg, IntensityFns::new(cfg)?)
    }

    /// Uses caller-provided intensity functions, e.g. the general route.
    pub fn with_intensity(cfg: &NetworkConfig, fns: IntensityFns) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg: cfg.clone(),
            fns,
            options: CoverageOptions::default(),
        })
    }

    pub fn with_options(mut self, options: CoverageOptions) -> Self {
        self.options = options;
        self
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.cfg
    }

    pub fn intensity(&self) -> &IntensityFns {
        &self.fns
    }

    /// `t0 = y^{α_U/α_V}`: the displaced radius of process `V` whose points
    /// would deliver the same power as the serving point.
    fn mapped_radius(&self, serving: LinkType, y: f64, other: LinkType) -> f64 {
        (self.cfg.alpha(serving) / self.cfg.alpha(other) * y.ln()).exp()
    }

    /// `Pr[P^U > P^V | Y^U = y] = exp(-Λ^V([0, y^{α_U/α_V}]))`.
    pub fn association_prob_given_y(&self, serving: LinkType, y: f64) -> Result<f64> {
        check_y(y)?;
        let other = serving.other();
        let t = self.mapped_radius(serving, y, other);
        Ok((-self.fns.get(other).measure(t)).exp())
    }

    /// Density of the smallest equivalent distance of process `U`:
    /// `λ^U(y) exp(-Λ^U([0,y]))`. It integrates to the probability that the
    /// process is nonempty.
    pub fn serving_distance_pdf(&self, serving: LinkType, y: f64) -> Result<f64> {
        check_y(y)?;
        let li = self.fns.get(serving);
        Ok(li.density(y) * (-li.measure(y)).exp())
    }

    /// `Σ_V ∫_{t0_V}^∞ (1 - e^{-s (t0_V/t)^{α_V}}) λ^V(t) dt` for every `s`
    /// on the ladder, sharing quadrature nodes.
    fn interference_exponents(
        &self,
        serving: LinkType,
        y: f64,
        points: &Ladder,
        work: &mut Work,
    ) -> Result<Vec<Complex64>> {
        let s_max = points.max_norm();
        let mut total = vec![Complex64::new(0.0, 0.0); points.len];
        if s_max == 0.0 {
            return Ok(total);
        }
        for link in LinkType::BOTH {
            let li = self.fns.get(link);
            let t0 = self.mapped_radius(serving, y, link);
            let part = shot_noise_exponent(li, t0, points, s_max, work).map_err(|e| match e {
                Error::Numerical {
                    achieved,
                    target,
                    partial,
                    ..
                } => Error::Numerical {
                    context: format!("interference exponent ({link} interferers, serving {serving}, y={y:.6e})"),
                    achieved,
                    target,
                    partial,
                },
                other => other,
            })?;
            for (acc, v) in total.iter_mut().zip(part) {
                *acc += v;
            }
        }
        Ok(total)
    }

    fn noise_shift(&self, serving: LinkType, y: f64) -> f64 {
        if self.cfg.noise_power == 0.0 {
            0.0
        } else {
            (self.cfg.noise_power.ln() + self.cfg.alpha(serving) * y.ln()).exp()
        }
    }

    /// Conditional characteristic function of 1/SINR given the serving
    /// point at equivalent distance `y`.
    pub fn characteristic_fn(&self, serving: LinkType, y: f64, omega: f64) -> Result<Complex64> {
        check_y(y)?;
        if omega == 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let mut work = Work::default();
        let s = Complex64::new(0.0, -omega);
        let j = self.interference_exponents(serving, y, &Ladder::single(s), &mut work)?[0];
        let phase = Complex64::new(0.0, omega * self.noise_shift(serving, y));
        Ok((phase - j).exp())
    }

    /// `Pr[SINR > T | serving U at equivalent distance y]`.
    pub fn conditional_coverage(&self, serving: LinkType, y: f64, threshold: f64) -> Result<f64> {
        let mut work = Work::default();
        Ok(self.conditional_coverage_inner(serving, y, threshold, &mut work)?.0)
    }

    /// Same as [`conditional_coverage`](Self::conditional_coverage) with the
    /// inversion route chosen explicitly; also returns the error estimate.
    pub fn conditional_coverage_with(
        &self,
        serving: LinkType,
        y: f64,
        threshold: f64,
        inversion: Inversion,
    ) -> Result<(f64, f64)> {
        let mut work = Work::default();
        check_y(y)?;
        check_threshold(threshold)?;
        match inversion {
            Inversion::DampedContour => {
                let a = 1.0 / threshold - self.noise_shift(serving, y);
                if a <= 0.0 {
                    return Ok((0.0, 0.0));
                }
                self.cdf_damped_contour(serving, y, a, &mut work)
            }
            Inversion::RealAxis => self.cdf_real_axis(serving, y, threshold, &mut work),
        }
    }

    fn conditional_coverage_inner(
        &self,
        serving: LinkType,
        y: f64,
        threshold: f64,
        work: &mut Work,
    ) -> Result<(f64, f64)> {
        check_y(y)?;
        check_threshold(threshold)?;
        match self.options.inversion {
            Inversion::DampedContour => {
                let a = 1.0 / threshold - self.noise_shift(serving, y);
                if a <= 0.0 {
                    return Ok((0.0, 0.0));
                }
                self.cdf_damped_contour(serving, y, a, work)
            }
            Inversion::RealAxis => self.cdf_real_axis(serving, y, threshold, work),
        }
    }

    /// `Pr[Z <= a]` from the trapezoidal rule on the line `Re s = A/(2a)`
    /// with Euler summation of the alternating tail.
    fn cdf_damped_contour(&self, serving: LinkType, y: f64, a: f64, work: &mut Work) -> Result<(f64, f64)> {
        let n = EULER_TERMS + EULER_AVERAGING + 1;
        let ladder = Ladder {
            first: Complex64::new(EULER_A / (2.0 * a), 0.0),
            step: Complex64::new(0.0, PI / a),
            len: n,
        };
        let exps = self.interference_exponents(serving, y, &ladder, work)?;
        let mut partial = Vec::with_capacity(n);
        let mut acc = 0.0;
        for (k, j) in exps.iter().enumerate() {
            let term = ((-j).exp() / ladder.get(k)).re;
            acc += match k {
                0 => 0.5 * term,
                _ if k % 2 == 1 => -term,
                _ => term,
            };
            partial.push(acc);
        }
        let euler = |start: usize| -> f64 {
            let mut binom = 1.0;
            let mut sum = 0.0;
            for j in 0..=EULER_AVERAGING {
                sum += binom * partial[start + j];
                binom = binom * (EULER_AVERAGING - j) as f64 / (j + 1) as f64;
            }
            sum / 2f64.powi(EULER_AVERAGING as i32)
        };
        let scale = (EULER_A / 2.0).exp() / a;
        let value = scale * euler(EULER_TERMS);
        let previous = scale * euler(EULER_TERMS - 1);
        let error = (value - previous).abs() + (-EULER_A).exp();
        Ok((value.clamp(0.0, 1.0), error))
    }

    /// Folded real-axis inversion of `∫ (1 - e^{-jω/T}) / (2πjω) F(ω) dω`.
    fn cdf_real_axis(&self, serving: LinkType, y: f64, threshold: f64, work: &mut Work) -> Result<(f64, f64)> {
        let x = 1.0 / threshold;
        let c = self.noise_shift(serving, y);
        let tol = self.options.tol / 3.0;
        let integrand = |omega: f64, work: &mut Work| -> Result<f64> {
            let f = if omega == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                let j = self.interference_exponents(serving, y, &Ladder::single(Complex64::new(0.0, -omega)), work)?;
                (Complex64::new(0.0, omega * c) - j[0]).exp()
            };
            let u = omega * x;
            // (1 - e^{-jωx}) / (jω), with its Taylor series near ω = 0
            let bracket = if u.abs() < 1e-4 {
                Complex64::new(x * (1.0 - u * u / 6.0), -x * u / 2.0)
            } else {
                (Complex64::new(1.0, 0.0) - Complex64::new(0.0, -u).exp()) / Complex64::new(0.0, omega)
            };
            Ok((bracket * f).re / PI)
        };
        let first = 2.0 * PI / x.max(c);
        let seg_tol = Tolerance::new(tol / 20.0, 1e-8).with_max_intervals(200);
        let mut total = 0.0;
        let mut err = 0.0;
        let mut lo = 0.0;
        let mut hi = first;
        for _ in 0..self.options.max_octaves {
            let mut failure = None;
            let r = integrate(
                |w| match integrand(w, work) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                },
                lo,
                hi,
                seg_tol,
            );
            if let Some(e) = failure {
                return Err(e);
            }
            total += r.value;
            err += r.error;
            let tail_f = self.characteristic_fn(serving, y, hi)?.norm();
            if r.value.abs() < tol / 10.0 && tail_f < tol {
                return Ok((total.clamp(0.0, 1.0), err + r.value.abs()));
            }
            lo = hi;
            hi *= 2.0;
        }
        Err(Error::Numerical {
            context: format!("real-axis ω integral (serving {serving}, y={y:.6e}) hit the octave cap at ω={lo:.3e}"),
            achieved: err,
            target: tol,
            partial: Some(total),
        })
    }

    /// `(y_lo, y_hi)` such that the branch mass outside is below the
    /// truncation budget.
    fn y_range(&self, serving: LinkType, lower_mass: f64) -> (f64, f64) {
        let li = self.fns.get(serving);
        let other = self.fns.get(serving.other());
        let ratio = self.cfg.alpha(serving) / self.cfg.alpha(serving.other());
        // ∫_0^{y_lo} f ≤ Λ^U(y_lo)
        let lo = bisect_ln(|v| li.measure(v.exp()) < lower_mass);
        // ∫_{y_hi}^∞ f·assoc ≤ exp(-Λ^U(y_hi) - Λ^V(y_hi^ratio))
        let hi = bisect_ln(|v| li.measure(v.exp()) + other.measure((ratio * v).exp()) < -SURVIVAL_CUT.ln());
        (lo.exp(), hi.exp())
    }

    /// One branch term `p_c^U(λ, T)` with its error estimate.
    pub fn branch(&self, serving: LinkType, threshold: f64) -> Result<(f64, f64, Diagnostics)> {
        check_threshold(threshold)?;
        let tol = self.options.tol;
        let mut diag = Diagnostics::default();
        let (y_lo, mut y_hi) = self.y_range(serving, tol * 1e-4);
        // beyond y_c the noise alone exceeds the SINR budget
        if self.cfg.noise_power > 0.0 {
            let y_c = ((-(threshold.ln()) - self.cfg.noise_power.ln()) / self.cfg.alpha(serving)).exp();
            y_hi = y_hi.min(y_c);
        }
        diag.y_ranges.push((serving, y_lo, y_hi));
        if y_hi <= y_lo {
            return Ok((0.0, tol * 1e-4 + SURVIVAL_CUT, diag));
        }
        let li = self.fns.get(serving);
        let mut work = Work::default();
        let mut failure: Option<Error> = None;
        let mut max_inv_err: f64 = 0.0;
        let mut y_evals = 0;
        let integrand = |v: f64| -> f64 {
            if failure.is_some() {
                return 0.0;
            }
            y_evals += 1;
            let y = v.exp();
            let dens = li.density(y);
            if dens == 0.0 {
                return 0.0;
            }
            let weight = y * dens * (-li.measure(y)).exp() * self.association_prob_given_y(serving, y).unwrap_or(0.0);
            if weight == 0.0 {
                return 0.0;
            }
            match self.conditional_coverage_inner(serving, y, threshold, &mut work) {
                Ok((p, e)) => {
                    max_inv_err = max_inv_err.max(e);
                    weight * p
                }
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        };
        let r = integrate(
            integrand,
            y_lo.ln(),
            y_hi.ln(),
            Tolerance::new(tol / 6.0, 0.0).with_max_intervals(200),
        );
        if let Some(e) = failure {
            return Err(e);
        }
        diag.y_evaluations = y_evals;
        diag.inner_evaluations = work.evals;
        diag.max_inversion_error = max_inv_err;
        let error = r.error + max_inv_err + tol * 1e-4 + SURVIVAL_CUT;
        if !r.converged {
            return Err(Error::Numerical {
                context: format!("serving-distance integral ({serving} branch)"),
                achieved: r.error,
                target: tol / 6.0,
                partial: Some(r.value),
            });
        }
        Ok((r.value.max(0.0), error, diag))
    }

    /// Both branch terms and their sum.
    pub fn coverage(&self, threshold: f64) -> Result<CoverageResult> {
        self.coverage_branches(threshold, None)
    }

    fn coverage_branches(&self, threshold: f64, only: Option<LinkType>) -> Result<CoverageResult> {
        let mut diag = Diagnostics::default();
        let mut p = [0.0; 2];
        let mut err = 0.0;
        for (i, link) in LinkType::BOTH.into_iter().enumerate() {
            if only.is_some_and(|b| b != link) {
                continue;
            }
            let (v, e, d) = self.branch(link, threshold)?;
            p[i] = v;
            err += e;
            diag.y_evaluations += d.y_evaluations;
            diag.inner_evaluations += d.inner_evaluations;
            diag.y_ranges.extend(d.y_ranges);
            diag.max_inversion_error = diag.max_inversion_error.max(d.max_inversion_error);
        }
        let total = p[0] + p[1];
        Ok(CoverageResult {
            p_nlos_branch: p[0],
            p_los_branch: p[1],
            p_total: total.min(1.0),
            error_estimate: err,
            diagnostics: diag,
        })
    }
}

/// Coverage probability for a query, building a fresh engine.
pub fn coverage_probability(query: &CoverageQuery) -> Result<CoverageResult> {
    if !(query.options.tol > 0.0) {
        return Err(Error::config("tolerance must be > 0"));
    }
    let engine = CoverageEngine::new(&query.cfg)?.with_options(query.options);
    engine.coverage_branches(query.threshold, query.branch)
}

fn check_y(y: f64) -> Result<()> {
    if y > 0.0 && y.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "equivalent distance must be in (0, inf), got {y}"
        )))
    }
}

fn check_threshold(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("threshold must be in (0, inf), got {t}")))
    }
}

/// Largest `v` in [-60, 80] (natural-log units) with `pred(v)` true, for a
/// predicate that is true below some point and false above it.
fn bisect_ln<F: Fn(f64) -> bool>(pred: F) -> f64 {
    let (mut lo, mut hi) = (-60.0, 80.0);
    if !pred(lo) {
        return lo;
    }
    if pred(hi) {
        return hi;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 {
            break;
        }
    }
    lo
}

/// `1 - e^{-z}` without cancellation for small `|z|`.
fn one_minus_exp_neg(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        z * (1.0 - z / 2.0 * (1.0 - z / 3.0 * (1.0 - z / 4.0)))
    } else {
        1.0 - (-z).exp()
    }
}

/// `∫_{t0}^∞ (1 - e^{-s (t0/t)^α}) λ(t) dt` for every `s`, integrated in
/// `w = ln(t/t0)` up to a point where the far-field bound is below tolerance.
fn shot_noise_exponent(
    li: &LinkIntensity,
    t0: f64,
    points: &Ladder,
    s_max: f64,
    work: &mut Work,
) -> Result<Vec<Complex64>> {
    let alpha = li.alpha();
    // |1 - e^{-z}| <= |z| for Re z >= 0 bounds the tail by s_max t0^α ∫ t^{-α} λ
    let tail = |w: f64| s_max * (alpha * t0.ln()).exp() * li.far_field_bound(t0 * w.exp());
    let mut w_max = 4.0;
    while tail(w_max) > EXPONENT_TOL * 0.1 {
        w_max *= 1.5;
        if w_max > 2000.0 {
            return Err(Error::Numerical {
                context: String::new(),
                achieved: tail(w_max),
                target: EXPONENT_TOL,
                partial: None,
            });
        }
    }
    let mut evals = 0;
    let integrand = |w: f64| -> Vec<Complex64> {
        evals += 1;
        let t = t0 * w.exp();
        let weight = li.density(t) * t;
        if weight == 0.0 {
            return vec![Complex64::new(0.0, 0.0); points.len];
        }
        let g = (-alpha * w).exp();
        if s_max * g < 1e-3 {
            return (0..points.len)
                .map(|k| one_minus_exp_neg(points.get(k) * g) * weight)
                .collect();
        }
        // e^{-s_k g} by recurrence along the ladder
        let ratio = (-points.step * g).exp();
        let mut e = (-points.first * g).exp();
        let mut out = Vec::with_capacity(points.len);
        for _ in 0..points.len {
            out.push((1.0 - e) * weight);
            e *= ratio;
        }
        out
    };
    let r = integrate(
        integrand,
        0.0,
        w_max,
        Tolerance::new(EXPONENT_TOL, 1e-9).with_max_intervals(2000),
    );
    work.evals += evals;
    // a loose exponent is harmless once e^{-J} underflows
    let underflows = r.value.iter().all(|j| j.re - r.error > 750.0);
    if !r.converged && !underflows {
        return Err(Error::Numerical {
            context: String::new(),
            achieved: r.error,
            target: EXPONENT_TOL,
            partial: None,
        });
    }
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::FadingModel;
    use proptest::prelude::*;
    use std::time::Instant;

    fn single_slope(d: f64) -> NetworkConfig {
        NetworkConfig::urban_default()
            .with_exponents(4.0, 4.0)
            .with_noise_power(0.0)
            .with_los_cutoff(d)
            .with_intensity_per_km2(10.0)
    }

    // strongest-instantaneous-power association, α = 4, T >= 1
    fn single_slope_exact(t: f64) -> f64 {
        2.0 / (PI * t.sqrt())
    }

    #[test]
    fn single_slope_all_nlos() {
        let start = Instant::now();
        let r = coverage_probability(&CoverageQuery::new(single_slope(1e-6), 1.0)).unwrap();
        eprintln!("{:?} in {:?}", r, start.elapsed());
        assert!((r.p_total - single_slope_exact(1.0)).abs() < 1e-3);
        assert!(r.p_los_branch < 1e-6);
    }

    #[test]
    fn single_slope_all_los() {
        let r = coverage_probability(&CoverageQuery::new(single_slope(1e9), 1.0)).unwrap();
        assert!((r.p_total - single_slope_exact(1.0)).abs() < 1e-3, "{r:?}");
        assert!(r.p_nlos_branch < 1e-6);
    }

    #[test]
    fn single_slope_threshold_sweep() {
        let engine = CoverageEngine::new(&single_slope(1e-6)).unwrap();
        for t_db in [0.0, 5.0, 10.0, 20.0] {
            let t = 10f64.powf(t_db / 10.0);
            let r = engine.coverage(t).unwrap();
            assert!((r.p_total - single_slope_exact(t)).abs() < 1e-3, "T={t_db} dB: {r:?}");
        }
    }

    #[test]
    fn urban_default_timing() {
        let cfg = NetworkConfig::urban_default();
        let start = Instant::now();
        let r = coverage_probability(&CoverageQuery::new(cfg, 1.0)).unwrap();
        eprintln!("urban {:?} in {:?}", r, start.elapsed());
        assert!(r.p_total > 0.0 && r.p_total <= 1.0);
    }

    #[test]
    fn characteristic_fn_basic_properties() {
        let cfg = NetworkConfig::urban_default().with_intensity_per_km2(100.0);
        let e = CoverageEngine::new(&cfg).unwrap();
        for link in LinkType::BOTH {
            for y in [1.0, 1e2, 1e4] {
                assert_eq!(e.characteristic_fn(link, y, 0.0).unwrap(), Complex64::new(1.0, 0.0));
                for w in [1e-3, 0.1, 1.0, 10.0, 1e3] {
                    let f = e.characteristic_fn(link, y, w).unwrap();
                    let g = e.characteristic_fn(link, y, -w).unwrap();
                    assert!(f.norm() <= 1.0 + 1e-9);
                    assert!((f - g.conj()).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn noise_only_limit_is_a_step() {
        let cfg = NetworkConfig::urban_default().with_intensity_per_km2(1e-12);
        let e = CoverageEngine::new(&cfg).unwrap();
        let t = 1.0;
        let y_c = (1.0 / (t * cfg.noise_power)).powf(1.0 / cfg.alpha_nlos);
        let below = e.conditional_coverage(LinkType::Nlos, 0.9 * y_c, t).unwrap();
        let above = e.conditional_coverage(LinkType::Nlos, 1.1 * y_c, t).unwrap();
        assert!((below - 1.0).abs() < 1e-6, "{below}");
        assert_eq!(above, 0.0);
    }

    #[test]
    fn inversion_routes_agree() {
        let urban = NetworkConfig::urban_default()
            .with_noise_power(0.0)
            .with_intensity_per_km2(100.0);
        for (cfg, link) in [
            (&urban, LinkType::Nlos),
            (&urban, LinkType::Los),
            (&single_slope(1e-6), LinkType::Nlos),
        ] {
            let e = CoverageEngine::new(cfg).unwrap().with_options(CoverageOptions {
                tol: 1e-5,
                ..Default::default()
            });
            // median serving distance of the branch
            let y = bisect_ln(|v| e.intensity().get(link).measure(v.exp()) < 2f64.ln()).exp();
            for t in [0.5, 2.0] {
                let start = Instant::now();
                let (a, _) = e
                    .conditional_coverage_with(link, y, t, Inversion::DampedContour)
                    .unwrap();
                let (b, _) = e.conditional_coverage_with(link, y, t, Inversion::RealAxis).unwrap();
                eprintln!("{link} y={y:.1} T={t}: {a} vs {b} ({:?})", start.elapsed());
                assert!((a - b).abs() < 1e-4, "{link} y={y} T={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn serving_pdf_mass() {
        let cfg = NetworkConfig::urban_default().with_intensity_per_km2(1.0);
        let e = CoverageEngine::new(&cfg).unwrap();
        for link in LinkType::BOTH {
            let r = integrate(
                |v: f64| v.exp() * e.serving_distance_pdf(link, v.exp()).unwrap(),
                -40.0,
                60.0,
                Tolerance::new(1e-12, 1e-10),
            );
            let expected = -(-e.intensity().get(link).total_mass()).exp_m1();
            assert!((r.value - expected).abs() < 1e-6, "{link}: {} vs {expected}", r.value);
        }
    }

    #[test]
    fn sir_dominates_sinr() {
        let cfg = NetworkConfig::urban_default().with_intensity_per_km2(1.0);
        let e_sinr = CoverageEngine::new(&cfg).unwrap();
        let e_sir = CoverageEngine::new(&cfg.clone().with_noise_power(0.0)).unwrap();
        let a = e_sinr.coverage(1.0).unwrap().p_total;
        let b = e_sir.coverage(1.0).unwrap().p_total;
        assert!(b >= a - 2e-3, "{b} < {a}");
    }

    #[test]
    fn vanishing_threshold_gives_certain_coverage() {
        let cfg = NetworkConfig::urban_default()
            .with_noise_power(0.0)
            .with_intensity_per_km2(10.0);
        let r = CoverageEngine::new(&cfg).unwrap().coverage(1e-6).unwrap();
        assert!((r.p_total - 1.0).abs() < 2e-3, "{r:?}");
    }

    #[test]
    fn rejects_bad_inputs() {
        let e = CoverageEngine::new(&NetworkConfig::urban_default()).unwrap();
        assert!(e.coverage(0.0).is_err());
        assert!(e.coverage(f64::NAN).is_err());
        assert!(e.conditional_coverage(LinkType::Los, -1.0, 1.0).is_err());
    }

    #[test]
    fn nakagami_pairing_runs() {
        let cfg = NetworkConfig::urban_default()
            .with_fading(FadingModel::Nakagami { m: 2.0 }, FadingModel::Nakagami { m: 5.0 });
        let r = CoverageEngine::new(&cfg).unwrap().coverage(1.0).unwrap();
        assert!(r.p_total > 0.0 && r.p_total <= 1.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(6))]
        #[test]
        fn monotone_in_threshold(t_db in -5.0f64..15.0, lambda in 0.5f64..200.0) {
            let cfg = NetworkConfig::urban_default().with_intensity_per_km2(lambda);
            let e = CoverageEngine::new(&cfg).unwrap();
            let lo = 10f64.powf(t_db / 10.0);
            let a = e.coverage(lo).unwrap().p_total;
            let b = e.coverage(lo * 2.0).unwrap().p_total;
            prop_assert!(b <= a + 2e-3, "{} > {}", b, a);
        }
    }
}

//! Area spectral efficiency `ASE(λ) = λ E[log2(1 + SINR)]`.
//!
//! With `E[ln(1+X)] = ∫_0^∞ Pr[X > u] / (1+u) du` the ASE is a semi-infinite
//! integral of the coverage probability over the threshold. It is evaluated
//! with a Gauss-Chebyshev rule after mapping `u = tan θ`.

use crate::coverage::{CoverageEngine, CoverageOptions};
use crate::error::{Error, Result};
use crate::model::NetworkConfig;
use crate::quad::pairwise_sum;
use crate::units::per_m2_to_per_km2;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_4, LN_2, PI};

pub const DEFAULT_NG: usize = 101;

/// Gauss-Chebyshev nodes and weights on `(0, ∞)`, nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct GcqRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GcqRule {
    pub fn new(n_points: usize) -> Result<Self> {
        if n_points == 0 {
            return Err(Error::config("N_G must be >= 1"));
        }
        let n_g = n_points as f64;
        let mut pairs: Vec<(f64, f64)> = (1..=n_points)
            .map(|n| {
                let phase = (2.0 * n as f64 - 1.0) * PI / (2.0 * n_g);
                let theta = FRAC_PI_4 * phase.cos() + FRAC_PI_4;
                let w = PI * PI * phase.sin() / (4.0 * n_g * theta.cos().powi(2));
                (theta.tan(), w)
            })
            .collect();
        pairs.reverse();
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(Self { nodes, weights })
    }

    pub fn n_points(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ w_n f(u_n)`, an approximation of `∫_0^∞ f(u) du`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let terms: Vec<f64> = self.nodes.iter().zip(&self.weights).map(|(&u, &w)| w * f(u)).collect();
        pairwise_sum(&terms)
    }
}

impl Default for GcqRule {
    fn default() -> Self {
        Self::new(DEFAULT_NG).expect("default N_G is positive")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AseResult {
    pub lambda_per_km2: f64,
    /// bps/Hz/km².
    pub ase: f64,
    /// Coverage probability at each node, in node order.
    pub node_coverage: Vec<f64>,
    /// Propagated coverage error bound, bps/Hz/km².
    pub error_estimate: f64,
}

/// ASE in bps/Hz/m² for an arbitrary coverage function of the threshold.
/// Nodes are evaluated in parallel; the first failing node aborts.
pub fn ase_with<F>(lambda_per_m2: f64, rule: &GcqRule, coverage: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let pcs = node_values(rule, |u| coverage(u).map(|p| (p, 0.0)))?;
    Ok(weighted(lambda_per_m2, rule, pcs.iter().map(|v| v.0)))
}

fn node_values<F>(rule: &GcqRule, f: F) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> Result<(f64, f64)> + Sync,
{
    rule.nodes.par_iter().map(|&u| f(u)).collect()
}

fn weighted(lambda_per_m2: f64, rule: &GcqRule, values: impl Iterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .zip(values)
        .map(|((&u, &w), p)| w * p / (1.0 + u))
        .collect();
    lambda_per_m2 / LN_2 * pairwise_sum(&terms)
}

/// Analytical ASE of `cfg` at its configured intensity.
pub fn ase(cfg: &NetworkConfig, rule: &GcqRule, options: CoverageOptions) -> Result<AseResult> {
    let engine = CoverageEngine::new(cfg)?.with_options(options);
    let values = node_values(rule, |u| {
        engine
            .coverage(u)
            .map(|r| (r.p_total, r.error_estimate))
            .map_err(|e| annotate(e, u))
    })?;
    let lambda = cfg.bs_intensity;
    let ase = weighted(lambda, rule, values.iter().map(|v| v.0));
    let err = weighted(lambda, rule, values.iter().map(|v| v.1));
    Ok(AseResult {
        lambda_per_km2: per_m2_to_per_km2(lambda),
        ase: per_m2_to_per_km2(ase),
        node_coverage: values.iter().map(|v| v.0).collect(),
        error_estimate: per_m2_to_per_km2(err),
    })
}

fn annotate(e: Error, u: f64) -> Error {
    match e {
        Error::Numerical {
            context,
            achieved,
            target,
            partial,
        } => Error::Numerical {
            context: format!("ASE node u={u:.6e}: {context}"),
            achieved,
            target,
            partial,
        },
        other => other,
    }
}

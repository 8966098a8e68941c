//! Flat `key = value` configuration text.
//!
//! Keys and units: `tx_power_dbm`, `noise_dbm` (`none` for zero noise),
//! `d_m`, `lambda_per_km2`, `alpha_nlos`, `alpha_los`, `a_nlos_log10`,
//! `a_los_log10`, `fading_nlos`, `fading_los`, `nakagami_m`, `rician_k_db`.
//! A bare `nakagami` or `rician` fading value takes its parameter from
//! `nakagami_m` or `rician_k_db`. `#` starts a comment. Unset keys keep the
//! urban defaults.

use crate::error::{Error, Result};
use crate::fading::FadingModel;
use crate::model::NetworkConfig;
use crate::units::{dbm_to_watts, per_km2_to_per_m2, per_m2_to_per_km2, watts_to_dbm};
use std::collections::BTreeMap;

const KEYS: [&str; 12] = [
    "tx_power_dbm",
    "noise_dbm",
    "d_m",
    "lambda_per_km2",
    "alpha_nlos",
    "alpha_los",
    "a_nlos_log10",
    "a_los_log10",
    "fading_nlos",
    "fading_los",
    "nakagami_m",
    "rician_k_db",
];

/// Parses configuration text on top of [`NetworkConfig::urban_default`].
pub fn parse_config(text: &str) -> Result<NetworkConfig> {
    apply(NetworkConfig::urban_default(), text)
}

/// Applies the keys present in `text` to `base` and validates the result.
pub fn apply(base: NetworkConfig, text: &str) -> Result<NetworkConfig> {
    let mut entries = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::config(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(Error::config(format!("line {}: unknown key `{key}`", lineno + 1)));
        }
        if entries.insert(key, value.trim()).is_some() {
            return Err(Error::config(format!("line {}: duplicate key `{key}`", lineno + 1)));
        }
    }
    let number = |key: &str| -> Result<Option<f64>> {
        entries
            .get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Error::config(format!("`{key}`: not a number: `{v}`")))
            })
            .transpose()
    };
    let mut cfg = base;
    if let Some(v) = number("tx_power_dbm")? {
        cfg.tx_power = dbm_to_watts(v);
    }
    match entries.get("noise_dbm") {
        Some(v) if v.eq_ignore_ascii_case("none") => cfg.noise_power = 0.0,
        Some(_) => cfg.noise_power = dbm_to_watts(number("noise_dbm")?.expect("present")),
        None => {}
    }
    if let Some(v) = number("d_m")? {
        cfg.los_cutoff_d = v;
    }
    if let Some(v) = number("lambda_per_km2")? {
        cfg.bs_intensity = per_km2_to_per_m2(v);
    }
    if let Some(v) = number("alpha_nlos")? {
        cfg.alpha_nlos = v;
    }
    if let Some(v) = number("alpha_los")? {
        cfg.alpha_los = v;
    }
    if let Some(v) = number("a_nlos_log10")? {
        cfg.a_nlos = 10f64.powf(v);
    }
    if let Some(v) = number("a_los_log10")? {
        cfg.a_los = 10f64.powf(v);
    }
    let m = number("nakagami_m")?;
    let k_db = number("rician_k_db")?;
    let fading = |key: &str| -> Result<Option<FadingModel>> {
        let Some(v) = entries.get(key) else { return Ok(None) };
        let spec = match v.to_ascii_lowercase().as_str() {
            "nakagami" => format!(
                "nakagami:{}",
                m.ok_or_else(|| Error::config(format!("`{key}` needs nakagami_m")))?
            ),
            "rician" => format!(
                "rician:{}",
                k_db.ok_or_else(|| Error::config(format!("`{key}` needs rician_k_db")))?
            ),
            _ => v.to_string(),
        };
        spec.parse().map(Some)
    };
    if let Some(f) = fading("fading_nlos")? {
        cfg.fading_nlos = f;
    }
    if let Some(f) = fading("fading_los")? {
        cfg.fading_los = f;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Renders `cfg` as `key=value` pairs joined by `sep`; parsing the
/// newline-joined form restores `cfg` up to unit-conversion rounding.
pub fn render(cfg: &NetworkConfig, sep: &str) -> String {
    let noise = if cfg.noise_power == 0.0 {
        "none".to_string()
    } else {
        format!("{}", watts_to_dbm(cfg.noise_power))
    };
    [
        format!("tx_power_dbm={}", watts_to_dbm(cfg.tx_power)),
        format!("noise_dbm={noise}"),
        format!("d_m={}", cfg.los_cutoff_d),
        format!("lambda_per_km2={}", per_m2_to_per_km2(cfg.bs_intensity)),
        format!("alpha_nlos={}", cfg.alpha_nlos),
        format!("alpha_los={}", cfg.alpha_los),
        format!("a_nlos_log10={}", cfg.a_nlos.log10()),
        format!("a_los_log10={}", cfg.a_los.log10()),
        format!("fading_nlos={}", cfg.fading_nlos),
        format!("fading_los={}", cfg.fading_los),
    ]
    .join(sep)
}

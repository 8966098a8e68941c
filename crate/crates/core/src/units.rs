//! Conversions between the SI units used internally and the engineering
//! units accepted at the configuration boundary.

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// BSs per km² to BSs per m².
pub fn per_km2_to_per_m2(v: f64) -> f64 {
    v * 1e-6
}

pub fn per_m2_to_per_km2(v: f64) -> f64 {
    v * 1e6
}

use scnperf::{Error, Result};

pub const POINTS_PER_DECADE: f64 = 20.0;

/// Parses `v`, `start:stop` (20 points per decade) or `start:stop:pts`,
/// all logarithmic and inclusive of both ends.
pub fn parse_log_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let num = |s: &str| -> Result<f64> {
        match s.parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
            _ => Err(Error::config(format!("grid `{spec}`: `{s}` is not a positive number"))),
        }
    };
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [a, b] => {
            let (a, b) = (num(a)?, num(b)?);
            let pts = (POINTS_PER_DECADE * (b / a).log10().abs()).round() as usize + 1;
            log_grid(a, b, pts)
        }
        [a, b, n] => {
            let n: usize = n
                .parse()
                .map_err(|_| Error::config(format!("grid `{spec}`: bad point count `{n}`")))?;
            log_grid(num(a)?, num(b)?, n)
        }
        _ => Err(Error::config(format!(
            "grid `{spec}`: expected v, start:stop or start:stop:pts"
        ))),
    }
}

pub fn log_grid(a: f64, b: f64, pts: usize) -> Result<Vec<f64>> {
    if pts == 0 {
        return Err(Error::config("grid needs at least one point"));
    }
    if pts == 1 {
        return Ok(vec![a]);
    }
    let (la, lb) = (a.log10(), b.log10());
    Ok((0..pts)
        .map(|i| match i {
            0 => a,
            _ if i == pts - 1 => b,
            _ => 10f64.powf(la + (lb - la) * i as f64 / (pts - 1) as f64),
        })
        .collect())
}

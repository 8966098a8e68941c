use crate::grid::parse_log_grid;
use crate::table::{Cell, Table};
use crate::{Command, Common, Failure};
use rayon::prelude::*;
use scnperf::ase::{ase, GcqRule};
use scnperf::config::{parse_config, render};
use scnperf::coverage::{CoverageEngine, CoverageOptions};
use scnperf::intensity::IntensityFns;
use scnperf::sim::{ase_from_outcomes, coverage_from_outcomes, run_trials, write_trials_csv, SimConfig};
use scnperf::units::{db_to_linear, per_km2_to_per_m2};
use scnperf::{Error, FadingModel, LinkType, NetworkConfig};
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

type Outcome<T> = std::result::Result<T, Failure>;

pub fn run(command: &Command, common: &Common) -> Outcome<()> {
    let base = base_config(common)?;
    if !(common.tol > 0.0) {
        return Err(Error::config("--tol must be > 0").into());
    }
    let threshold = db_to_linear(common.threshold_db);
    let options = CoverageOptions {
        tol: common.tol,
        ..Default::default()
    };
    let default_grid = match command {
        Command::Simulate { .. } | Command::IntensityDump { .. } => "10",
        _ => "0.1:10000",
    };
    let grid = parse_log_grid(common.lambda.as_deref().unwrap_or(default_grid))?;
    let at = |lambda: f64| NetworkConfig {
        bs_intensity: per_km2_to_per_m2(lambda),
        ..base.clone()
    };

    let (name, table) = match command {
        Command::Coverage => {
            let rows = grid
                .par_iter()
                .map(|&lambda| {
                    let r = CoverageEngine::new(&at(lambda))?
                        .with_options(options)
                        .coverage(threshold)?;
                    Ok(vec![
                        Cell::Num(lambda),
                        Cell::Num(common.threshold_db),
                        Cell::Num(r.p_nlos_branch),
                        Cell::Num(r.p_los_branch),
                        Cell::Num(r.p_total),
                        Cell::Num(r.error_estimate),
                    ])
                })
                .collect::<scnperf::Result<Vec<_>>>()?;
            let mut t = Table::new(&[
                "lambda_per_km2",
                "threshold_db",
                "pc_nlos",
                "pc_los",
                "pc_total",
                "err_est",
            ]);
            rows.into_iter().for_each(|r| t.push(r));
            ("coverage", t)
        }
        Command::Ase => {
            let rule = GcqRule::new(common.ng)?;
            let mut t = Table::new(&["lambda_per_km2", "n_g", "ase_bps_hz_km2", "err_est"]);
            let rows = grid
                .par_iter()
                .map(|&lambda| ase(&at(lambda), &rule, options))
                .collect::<scnperf::Result<Vec<_>>>()?;
            for r in rows {
                t.push(vec![
                    Cell::Num(r.lambda_per_km2),
                    Cell::Int(common.ng as u64),
                    Cell::Num(r.ase),
                    Cell::Num(r.error_estimate),
                ]);
            }
            ("ase", t)
        }
        Command::Simulate { dump_trials } => {
            if dump_trials.is_some() && grid.len() != 1 {
                return Err(Error::config("--dump-trials needs a single intensity").into());
            }
            let mut t = Table::new(&[
                "lambda_per_km2",
                "threshold_db",
                "trials",
                "disc_radius_m",
                "p_hat",
                "ci_low",
                "ci_high",
                "p_nlos",
                "p_los",
                "ase_mc",
                "ase_half_width",
                "association_violations",
            ]);
            for &lambda in &grid {
                let sim = SimConfig::new(at(lambda), common.trials, common.seed)?;
                let outcomes = run_trials(&sim);
                let c = coverage_from_outcomes(&outcomes, threshold);
                let a = ase_from_outcomes(sim.cfg.bs_intensity, &outcomes);
                t.push(vec![
                    Cell::Num(lambda),
                    Cell::Num(common.threshold_db),
                    Cell::Int(common.trials),
                    Cell::Num(sim.disc_radius),
                    Cell::Num(c.p_hat),
                    Cell::Num(c.ci_low),
                    Cell::Num(c.ci_high),
                    Cell::Num(c.p_nlos_branch),
                    Cell::Num(c.p_los_branch),
                    Cell::Num(a.ase),
                    Cell::Num(a.half_width),
                    Cell::Int(c.association_violations),
                ]);
                if let Some(path) = dump_trials {
                    let file = create(path)?;
                    write_trials_csv(&outcomes, file).map_err(|e| io_failure(path, e))?;
                }
            }
            ("simulate", t)
        }
        Command::IntensityDump { t_grid } => {
            let ts = parse_log_grid(t_grid)?;
            let mut t = Table::new(&[
                "lambda_per_km2",
                "t_m",
                "measure_nlos",
                "measure_los",
                "density_nlos",
                "density_los",
            ]);
            t.block = Some(0);
            for &lambda in &grid {
                let fns = IntensityFns::new(&at(lambda))?;
                for &x in &ts {
                    let (n, l) = (fns.get(LinkType::Nlos), fns.get(LinkType::Los));
                    t.push(vec![
                        Cell::Num(lambda),
                        Cell::Num(x),
                        Cell::Num(n.measure(x)),
                        Cell::Num(l.measure(x)),
                        Cell::Num(n.density(x)),
                        Cell::Num(l.density(x)),
                    ]);
                }
            }
            ("intensity-dump", t)
        }
        Command::ReproduceFig1 { mc_lambda } => {
            let mc_grid = parse_log_grid(mc_lambda)?;
            let mut t = Table::new(&[
                "series",
                "pairing",
                "source",
                "lambda_per_km2",
                "pc",
                "ci_low",
                "ci_high",
            ]);
            t.block = Some(0);
            for (pairing, nlos, los) in pairings() {
                let cfg_at = |lambda: f64| NetworkConfig {
                    fading_nlos: nlos,
                    fading_los: los,
                    ..at(lambda)
                };
                let rows = grid
                    .par_iter()
                    .map(|&lambda| {
                        CoverageEngine::new(&cfg_at(lambda))?
                            .with_options(options)
                            .coverage(threshold)
                            .map(|r| (lambda, r))
                    })
                    .collect::<scnperf::Result<Vec<_>>>()?;
                for (lambda, r) in rows {
                    t.push(vec![
                        Cell::Text(format!("{pairing}:analytic")),
                        Cell::Text(pairing.into()),
                        Cell::Text("analytic".into()),
                        Cell::Num(lambda),
                        Cell::Num(r.p_total),
                        Cell::Num((r.p_total - r.error_estimate).max(0.0)),
                        Cell::Num((r.p_total + r.error_estimate).min(1.0)),
                    ]);
                }
                for &lambda in &mc_grid {
                    let sim = SimConfig::new(cfg_at(lambda), common.trials, common.seed)?;
                    let c = coverage_from_outcomes(&run_trials(&sim), threshold);
                    t.push(vec![
                        Cell::Text(format!("{pairing}:mc")),
                        Cell::Text(pairing.into()),
                        Cell::Text("mc".into()),
                        Cell::Num(lambda),
                        Cell::Num(c.p_hat),
                        Cell::Num(c.ci_low),
                        Cell::Num(c.ci_high),
                    ]);
                }
            }
            ("reproduce-fig1", t)
        }
        Command::ReproduceFig3 => {
            let rule = GcqRule::new(common.ng)?;
            let mut t = Table::new(&["pairing", "lambda_per_km2", "ase_bps_hz_km2", "err_est"]);
            t.block = Some(0);
            for (pairing, nlos, los) in pairings() {
                let rows = grid
                    .par_iter()
                    .map(|&lambda| {
                        ase(
                            &NetworkConfig {
                                fading_nlos: nlos,
                                fading_los: los,
                                ..at(lambda)
                            },
                            &rule,
                            options,
                        )
                    })
                    .collect::<scnperf::Result<Vec<_>>>()?;
                for r in rows {
                    t.push(vec![
                        Cell::Text(pairing.into()),
                        Cell::Num(r.lambda_per_km2),
                        Cell::Num(r.ase),
                        Cell::Num(r.error_estimate),
                    ]);
                }
            }
            ("reproduce-fig3", t)
        }
    };

    let meta = format!(
        "scnperf {} command={name} threshold_db={} sir={} tol={} ng={} trials={} seed={} lambda={:?} config: {}",
        env!("CARGO_PKG_VERSION"),
        common.threshold_db,
        common.sir,
        common.tol,
        common.ng,
        common.trials,
        common.seed,
        common.lambda.as_deref().unwrap_or(default_grid),
        render(&base, ";")
            .split(';')
            .filter(|kv| !kv.starts_with("lambda_per_km2="))
            .collect::<Vec<_>>()
            .join(";"),
    );
    match &common.out {
        Some(path) => {
            let file = create(path)?;
            table.write(&meta, common.format, file).map_err(|e| io_failure(path, e))
        }
        None => table
            .write(&meta, common.format, std::io::stdout().lock())
            .map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}

/// Rayleigh/Rayleigh, Nakagami with the Rician-15 dB-equivalent LOS shape,
/// and Rayleigh NLOS with Rician 15 dB LOS.
fn pairings() -> [(&'static str, FadingModel, FadingModel); 3] {
    let rician = FadingModel::rician_db(15.0);
    [
        ("rayleigh-rayleigh", FadingModel::Rayleigh, FadingModel::Rayleigh),
        (
            "nakagami",
            FadingModel::Nakagami { m: 1.0 },
            FadingModel::Nakagami {
                m: rician.gamma_shape(),
            },
        ),
        ("rayleigh-rician15", FadingModel::Rayleigh, rician),
    ]
}

fn base_config(common: &Common) -> Outcome<NetworkConfig> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
            parse_config(&text)?
        }
        None => NetworkConfig::urban_default(),
    };
    if let Some(f) = &common.fading_nlos {
        cfg.fading_nlos = f.parse()?;
    }
    if let Some(f) = &common.fading_los {
        cfg.fading_los = f.parse()?;
    }
    if common.sir {
        cfg.noise_power = 0.0;
    }
    if common.trials == 0 {
        return Err(Error::config("--trials must be >= 1").into());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn create(path: &Path) -> Outcome<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| io_failure(path, e))
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Io(path.display().to_string(), e)
}

use std::path::PathBuf;
use std::process::{Command, Output};

fn scnperf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scnperf"))
        .args(args)
        .env_remove("SCNPERF_LAMBDA_PER_KM2")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("scnperf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn coverage_single_row_schema() {
    let text = stdout(&scnperf(&["coverage", "--lambda-per-km2", "10", "--threshold-db", "0"]));
    assert!(text.starts_with("# meta: scnperf "));
    let lines = data_lines(&text);
    assert_eq!(lines[0], "lambda_per_km2,threshold_db,pc_nlos,pc_los,pc_total,err_est");
    assert_eq!(lines.len(), 2);
    let cells: Vec<f64> = lines[1].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!((cells[0], cells[1]), (10.0, 0.0));
    assert!(cells.iter().all(|v| v.is_finite()));
    assert!(cells[2..5].iter().all(|p| (0.0..=1.0).contains(p)));
    assert!((cells[2] + cells[3] - cells[4]).abs() < 1e-12);
    assert!((cells[4] - 0.7817).abs() < 2e-3);
}

#[test]
fn sweep_rows_follow_input_order() {
    let text = stdout(&scnperf(&["coverage", "--lambda-per-km2", "1:100:5"]));
    let lambdas: Vec<f64> = data_lines(&text)[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(lambdas.len(), 5);
    assert!(lambdas.windows(2).all(|w| w[0] < w[1]));
    assert_eq!((lambdas[0], lambdas[4]), (1.0, 100.0));
}

#[test]
fn byte_identical_across_runs_and_threads() {
    let cov = ["coverage", "--lambda-per-km2", "0.5:500:4"];
    let sim = ["simulate", "--lambda-per-km2", "30", "--trials", "3000", "--seed", "9"];
    for args in [&cov[..], &sim[..]] {
        let one = |threads: &str| {
            let mut a = args.to_vec();
            a.extend(["--threads", threads]);
            stdout(&scnperf(&a))
        };
        let a = one("1");
        assert_eq!(a, one("1"));
        assert_eq!(a, one("4"));
    }
}

#[test]
fn seed_changes_monte_carlo() {
    let run = |seed: &str| {
        stdout(&scnperf(&[
            "simulate",
            "--lambda-per-km2",
            "10",
            "--trials",
            "500",
            "--seed",
            seed,
        ]))
    };
    assert_ne!(data_lines(&run("1"))[1], data_lines(&run("2"))[1]);
}

#[test]
fn simulate_schema_and_dump() {
    let dump = scratch("trials.csv");
    let text = stdout(&scnperf(&[
        "simulate",
        "--lambda-per-km2",
        "10",
        "--trials",
        "200",
        "--dump-trials",
        dump.to_str().unwrap(),
    ]));
    let lines = data_lines(&text);
    assert!(lines[0].starts_with("lambda_per_km2,threshold_db,trials,disc_radius_m,p_hat,ci_low,ci_high"));
    assert!(
        lines[1].ends_with(",0"),
        "association violations must be zero: {}",
        lines[1]
    );
    let dumped = std::fs::read_to_string(&dump).unwrap();
    let mut rows = dumped.lines();
    assert_eq!(
        rows.next().unwrap(),
        "trial,n_bs,serving_link,serving_power_w,interference_w,sinr"
    );
    assert_eq!(rows.count(), 200);
}

#[test]
fn dump_requires_single_intensity() {
    let out = scnperf(&[
        "simulate",
        "--lambda-per-km2",
        "1:10:2",
        "--trials",
        "10",
        "--dump-trials",
        "/tmp/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes_and_error_lines() {
    let bad = scnperf(&["coverage", "--lambda-per-km2", "0"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error kind=config "));

    let usage = scnperf(&["coverage", "--no-such-flag"]);
    assert_eq!(usage.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&usage.stderr).starts_with("error kind=config "));

    let io = scnperf(&["coverage", "--lambda-per-km2", "10", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(io.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&io.stderr).starts_with("error kind=io "));

    let missing = scnperf(&["coverage", "--config", "/nonexistent-dir/net.cfg"]);
    assert_eq!(missing.status.code(), Some(4));

    let numerical = scnperf(&["coverage", "--lambda-per-km2", "10", "--tol", "1e-14"]);
    assert_eq!(numerical.status.code(), Some(3));
    let err = String::from_utf8_lossy(&numerical.stderr);
    assert!(err.starts_with("error kind=numerical achieved="), "{err}");
    assert!(err.contains("target=") && err.contains("partial="));
}

#[test]
fn env_and_config_overrides() {
    let via_env = Command::new(env!("CARGO_BIN_EXE_scnperf"))
        .args(["coverage"])
        .env("SCNPERF_LAMBDA_PER_KM2", "10")
        .env("SCNPERF_SIR", "true")
        .output()
        .unwrap();
    let via_flag = scnperf(&["coverage", "--lambda-per-km2", "10", "--sir"]);
    assert_eq!(data_lines(&stdout(&via_env)), data_lines(&stdout(&via_flag)));

    let cfg = scratch("net.cfg");
    std::fs::write(&cfg, "# SIR variant\nnoise_dbm = none\n").unwrap();
    let via_file = scnperf(&["coverage", "--lambda-per-km2", "10", "--config", cfg.to_str().unwrap()]);
    assert_eq!(data_lines(&stdout(&via_file)), data_lines(&stdout(&via_flag)));

    let sinr = scnperf(&["coverage", "--lambda-per-km2", "0.1"]);
    let sir = scnperf(&["coverage", "--lambda-per-km2", "0.1", "--sir"]);
    let total = |o: &Output| -> f64 { data_lines(&stdout(o))[1].split(',').nth(4).unwrap().parse().unwrap() };
    assert!(total(&sir) > total(&sinr));
}

#[test]
fn gnuplot_format() {
    let text = stdout(&scnperf(&[
        "intensity-dump",
        "--lambda-per-km2",
        "1:10:2",
        "--t-grid",
        "10:1000:3",
        "--format",
        "gnuplot",
    ]));
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[1].starts_with("# lambda_per_km2 t_m"));
    // two blocks of three rows separated by two blank lines
    assert_eq!(lines.iter().filter(|l| l.is_empty()).count(), 2);
    assert_eq!(lines.iter().filter(|l| !l.is_empty() && !l.starts_with('#')).count(), 6);
}

#[test]
fn figure_reproductions_small() {
    let text = stdout(&scnperf(&[
        "reproduce-fig1",
        "--lambda-per-km2",
        "10",
        "--mc-lambda",
        "10",
        "--trials",
        "500",
    ]));
    let lines = data_lines(&text);
    assert_eq!(lines[0], "series,pairing,source,lambda_per_km2,pc,ci_low,ci_high");
    assert_eq!(lines.len(), 1 + 6);
    for l in &lines[1..] {
        let c: Vec<&str> = l.split(',').collect();
        let p: f64 = c[4].parse().unwrap();
        let (lo, hi): (f64, f64) = (c[5].parse().unwrap(), c[6].parse().unwrap());
        assert!(lo <= p && p <= hi && (0.0..=1.0).contains(&p));
    }

    let text = stdout(&scnperf(&["reproduce-fig3", "--lambda-per-km2", "10", "--ng", "8"]));
    let lines = data_lines(&text);
    assert_eq!(lines[0], "pairing,lambda_per_km2,ase_bps_hz_km2,err_est");
    assert_eq!(lines.len(), 4);
}

#[test]
fn ase_schema() {
    let text = stdout(&scnperf(&["ase", "--lambda-per-km2", "10", "--ng", "31"]));
    let lines = data_lines(&text);
    assert_eq!(lines[0], "lambda_per_km2,n_g,ase_bps_hz_km2,err_est");
    let ase: f64 = lines[1].split(',').nth(2).unwrap().parse().unwrap();
    assert!((ase - 39.49).abs() < 0.1, "{ase}");
}

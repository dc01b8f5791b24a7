use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qsl_cli::{validate, Experiment};

fn qsl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsl")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qsl-cli-test-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("config.json");
    fs::write(&path, text).unwrap();
    path
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    assert!(text.ends_with('\n') && !text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

fn run_ok(experiment: &str, config: &Path, out: &Path, extra: &[&str]) {
    let mut args = vec![experiment, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = qsl(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn list_names_every_experiment_and_preset() {
    let o = qsl(&["list"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for e in Experiment::ALL {
        assert!(text.contains(e.tag()), "{e}");
    }
    for p in ["jc-fig2", "lmg-fig3", "lz-caneva"] {
        assert!(text.contains(p));
    }
}

#[test]
fn validation_diagnostics() {
    let dir = scratch("validate");
    let good = write_config(&dir, r#"{"experiment": "jc-sweep", "preset": "jc-fig2"}"#);
    assert!(validate(&good).is_empty());
    assert!(qsl(&["validate", "--config", good.to_str().unwrap()]).status.success());

    let missing = write_config(&dir, r#"{"experiment": "jc-sweep", "lambda": 50, "tau": 0.5}"#);
    let d = validate(&missing);
    assert_eq!(d.len(), 1, "{d:?}");
    assert_eq!(d[0].field, "gamma0");
    let o = qsl(&["validate", "--config", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stdout).contains("gamma0"));

    let negative = write_config(&dir, r#"{"experiment": "jc-sweep", "preset": "jc-fig2", "steps": -5}"#);
    let d = validate(&negative);
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].field, "steps");
    assert!(d[0].message.contains("positive"), "{}", d[0].message);

    let several = write_config(&dir, r#"{"experiment": "lmg-scan", "n_spins": 1000, "gamma": -1, "bogus": 3}"#);
    let fields: Vec<String> = validate(&several).into_iter().map(|d| d.field).collect();
    for f in ["n_spins", "gamma", "tau", "bogus"] {
        assert!(fields.iter().any(|x| x == f), "{f} missing from {fields:?}");
    }

    let wrong_preset = write_config(&dir, r#"{"experiment": "dirac", "preset": "jc-fig2"}"#);
    assert_eq!(validate(&wrong_preset)[0].field, "preset");
    let broken = write_config(&dir, r#"{"experiment": "pt-qubit", "r": 3, "theta": 1.5, "s": 0.5}"#);
    assert_eq!(validate(&broken)[0].field, "s");
    let unsorted = write_config(&dir, r#"{"experiment": "nonlinear-tmin", "durations": [0.9, 0.8]}"#);
    assert_eq!(validate(&unsorted)[0].field, "durations");
    let garbage = write_config(&dir, "{not json");
    assert_eq!(validate(&garbage)[0].field, "config");
    assert_eq!(validate(&dir.join("absent.json"))[0].field, "config");
}

#[test]
fn exit_codes() {
    let dir = scratch("exit");
    let cfg = write_config(&dir, r#"{"experiment": "dirac", "steps": 3}"#);
    let o = qsl(&["warp-drive", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    for e in Experiment::ALL {
        assert!(err.contains(e.tag()), "{err}");
    }
    // Command line and config disagree.
    assert_eq!(qsl(&["thermo", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    // Negative step override.
    let o = qsl(&["dirac", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap(), "--steps", "-4"]);
    assert_eq!(o.status.code(), Some(2));
    // Overflowing spectrum passes the schema but fails numerically.
    let huge = write_config(&dir, r#"{"experiment": "bounds", "energies": [0, 1e300], "amplitudes": [1, 1]}"#);
    let o = qsl(&["bounds", "--config", huge.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let cfg = write_config(&dir, r#"{"experiment": "dirac", "steps": 3}"#);
    assert_eq!(qsl(&["dirac", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn saturating_state_bounds_equal_pi() {
    let dir = scratch("bounds");
    let cfg = write_config(&dir, r#"{"experiment": "bounds", "energies": [0, 1], "amplitudes": [1, 1]}"#);
    run_ok("bounds", &cfg, &dir, &[]);
    let (header, rows) = read_csv(&dir.join("bounds.csv"));
    assert_eq!(header, ["quantity", "value"]);
    for r in &rows {
        let v: f64 = r[1].parse().unwrap();
        match r[0].as_str() {
            "mt" | "ml" | "unified" | "glm" => assert!((v - std::f64::consts::PI).abs() < 1e-10, "{r:?}"),
            "orthogonality_time" => assert!((v - std::f64::consts::PI).abs() < 1e-8, "{r:?}"),
            _ => {}
        }
    }
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("bounds.json")).unwrap()).unwrap();
    assert_eq!(meta["experiment"], "bounds");
    assert_eq!(meta["grid"]["steps"], 4000);
    assert!(meta["wall_time_seconds"].as_f64().unwrap() >= 0.0);
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn csv_format_and_determinism() {
    let dir = scratch("determinism");
    let cfg = write_config(&dir, r#"{"experiment": "thermo", "instances": 12, "seed": 5}"#);
    let (a, b, c) = (dir.join("a"), dir.join("b"), dir.join("c"));
    run_ok("thermo", &cfg, &a, &[]);
    run_ok("thermo", &cfg, &b, &[]);
    run_ok("thermo", &cfg, &c, &["--seed", "6"]);
    let first = fs::read(a.join("thermo.csv")).unwrap();
    assert_eq!(first, fs::read(b.join("thermo.csv")).unwrap());
    assert_ne!(first, fs::read(c.join("thermo.csv")).unwrap());
    let (header, rows) = read_csv(&a.join("thermo.csv"));
    assert_eq!(header[0], "instance");
    assert_eq!(rows.len(), 12);
    for r in &rows {
        for cell in &r[1..] {
            let (mantissa, _) = cell.split_once('e').unwrap_or_else(|| panic!("{cell}"));
            let digits = mantissa.chars().filter(char::is_ascii_digit).count();
            assert_eq!(digits, 12, "{cell}");
        }
    }
    let ep = column(&header, &rows, "entropy_production");
    let re = column(&header, &rows, "relative_entropy");
    let cb = column(&header, &rows, "clausius_bound");
    for i in 0..rows.len() {
        assert!((ep[i] - re[i]).abs() < 1e-8 * ep[i].abs().max(1.0));
        assert!(ep[i] >= cb[i] - 1e-9);
    }
}

#[test]
fn jc_sweep_preset_columns() {
    let dir = scratch("jc");
    let cfg = write_config(&dir, r#"{"experiment": "jc-sweep", "preset": "jc-fig2", "steps": 4000}"#);
    run_ok("jc-sweep", &cfg, &dir, &[]);
    let (header, rows) = read_csv(&dir.join("jc-sweep.csv"));
    assert_eq!(&header[..3], ["gamma0", "tau_qsl_op", "n_measure"]);
    assert_eq!(column(&header, &rows, "gamma0"), [2.0, 5.0, 10.0, 20.0, 50.0, 100.0]);
    // Non-increasing up to the discretization error of the weak-coupling plateau at τ.
    let tau = column(&header, &rows, "tau_qsl_op");
    assert!(tau.windows(2).all(|w| w[1] <= w[0] + 1e-5), "{tau:?}");
    assert!(tau.iter().all(|t| *t <= 0.5 + 1e-5));
    let n = column(&header, &rows, "n_measure");
    assert!(n[..4].iter().all(|x| *x == 0.0) && n[5] > n[4] && n[4] > 0.0);
}

#[test]
fn lmg_scan_dips_near_the_critical_point() {
    let dir = scratch("lmg");
    let cfg = write_config(&dir, r#"{"experiment": "lmg-scan", "preset": "lmg-fig3", "lambda_points": 21, "steps": 1000}"#);
    run_ok("lmg-scan", &cfg, &dir, &[]);
    let (header, rows) = read_csv(&dir.join("lmg-scan.csv"));
    assert_eq!(header, ["lambda", "tau_qsl", "tau_qsl_over_tau"]);
    let lambda = column(&header, &rows, "lambda");
    let tau = column(&header, &rows, "tau_qsl");
    let (i, _) = tau.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    assert!((0.9..=1.2).contains(&lambda[i]), "minimum at {}", lambda[i]);
    assert!(tau[0] > 0.99);
}

#[test]
fn sta_and_pt_outputs() {
    let dir = scratch("sta");
    let cfg = write_config(&dir, r#"{"experiment": "sta-tradeoff", "durations": [1, 2]}"#);
    run_ok("sta-tradeoff", &cfg, &dir, &[]);
    let (header, rows) = read_csv(&dir.join("sta-tradeoff.csv"));
    let cost = column(&header, &rows, "total_cost");
    let peak = column(&header, &rows, "peak_cost");
    assert!((cost[0] - cost[1]).abs() < 1e-6 * cost[0]);
    assert!((peak[0] / peak[1] - 2.0).abs() < 0.02);
    let pt = write_config(&dir, r#"{"experiment": "pt-qubit", "steps": 500}"#);
    run_ok("pt-qubit", &pt, &dir, &[]);
    let (header, rows) = read_csv(&dir.join("pt-qubit.csv"));
    assert_eq!(rows.len(), 501);
    assert!(column(&header, &rows, "analytic_vs_expm").iter().all(|d| *d < 1e-8));
}

#[test]
fn property_suite_reports_no_violations() {
    let dir = scratch("suite");
    let cfg = write_config(&dir, r#"{"experiment": "property-suite", "instances": 40}"#);
    run_ok("property-suite", &cfg, &dir, &[]);
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("property-suite.json")).unwrap()).unwrap();
    assert_eq!(meta["summary"]["violations"], 0);
    let (header, rows) = read_csv(&dir.join("property-suite.csv"));
    let names: Vec<&str> = rows.iter().map(|r| r[3].as_str()).collect();
    for check in ["mt-driven", "geometric-op", "qfi", "universal-inf", "purity-mt", "purity-ml", "norm-hierarchy"] {
        assert!(names.contains(&check), "{check}");
    }
    assert!(column(&header, &rows, "slack").iter().all(|s| *s >= -1e-7));
}

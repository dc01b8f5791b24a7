//! Acceptance criteria evaluated against the toolkit's public interfaces.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use qsl_cli::{Experiment, ExperimentConfig, ExperimentOutput};
use qsl_core::bounds::{geometric_qsl, glm_from_moments, unified_from_moments, NormKind};
use qsl_core::models::{dirac_landau_report, lmg_probe_trajectory, DiracLandauParams, LmgParams};
use qsl_core::{TimeGrid, UnitSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const U: UnitSystem = UnitSystem::NATURAL;

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub number: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} criterion {:>2} [{}]: {} (runtime {:.2} s, limit {} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.number,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        )
    }
}

/// Outcome of the checks before timing is applied.
struct Outcome {
    passed: bool,
    detail: String,
}

fn timed(number: usize, title: &'static str, limit_s: u64, f: impl FnOnce() -> Outcome) -> Verdict {
    let started = Instant::now();
    let o = f();
    let elapsed = started.elapsed();
    let limit = Duration::from_secs(limit_s);
    let in_time = elapsed <= limit;
    let detail = if in_time { o.detail } else { format!("{}; over the runtime limit", o.detail) };
    Verdict {
        number,
        title,
        passed: o.passed && in_time,
        detail,
        elapsed,
        limit,
    }
}

/// Runs an experiment through the command-line harness from a flat JSON config.
pub fn run_experiment(config: &str) -> ExperimentOutput {
    let cfg = ExperimentConfig::parse(config).unwrap_or_else(|d| panic!("bad config {config}: {d:?}"));
    let tag = cfg.experiment.clone().expect("config names its experiment");
    let experiment = Experiment::from_str(&tag).expect("known experiment");
    let params = cfg.resolve(experiment).unwrap_or_else(|d| panic!("bad config {config}: {d:?}"));
    experiment.run(&params, cfg.seed).unwrap_or_else(|e| panic!("{tag} failed: {e}"))
}

fn summary_f64(out: &ExperimentOutput, key: &str) -> f64 {
    match out.summary.get(key) {
        Some(Value::Number(n)) => n.as_f64().unwrap(),
        Some(Value::String(s)) => s.parse().unwrap_or(f64::NAN),
        other => panic!("summary {key} is {other:?}"),
    }
}

fn col(out: &ExperimentOutput, name: &str) -> Vec<f64> {
    out.table.numbers(name).unwrap_or_else(|| panic!("no column {name}"))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn levitin_toffoli() -> Verdict {
    timed(1, "saturating state tightness", 1, || {
        let out = run_experiment(r#"{"experiment": "bounds", "energies": [0, 1], "amplitudes": [1, 1], "steps": 4000}"#);
        let rows: Vec<(String, f64)> = out
            .table
            .rows
            .iter()
            .map(|r| (format!("{:?}", r[0]), r[1].as_f64().unwrap()))
            .collect();
        let get = |name: &str| rows.iter().find(|r| r.0.contains(&format!("\"{name}\""))).unwrap().1;
        let (mt, ml, un, orth) = (get("mt"), get("ml"), get("unified"), get("orthogonality_time"));
        let passed = [mt, ml, un].iter().all(|x| (x - PI).abs() <= 1e-8) && (orth - PI).abs() <= 1e-8;
        Outcome {
            passed,
            detail: format!("MT {mt:.12}, ML {ml:.12}, unified {un:.12}, orthogonality {orth:.12}"),
        }
    })
}

pub fn glm_reduction() -> Verdict {
    timed(2, "GLM reduction at a right angle", 1, || {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let mean = rng.gen_range(0.01..10.0);
            let std = rng.gen_range(0.01..10.0);
            let glm = glm_from_moments(mean, std, FRAC_PI_2, 1.0).tau_qsl;
            let unified = unified_from_moments(mean, std, 1.0).unified.tau_qsl;
            worst = worst.max(rel(glm, unified));
        }
        Outcome {
            passed: worst <= 1e-12,
            detail: format!("largest relative difference {worst:.3e} over 100 moment pairs"),
        }
    })
}

pub fn caneva_threshold() -> Verdict {
    timed(3, "Landau-Zener control threshold", 600, || {
        let out = run_experiment(r#"{"experiment": "lz-threshold", "preset": "lz-caneva"}"#);
        let overlap = summary_f64(&out, "endpoint_overlap");
        let bound = summary_f64(&out, "bhattacharyya_tau_qsl");
        let durations = col(&out, "duration");
        let fid = col(&out, "best_fidelity");
        let conv = col(&out, "converged");
        let mut scan_ok = true;
        let mut scan = Vec::new();
        for i in 0..durations.len() {
            let ok = if durations[i] >= 1.6 { conv[i] == 1.0 } else if durations[i] <= 1.4 { conv[i] == 0.0 } else { true };
            scan_ok &= ok;
            scan.push(format!("{}:{:.5}", durations[i], fid[i]));
        }
        let passed = (overlap - 0.002).abs() <= 0.001 && (bound - 1.56881).abs() <= 0.001 && scan_ok;
        Outcome {
            passed,
            detail: format!("endpoint fidelity {overlap:.6}, bound {bound:.6}, scan {}", scan.join(" ")),
        }
    })
}

pub fn jc_speedup() -> Verdict {
    timed(4, "non-Markovian speed-up", 60, || {
        let out = run_experiment(r#"{"experiment": "jc-sweep", "preset": "jc-fig2", "steps": 20000}"#);
        let gammas = col(&out, "gamma0");
        let tau = col(&out, "tau_qsl_op");
        let maxima = col(&out, "v_qsl_local_maxima");
        let decreasing = tau.windows(2).all(|w| w[0] - w[1] > 1e-6);
        let last = gammas.iter().position(|g| *g == 100.0).unwrap();
        let non_monotone = maxima[last] >= 1.0;
        let steps: Vec<String> = tau.windows(2).map(|w| format!("{:+.3e}", w[1] - w[0])).collect();
        Outcome {
            passed: decreasing && non_monotone,
            detail: format!(
                "consecutive changes {}, strictly decreasing {decreasing}, v_QSL interior maxima at gamma0=100: {}",
                steps.join(" "),
                maxima[last]
            ),
        }
    })
}

pub fn backflow_identity() -> Verdict {
    timed(5, "backflow identity", 60, || {
        let out = run_experiment(r#"{"experiment": "jc-sweep", "gamma0": [1, 200], "lambda": 50, "tau": 0.5, "steps": 20000}"#);
        let tau = col(&out, "tau_qsl_op");
        let identity = col(&out, "tau_qsl_identity");
        let errs: Vec<f64> = tau.iter().zip(&identity).map(|(a, b)| rel(*b, *a)).collect();
        Outcome {
            passed: errs.iter().all(|e| *e <= 1e-4),
            detail: format!("relative differences {:.3e} (gamma0=1), {:.3e} (gamma0=200)", errs[0], errs[1]),
        }
    })
}

fn lmg_tau(lambda: f64) -> f64 {
    let p = LmgParams::new(100, lambda, 0.05).unwrap();
    let traj = lmg_probe_trajectory(&p, &TimeGrid::span(1.0, 2000).unwrap(), &U).unwrap();
    geometric_qsl(&traj, NormKind::Op).unwrap().tau_qsl
}

pub fn lmg_criticality() -> Verdict {
    timed(6, "LMG criticality signature", 300, || {
        let reference = lmg_tau(0.25);
        let out = run_experiment(
            r#"{"experiment": "lmg-scan", "preset": "lmg-fig3", "lambda_min": 0.9, "lambda_max": 1.1, "lambda_points": 201, "steps": 2000}"#,
        );
        let min = summary_f64(&out, "min_tau_qsl");
        let arg = summary_f64(&out, "argmin_lambda");
        let ratio = min / reference;
        Outcome {
            passed: reference >= 0.85 && ratio <= 0.15,
            detail: format!(
                "tau_QSL(0.25)/tau = {reference:.6}, min over [0.9, 1.1] = {min:.6} at lambda = {arg:.3}, ratio {ratio:.5} (needs <= 0.15)"
            ),
        }
    })
}

pub fn universality() -> Verdict {
    timed(7, "bound universality", 300, || {
        let out = run_experiment(r#"{"experiment": "property-suite", "instances": 1000, "tolerance": 1e-7, "seed": 7}"#);
        let violations = out.summary["violations"].as_u64().unwrap();
        let checks = out.summary["checks"].as_u64().unwrap();
        let min = summary_f64(&out, "min_slack");
        let names: std::collections::BTreeSet<String> = out.table.column("check").unwrap().iter().map(|c| format!("{c:?}")).collect();
        Outcome {
            passed: violations == 0 && names.len() == 11,
            detail: format!("{checks} inequalities of {} kinds, {violations} violations, smallest slack {min:.3e}", names.len()),
        }
    })
}

pub fn thermodynamic_identities() -> Verdict {
    timed(8, "entropy production identities", 60, || {
        let out = run_experiment(r#"{"experiment": "thermo", "instances": 100, "seed": 8}"#);
        let work = col(&out, "mean_work");
        let df = col(&out, "delta_f");
        let beta = col(&out, "beta");
        let sigma = col(&out, "entropy_production");
        let s = col(&out, "relative_entropy");
        let clausius = col(&out, "clausius_bound");
        let mut gap: f64 = 0.0;
        let mut slack = f64::INFINITY;
        for i in 0..sigma.len() {
            gap = gap.max((beta[i] * (work[i] - df[i]) - sigma[i]).abs()).max((sigma[i] - s[i]).abs());
            slack = slack.min(sigma[i] - clausius[i]);
        }
        Outcome {
            passed: gap <= 1e-8 && slack >= -1e-9,
            detail: format!("largest identity gap {gap:.3e}, smallest Clausius slack {slack:.3e} over {} protocols", sigma.len()),
        }
    })
}

pub fn sta_tradeoff() -> Verdict {
    timed(9, "shortcut cost trade-off", 60, || {
        let out = run_experiment(r#"{"experiment": "sta-tradeoff", "durations": [1, 2], "steps": 4000}"#);
        let d = col(&out, "duration");
        let cost = col(&out, "total_cost");
        let peak = col(&out, "peak_cost");
        let tau_qsl = col(&out, "tau_qsl");
        let track = col(&out, "tracking_fidelity");
        let cost_gap = rel(cost[0], cost[1]);
        let ratio = peak[0] / peak[1];
        let bounded = d.iter().zip(&tau_qsl).all(|(a, b)| a >= b);
        let worst = track.iter().copied().fold(1.0, f64::min);
        Outcome {
            passed: cost_gap <= 1e-6 && (ratio / 2.0 - 1.0).abs() <= 0.01 && bounded && worst > 1.0 - 1e-6,
            detail: format!(
                "cost gap {cost_gap:.3e}, peak ratio {ratio:.6}, tau_QSL {:.4}/{:.4} vs durations {}/{}, worst tracking {worst:.10}",
                tau_qsl[0], tau_qsl[1], d[0], d[1]
            ),
        }
    })
}

pub fn pt_qubit() -> Verdict {
    timed(10, "PT-symmetric qubit", 1, || {
        let out = run_experiment(r#"{"experiment": "pt-qubit", "r": 1, "s": 2, "steps": 4000}"#);
        let dev = summary_f64(&out, "max_deviation");
        let holds = out.summary["speed_check_holds"].as_bool().unwrap();
        let excess = summary_f64(&out, "speed_check_max_excess");
        Outcome {
            passed: dev < 1e-8 && holds,
            detail: format!("largest deviation {dev:.3e} over one period, speed inequality holds {holds} (max excess {excess:.3e})"),
        }
    })
}

pub fn dirac_consistency() -> Verdict {
    timed(11, "Dirac consistency", 1, || {
        let base = DiracLandauParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let bc = base.critical_field(&U);
        let at = |b: f64| dirac_landau_report(&DiracLandauParams::new(b, 1.0, 1.0, 1.0).unwrap(), &U);
        let threshold_ok = !at(0.9 * bc).v_s_exceeds_c && at(1.1 * bc).v_s_exceeds_c;
        let strong: Vec<f64> = [1e4, 1e5, 1e6, 1e7].iter().map(|s| at(*s * bc).v_d).collect();
        let worst = strong.iter().map(|v| (v - 0.24082).abs()).fold(0.0, f64::max);
        Outcome {
            passed: threshold_ok && worst <= 1e-4,
            detail: format!(
                "threshold at {bc:.6} respected {threshold_ok}; v_d/c over B/B_c = 1e4..1e7: {}",
                strong.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(" ")
            ),
        }
    })
}

pub fn nonlinear_independence() -> Verdict {
    timed(12, "nonlinear minimal time", 600, || {
        let out = run_experiment(r#"{"experiment": "nonlinear-tmin", "kappa": [0, 1, 5]}"#);
        let kappa = col(&out, "kappa");
        let t = col(&out, "threshold");
        let analytic = col(&out, "analytic")[0];
        let errs: Vec<f64> = t.iter().map(|x| rel(*x, analytic)).collect();
        Outcome {
            passed: errs.iter().all(|e| *e <= 0.05),
            detail: format!(
                "analytic {analytic:.6}; thresholds {}",
                kappa
                    .iter()
                    .zip(&t)
                    .map(|(k, x)| format!("kappa={k}: {x:.3}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        }
    })
}

pub fn all() -> Vec<fn() -> Verdict> {
    vec![
        levitin_toffoli,
        glm_reduction,
        caneva_threshold,
        jc_speedup,
        backflow_identity,
        lmg_criticality,
        universality,
        thermodynamic_identities,
        sta_tradeoff,
        pt_qubit,
        dirac_consistency,
        nonlinear_independence,
    ]
}

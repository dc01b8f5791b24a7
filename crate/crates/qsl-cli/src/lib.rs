//! Config-driven runner for the qsl-core experiments.
//!
//! Each run reads a flat JSON config, validates it against the experiment's parameter schema,
//! and writes `<experiment>.csv` plus `<experiment>.json` metadata into the output directory.

pub mod config;
pub mod experiments;
pub mod output;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;

pub use config::{Diagnostic, ExperimentConfig, ParamValue, Params};
pub use experiments::Experiment;
pub use output::{format_number, Cell, ExperimentOutput, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

#[derive(Debug)]
pub enum RunError {
    Validation(Vec<Diagnostic>),
    Numerical(qsl_core::Error),
    Output(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Validation(_) => EXIT_VALIDATION,
            RunError::Numerical(_) | RunError::Output(_) => EXIT_FAILURE,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Validation(d) => {
                let lines: Vec<String> = d.iter().map(ToString::to_string).collect();
                write!(f, "invalid configuration:\n  {}", lines.join("\n  "))
            }
            RunError::Numerical(e) => write!(f, "numerical failure: {e}"),
            RunError::Output(m) => write!(f, "cannot write results: {m}"),
        }
    }
}

impl std::error::Error for RunError {}

/// Command-line level request for one experiment.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Request {
    pub experiment: Option<String>,
    pub config: PathBuf,
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub steps: Option<i64>,
}

/// Paths written by a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifacts {
    pub csv: PathBuf,
    pub metadata: PathBuf,
    pub output: ExperimentOutput,
}

/// Config with command-line overrides applied, the experiment it names and its resolved parameters.
pub fn prepare(request: &Request) -> Result<(ExperimentConfig, Experiment, Params), RunError> {
    let mut cfg = ExperimentConfig::load(&request.config).map_err(RunError::Validation)?;
    if let Some(seed) = request.seed {
        cfg.seed = seed;
    }
    if let Some(steps) = request.steps {
        cfg.parameters.insert("steps".into(), ParamValue::Number(steps as f64));
    }
    let experiment = cfg.experiment_tag(request.experiment.as_deref()).map_err(RunError::Validation)?;
    let params = cfg.resolve(experiment).map_err(RunError::Validation)?;
    Ok((cfg, experiment, params))
}

/// All diagnostics for a config file; an empty list means it is runnable.
pub fn validate(path: &Path) -> Vec<Diagnostic> {
    let request = Request {
        config: path.to_path_buf(),
        ..Request::default()
    };
    match prepare(&request) {
        Ok(_) => Vec::new(),
        Err(RunError::Validation(d)) => d,
        Err(e) => vec![Diagnostic::new("config", e.to_string())],
    }
}

fn grid_echo(params: &Params) -> serde_json::Value {
    let mut grid = serde_json::Map::new();
    for key in ["steps", "tau", "duration", "durations", "periods"] {
        if let Some(v) = params.get(key) {
            grid.insert(key.into(), config::param_json(v));
        }
    }
    serde_json::Value::Object(grid)
}

pub fn run(request: &Request) -> Result<RunArtifacts, RunError> {
    let (cfg, experiment, params) = prepare(request)?;
    log::info!("running {experiment} with seed {}", cfg.seed);
    let started = Instant::now();
    let output = experiment.run(&params, cfg.seed).map_err(RunError::Numerical)?;
    let wall = started.elapsed().as_secs_f64();

    let dir = request
        .out_dir
        .clone()
        .or_else(|| cfg.output_path.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| RunError::Output(format!("{}: {e}", dir.display())))?;
    let csv = dir.join(format!("{}.csv", experiment.tag()));
    let metadata = dir.join(format!("{}.json", experiment.tag()));
    fs::write(&csv, output.table.to_csv()).map_err(|e| RunError::Output(format!("{}: {e}", csv.display())))?;
    let meta = json!({
        "tool": "qsl",
        "version": env!("CARGO_PKG_VERSION"),
        "experiment": experiment.tag(),
        "preset": cfg.preset,
        "seed": cfg.seed,
        "config": cfg.to_json(),
        "parameters": params.to_json(),
        "grid": grid_echo(&params),
        "columns": output.table.columns,
        "rows": output.table.rows.len(),
        "data_file": csv.file_name().map(|n| n.to_string_lossy().into_owned()),
        "wall_time_seconds": wall,
        "summary": output.summary,
    });
    let text = serde_json::to_string_pretty(&meta).map_err(|e| RunError::Output(e.to_string()))?;
    fs::write(&metadata, text + "\n").map_err(|e| RunError::Output(format!("{}: {e}", metadata.display())))?;
    log::info!("wrote {} and {} in {wall:.2} s", csv.display(), metadata.display());
    Ok(RunArtifacts { csv, metadata, output })
}

/// Listing of experiments, their parameters and the presets.
pub fn listing() -> String {
    use std::fmt::Write as _;
    let mut s = String::from("experiments:\n");
    for e in Experiment::ALL {
        let _ = writeln!(s, "  {:<15} {}", e.tag(), e.description());
        for p in e.schema() {
            let default = match p.default {
                config::Default::Required => "required".to_string(),
                config::Default::Number(x) => format!("default {x}"),
                config::Default::List(v) => format!("default {v:?}"),
            };
            let _ = writeln!(s, "      {:<15} {} ({default})", p.name, p.help);
        }
    }
    s.push_str("presets:\n");
    for p in qsl_core::models::Preset::ALL {
        let _ = writeln!(s, "  {:<15} {}", p.name(), p.description());
    }
    s
}

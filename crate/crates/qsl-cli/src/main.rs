use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qsl_cli::{listing, run, validate, Request, EXIT_VALIDATION};

/// Quantum speed limit experiment runner.
#[derive(Debug, Parser)]
#[command(name = "qsl", version)]
struct Cli {
    /// Experiment tag, `list`, or `validate`.
    command: String,
    /// Path to the flat JSON config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output_path` in the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// RNG seed (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
    /// Step count (overrides the config).
    #[arg(long, allow_negative_numbers = true)]
    steps: Option<i64>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command.as_str() {
        "list" => {
            print!("{}", listing());
            ExitCode::SUCCESS
        }
        "validate" => {
            let Some(path) = cli.config else {
                eprintln!("validate requires --config <path>");
                return ExitCode::from(EXIT_VALIDATION as u8);
            };
            let diags = validate(&path);
            if diags.is_empty() {
                println!("{}: ok", path.display());
                ExitCode::SUCCESS
            } else {
                for d in &diags {
                    println!("{d}");
                }
                ExitCode::from(EXIT_VALIDATION as u8)
            }
        }
        tag => {
            let Some(config) = cli.config else {
                eprintln!("{tag} requires --config <path>");
                return ExitCode::from(EXIT_VALIDATION as u8);
            };
            let request = Request {
                experiment: Some(tag.to_string()),
                config,
                out_dir: cli.out,
                seed: cli.seed,
                steps: cli.steps,
            };
            match run(&request) {
                Ok(a) => {
                    println!("{}", a.csv.display());
                    println!("{}", a.metadata.display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
    }
}

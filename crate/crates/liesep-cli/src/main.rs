use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use liesep_cli::definition::{load, parse_definition, parse_systems};
use liesep_cli::examples::{by_name, A13Variant};
use liesep_cli::report::{run, Stage};
use liesep_cli::{digits_from_env, render, write_atomic, CliError};
use liesep_core::symcore::{parse_q, Q};

#[derive(Parser)]
#[command(name = "liesep", version, about = "Lie-algebraic operators: metrics, curvature, gauge and separability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run pipeline stages on an operator definition.
    Run {
        file: PathBuf,
        /// Every stage (the default when no --stage is given).
        #[arg(long, conflicts_with = "stage")]
        all: bool,
        #[arg(long, value_enum)]
        stage: Vec<Stage>,
        /// Overrides options.systems, e.g. `ellipsoidal:2:1,spherical`.
        #[arg(long, value_delimiter = ',')]
        systems: Vec<String>,
        /// Report destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a built-in definition (a13 or sl4) and its golden expectations.
    Example {
        name: String,
        /// Write `<name>.json` and `<name>.expected.json` here instead of
        /// printing the definition.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "consistent")]
        variant: A13Variant,
        #[arg(long, default_value = "1")]
        alpha: String,
        #[arg(long, default_value = "2")]
        beta: String,
        #[arg(long, default_value = "3")]
        gamma: String,
    },
}

fn io_err(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::new("io_error", format!("{}: {}", path.display(), e))
}

fn cmd_run(file: PathBuf, stage: Vec<Stage>, systems: Vec<String>, out: Option<PathBuf>) -> Result<bool, CliError> {
    let digits = digits_from_env()?;
    let text = fs::read_to_string(&file).map_err(|e| io_err(&file, e))?;
    let def = load(&parse_definition(&text)?, digits)?;
    let systems = if systems.is_empty() { None } else { Some(parse_systems(&systems)?) };
    let stages = if stage.is_empty() { Stage::ALL.to_vec() } else { stage };
    let report = run(&def, &stages, systems.as_deref());
    let body = render(&report.to_json());
    match out {
        Some(p) => write_atomic(&p, &body).map_err(|e| io_err(&p, e))?,
        None => print!("{}", body),
    }
    Ok(!report.failed())
}

fn cmd_example(name: &str, out_dir: Option<PathBuf>, variant: A13Variant, params: [String; 3]) -> Result<(), CliError> {
    let mut qs: Vec<Q> = Vec::new();
    for (flag, s) in ["--alpha", "--beta", "--gamma"].iter().zip(&params) {
        qs.push(parse_q(s).map_err(|e| CliError::new("invalid_argument", format!("{}: {}", flag, e)))?);
    }
    let files = by_name(name, variant, qs.try_into().expect("three parameters"))?;
    let def = render(&serde_json::to_value(&files.definition).expect("definition serializes"));
    match out_dir {
        None => print!("{}", def),
        Some(dir) => {
            fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
            let d = dir.join(format!("{}.json", name));
            let x = dir.join(format!("{}.expected.json", name));
            write_atomic(&d, &def).map_err(|e| io_err(&d, e))?;
            write_atomic(&x, &render(&files.expected)).map_err(|e| io_err(&x, e))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Run { file, all: _, stage, systems, out } => cmd_run(file, stage, systems, out),
        Command::Example { name, out_dir, variant, alpha, beta, gamma } => {
            cmd_example(&name, out_dir, variant, [alpha, beta, gamma]).map(|_| true)
        }
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", e);
            ExitCode::from(2)
        }
    }
}

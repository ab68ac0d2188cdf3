//! `servo-sim run`: load a flat config, run one scenario (or a directory of
//! them), write the CSV time series and print the metrics table.
//!
//! Exit codes: 0 success, 1 configuration or I/O error, 2 numerical blow-up.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use servo_core::config::{load_config, parse_supply, RunConfig};
use servo_core::csv::write_csv;
use servo_core::summary::summarize;
use servo_core::{run, Error};

#[derive(Parser, Debug)]
#[command(name = "servo-sim", version, about = "Electrohydraulic servo-actuator simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a scenario and report tracking and stability metrics.
    Run(RunArgs),
}

#[derive(clap::Args, Debug, Clone)]
struct RunArgs {
    /// Flat key-value config file; omitted keys take the defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV output path (overrides `out` in the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Supply pressure scenario: constant-ps or varying-ps.
    #[arg(long)]
    scenario: Option<String>,
    /// Simulated duration in seconds.
    #[arg(long)]
    duration: Option<f64>,
    /// Disable the fuzzy compensation (phi = 0, dhat = 0).
    #[arg(long)]
    freeze_adaptation: bool,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    print_config: bool,
    /// Run every `*.toml` config in this directory; each writes `<stem>.csv` next to it.
    #[arg(long, conflicts_with_all = ["config", "out"])]
    batch: Option<PathBuf>,
}

enum Failure {
    Config(Error),
    BlowUp(Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::BlowUp(_) => 2,
        }
    }

    fn error(&self) -> &Error {
        match self {
            Failure::Config(e) | Failure::BlowUp(e) => e,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BlowUp { .. } | Error::NonFinite(_) => Failure::BlowUp(e),
            other => Failure::Config(other),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let Command::Run(args) = cli.command;
    let outcome = match &args.batch {
        Some(dir) => run_batch(dir, &args),
        None => run_single(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.error());
            ExitCode::from(f.code())
        }
    }
}

fn resolve(config: Option<&Path>, args: &RunArgs) -> Result<RunConfig, Failure> {
    let mut cfg = match config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    if let Some(name) = &args.scenario {
        cfg.scenario.supply = parse_supply(name)?;
    }
    if let Some(d) = args.duration {
        cfg.scenario.duration = d;
    }
    if args.freeze_adaptation {
        cfg.controller = cfg.controller.frozen();
    }
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cfg: &RunConfig, out: Option<&Path>) -> Result<String, Failure> {
    let start = Instant::now();
    let result = run(&cfg.scenario, &cfg.plant, &cfg.controller, &cfg.estimator)?;
    let wall = start.elapsed();
    if let Some(path) = out {
        write_csv(&result, path)?;
    }
    Ok(summarize(&result, wall))
}

fn run_single(args: &RunArgs) -> Result<(), Failure> {
    let cfg = resolve(args.config.as_deref(), args)?;
    if args.print_config {
        print!("{}", cfg.dump());
        return Ok(());
    }
    let report = execute(&cfg, cfg.output_path().as_deref())?;
    print!("{report}");
    Ok(())
}

fn run_batch(dir: &Path, args: &RunArgs) -> Result<(), Failure> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        reason: e.to_string(),
    })?;
    let mut configs: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    configs.sort();

    let outcomes: Vec<(PathBuf, Result<String, Failure>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|path| {
                scope.spawn(move || {
                    let outcome = resolve(Some(path), args).and_then(|cfg| {
                        if args.print_config {
                            return Ok(cfg.dump());
                        }
                        execute(&cfg, Some(&path.with_extension("csv")))
                    });
                    (path.clone(), outcome)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("batch worker panicked")).collect()
    });

    let mut worst: Option<Failure> = None;
    for (path, outcome) in outcomes {
        println!("== {}", path.display());
        match outcome {
            Ok(report) => print!("{report}"),
            Err(f) => {
                eprintln!("error: {}: {}", path.display(), f.error());
                if worst.as_ref().is_none_or(|w| f.code() > w.code()) {
                    worst = Some(f);
                }
            }
        }
    }
    worst.map_or(Ok(()), Err)
}

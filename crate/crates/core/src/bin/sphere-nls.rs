use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sphere_nls::harness::{parse_config_for, run_experiment, write_csv, Experiment, HarnessError};

/// Zonal spectral simulator and estimate lab for the quintic NLS on S³.
#[derive(Parser)]
#[command(name = "sphere-nls", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Configuration file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed, overriding the file.
    #[arg(long)]
    seed: Option<u64>,
    /// Extra `key=value` settings applied after the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Strang trajectory of the sphere NLS.
    Simulate(RunArgs),
    /// Extinction scan of a concentrated profile.
    Extinction(RunArgs),
    /// Weyl sum bound verification.
    Weyl(RunArgs),
    /// Strichartz ratio scan.
    Strichartz(RunArgs),
    /// Eigenfunction L^p growth scan.
    Sogge(RunArgs),
    /// Cap concentration of eigenfunctions.
    Concentration(RunArgs),
    /// Trilinear space-time estimate scan.
    Trilinear(RunArgs),
    /// High-frequency/low-frequency kernel entries.
    Hflfi(RunArgs),
    /// Spectral projector against kernel quadrature.
    ProjectorCheck(RunArgs),
    /// Sphere solution against the rescaled Euclidean solution.
    ProfileCompare(RunArgs),
    /// Radial NLS on the Dirichlet ball.
    Ball(RunArgs),
    /// Ball flow against the conjugated sphere flow.
    BallVerify(RunArgs),
    /// List the keys an experiment accepts.
    Params {
        /// Experiment name.
        experiment: String,
    },
}

fn execute(experiment: Experiment, args: &RunArgs) -> Result<(), HarnessError> {
    let text = match &args.config {
        Some(path) => std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut cfg = parse_config_for(&text, experiment)?;
    for item in &args.set {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| HarnessError::Config { line: None, message: format!("--set expects KEY=VALUE, got {item:?}") })?;
        cfg.set(key.trim(), value, None)?;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    let table = run_experiment(&cfg)?;
    for note in &table.notes {
        eprintln!("warning: {note}");
    }
    match &cfg.out {
        Some(path) => write_csv(&table, path),
        None => std::io::stdout()
            .write_all(table.to_csv_string()?.as_bytes())
            .map_err(|e| HarnessError::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, args) = match cli.command {
        Command::Simulate(a) => (Experiment::Simulate, a),
        Command::Extinction(a) => (Experiment::Extinction, a),
        Command::Weyl(a) => (Experiment::Weyl, a),
        Command::Strichartz(a) => (Experiment::Strichartz, a),
        Command::Sogge(a) => (Experiment::Sogge, a),
        Command::Concentration(a) => (Experiment::Concentration, a),
        Command::Trilinear(a) => (Experiment::Trilinear, a),
        Command::Hflfi(a) => (Experiment::Hflfi, a),
        Command::ProjectorCheck(a) => (Experiment::ProjectorCheck, a),
        Command::ProfileCompare(a) => (Experiment::ProfileCompare, a),
        Command::Ball(a) => (Experiment::Ball, a),
        Command::BallVerify(a) => (Experiment::BallVerify, a),
        Command::Params { experiment } => {
            let Some(e) = Experiment::from_name(&experiment) else {
                eprintln!("error: unknown experiment {experiment:?}");
                return ExitCode::from(1);
            };
            for p in e.params() {
                println!("{} = {}\t# {}; {}", p.key, p.default, p.kind, p.doc);
            }
            return ExitCode::SUCCESS;
        }
    };
    match execute(experiment, &args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

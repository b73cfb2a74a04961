use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rossbytrap::{prepare, report::report, run_scenario, CliError, Overrides, Scenario};

#[derive(Parser)]
#[command(name = "rossbytrap", version, about = "Rossby-wave trapping studies for the rotating shallow-water system")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "ROSSBYTRAP_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration; defaults apply to absent keys.
    #[arg(long, env = "ROSSBYTRAP_CONFIG")]
    config: Option<PathBuf>,
    /// Output directory, overriding the configuration.
    #[arg(long, env = "ROSSBYTRAP_OUT")]
    out: Option<PathBuf>,
    /// Comma-separated ε values such as `1/8,1/16,1/32`.
    #[arg(long, env = "ROSSBYTRAP_EPSILON_LIST")]
    epsilon_list: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Trace rays and tabulate the drift F three ways.
    Rays(RunArgs),
    /// Sample the trapped set and its small-ξ₁ scaling.
    Lambda(RunArgs),
    /// Evolve a WKB datum and record the local mass.
    Evolve(RunArgs),
    /// Mode decomposition round trip and scalar Rossby reduction.
    Modes(RunArgs),
    /// Poincaré levels against Bohr–Sommerfeld.
    Spectrum(RunArgs),
    /// Tables and figures from finished run directories.
    Report {
        #[arg(long, env = "ROSSBYTRAP_OUT")]
        out: PathBuf,
        runs: Vec<PathBuf>,
    },
}

fn execute(cli: Cli) -> Result<String, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::compute("thread pool", e))?;
    }
    let (scenario, args) = match cli.command {
        Command::Rays(a) => (Scenario::Rays, a),
        Command::Lambda(a) => (Scenario::Lambda, a),
        Command::Evolve(a) => (Scenario::Evolve, a),
        Command::Modes(a) => (Scenario::Modes, a),
        Command::Spectrum(a) => (Scenario::Spectrum, a),
        Command::Report { out, runs } => {
            let m = report(&runs, &out)?;
            return Ok(format!("report: {} outputs in {}", m.outputs.len(), out.display()));
        }
    };
    let ov = Overrides { config: args.config, out: args.out, epsilon_list: args.epsilon_list };
    let (cfg, dest) = prepare(scenario, &ov)?;
    let m = run_scenario(scenario, &cfg, &dest)?;
    Ok(format!("{}: {} outputs in {}", scenario.name(), m.outputs.len(), dest.display()))
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(msg) => {
            println!("{msg}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use ablation_core::experiments::{
    run_deflection_map, run_eccentricity_sweep, run_fleet_design, run_formation_design, run_shaped_design,
    run_validation, ResultTable, Scenario,
};
use ablation_core::Error;
use clap::{Parser, Subcommand};
use log::info;

/// Exit status for an invalid scenario or a failed validation check.
const EXIT_VALIDATION: u8 = 1;
/// Exit status for a failure while running an experiment.
const EXIT_RUNTIME: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "ablation", version, about = "Asteroid deflection by formation-flying solar sublimation")]
struct Cli {
    /// Scenario file (JSON)
    #[arg(long, global = true, value_name = "PATH")]
    scenario: Option<PathBuf>,

    /// Output directory; defaults to the scenario's output_dir, then ./results
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Random seed, overriding the scenario's
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Worker threads for grid cells and optimizer evaluations
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Pareto fronts of natural formation orbits
    FormationDesign,
    /// Pareto front of controlled shaped formation orbits
    ShapedDesign,
    /// Impact parameter against launched mass over the fleet design space
    FleetDesign,
    /// Impact parameter over spacecraft count and warning time
    DeflectionMap,
    /// Impact parameter over aphelion and perihelion radii
    EccentricitySweep,
    /// Run the built-in oracle checks
    Validate,
}

enum Failure {
    Validation(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

fn load_scenario(cli: &Cli) -> Result<Scenario, Failure> {
    let path = cli
        .scenario
        .as_ref()
        .ok_or_else(|| Failure::Validation("--scenario <PATH> is required for this command".into()))?;
    let mut sc = Scenario::from_path(path)?;
    if let Some(seed) = cli.seed {
        sc.seed = seed;
    }
    Ok(sc)
}

fn output_dir(cli: &Cli, sc: Option<&Scenario>) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| sc.and_then(|s| s.output_dir.clone()))
        .unwrap_or_else(|| PathBuf::from("results"))
}

fn write_table(table: &ResultTable, dir: &std::path::Path) -> Result<(), Failure> {
    let (csv, meta) = table.write(dir).map_err(|e| Failure::Runtime(e.to_string()))?;
    println!("wrote {} ({} rows)", csv.display(), table.rows.len());
    println!("wrote {}", meta.display());
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Validation("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    let started = Instant::now();
    if cli.command == Command::Validate {
        let seed = cli.seed.unwrap_or(0);
        let report = run_validation(seed)?;
        for c in &report.checks {
            let status = if c.passed { "ok  " } else { "FAIL" };
            println!("{status} {:<48} {:>12.3e} (tol {:.1e})  {}", c.name, c.value, c.tolerance, c.detail);
        }
        if cli.out.is_some() || cli.scenario.is_some() {
            let sc = cli.scenario.as_ref().map(|_| load_scenario(cli)).transpose()?;
            write_table(&report.to_table(seed)?, &output_dir(cli, sc.as_ref()))?;
        }
        if !report.passed() {
            return Err(Failure::Validation("one or more oracle checks failed".into()));
        }
        return Ok(());
    }

    let sc = load_scenario(cli)?;
    let table = match cli.command {
        Command::FormationDesign => run_formation_design(&sc)?,
        Command::ShapedDesign => run_shaped_design(&sc)?,
        Command::FleetDesign => run_fleet_design(&sc)?,
        Command::DeflectionMap => run_deflection_map(&sc)?,
        Command::EccentricitySweep => run_eccentricity_sweep(&sc)?,
        Command::Validate => unreachable!(),
    };
    info!("{:?} finished in {:.1} s", cli.command, started.elapsed().as_secs_f64());
    if table.rows.is_empty() {
        eprintln!("warning: {} produced no feasible rows", table.name);
    }
    write_table(&table, &output_dir(cli, Some(&sc)))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage_error = e.use_stderr();
            let _ = e.print();
            return if usage_error {
                ExitCode::from(EXIT_VALIDATION)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};

use bvlab_cli::config::{experiment_list, keys_help, Experiment};
use bvlab_cli::{load_config, oracle, output, run, CliError};

#[derive(Parser)]
#[command(name = "bvlab", version, about = "Discrete 1-capacity and fine topology experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory, overriding output.dir.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override a config key, e.g. --set params.seed=7.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// List the experiments.
    List,
    /// Cross-check the solvers against brute-force enumeration on an RxC block.
    Oracle {
        #[arg(long, default_value = "3x3")]
        grid: String,
        /// Also write report.csv into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("BVLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("BVLAB_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("BVLAB_THREADS: {e}")))
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    configure_threads()?;
    match command {
        Command::List => {
            for e in Experiment::ALL {
                println!("{:<16} {}", e.name(), e.summary());
            }
            Ok(0)
        }
        Command::Run { config, out, set } => {
            let mut overrides = set;
            if let Some(dir) = out {
                overrides.push(format!("output.dir={}", dir.display()));
            }
            let cfg = load_config(&config, &overrides)?;
            let report = run(&cfg)?;
            for row in report.failures() {
                eprintln!(
                    "FAIL {} at scale {}: lhs {} rhs {} tol {}",
                    row.name, row.scale, row.lhs, row.rhs, row.tolerance
                );
            }
            println!("{}", report.summary());
            println!("wrote {} files to {}", report.files.len(), cfg.out_dir.display());
            Ok(report.exit_code())
        }
        Command::Oracle { grid, out, seed } => {
            let (rows, cols) = oracle::parse_grid(&grid)?;
            let checks = oracle::grid_check(rows, cols, seed)?;
            for r in &checks {
                println!("{:<26} {:<5} lhs {} rhs {}", r.name, r.status, r.lhs, r.rhs);
            }
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                output::write_report(&dir.join("report.csv"), &checks)?;
            }
            Ok(i32::from(checks.iter().any(|r| r.failed())))
        }
    }
}

fn main() -> ExitCode {
    let command = Cli::command()
        .mut_subcommand("run", |c| c.after_help(keys_help()))
        .after_help(format!("Experiments: {}", experiment_list()));
    let matches = command.get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("bvlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

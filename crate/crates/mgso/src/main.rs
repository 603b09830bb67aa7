//! Thin command-line wrapper around the benchmark harness. All logic lives
//! in the library; this binary only parses flags and maps errors to exit
//! codes (0 success, 1 runtime failure, 2 config/usage error).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mgso::bench::BenchmarkFunction;
use mgso::harness::{
    aggregate_quartiles, default_checkpoints, emit_plot, emit_poi_map, load_config,
    read_quartiles_csv, read_records_csv, run_experiment_to_csv, write_quartiles_csv,
    HarnessError, PoiMapArgs,
};

#[derive(Parser)]
#[command(name = "mgso", version, about = "Surrogate-optimizer benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment grid and write one CSV row per evaluation.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Aggregate a records CSV into per-checkpoint quartiles.
    Aggregate {
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated evaluation checkpoints; defaults to a 1-2-5 grid
        /// up to the longest run.
        #[arg(long)]
        checkpoints: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a quartile CSV as an SVG convergence plot.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit a model to samples of a 2D benchmark and dump the improvement
    /// probability on a lattice (CSV + SVG heat map).
    PoiMap {
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = 40)]
        training: usize,
        #[arg(long, default_value_t = 50)]
        grid: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output prefix; `.csv` and `.svg` are appended.
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Run { config, out } => {
            let cfg = load_config(&config)?;
            let written = run_experiment_to_csv(&cfg, &out)?;
            eprintln!("wrote {written} records to {}", out.display());
            Ok(())
        }
        Command::Aggregate { input, checkpoints, out } => {
            let records = read_records_csv(&input)?;
            let checkpoints = match checkpoints {
                Some(list) => {
                    let mut parsed = Vec::new();
                    for piece in list.split(',') {
                        let piece = piece.trim();
                        let value: usize = piece.parse().map_err(|_| {
                            HarnessError::Config(format!(
                                "checkpoints: cannot parse {piece:?} as an evaluation index"
                            ))
                        })?;
                        if value == 0 {
                            return Err(HarnessError::Config(
                                "checkpoints: indices start at 1".into(),
                            ));
                        }
                        parsed.push(value);
                    }
                    if parsed.is_empty() {
                        return Err(HarnessError::Config("checkpoints: list is empty".into()));
                    }
                    parsed
                }
                None => {
                    let max_eval = records.iter().map(|r| r.eval_index).max().unwrap_or(1);
                    default_checkpoints(max_eval)
                }
            };
            let rows = aggregate_quartiles(&records, &checkpoints);
            write_quartiles_csv(&out, &rows)?;
            eprintln!("wrote {} quartile rows to {}", rows.len(), out.display());
            Ok(())
        }
        Command::Plot { input, out } => {
            let rows = read_quartiles_csv(&input)?;
            emit_plot(&rows, &out)?;
            eprintln!("wrote plot to {}", out.display());
            Ok(())
        }
        Command::PoiMap { function, training, grid, seed, out } => {
            let function = BenchmarkFunction::parse(&function).ok_or_else(|| {
                HarnessError::Config(format!(
                    "function: unknown function {function:?} (expected sphere, rosenbrock or rastrigin)"
                ))
            })?;
            let args = PoiMapArgs { function, n_training: training, grid, seed };
            emit_poi_map(&args, &out)?;
            eprintln!("wrote {}.csv and {}.svg", out.display(), out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

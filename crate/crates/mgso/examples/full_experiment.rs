//! End-to-end harness pipeline in miniature: run a small experiment grid,
//! aggregate quartiles at checkpoints, and render the convergence plot.
//! The same pipeline is available from the command line as
//! `mgso run`, `mgso aggregate`, and `mgso plot`.
//!
//! ```text
//! cargo run --release --example full_experiment
//! ```

use mgso::harness::{
    aggregate_quartiles, default_checkpoints, emit_plot, parse_config, run_experiment,
    write_quartiles_csv, write_records_csv,
};

fn main() {
    let cfg = parse_config(
        r#"
functions = ["sphere", "rastrigin"]
dims = [2]
budget_per_dim = 60
trials = 5
algorithms = ["mgso", "random"]
master_seed = 42
fit_restarts = 2
fit_max_evals = 60
max_training_points = 120
"#,
    )
    .expect("config");

    let records = run_experiment(&cfg).expect("experiment");
    println!("ran {} evaluations across the grid", records.len());

    let dir = std::env::temp_dir();
    let records_path = dir.join("experiment_records.csv");
    write_records_csv(&records_path, &records).expect("write records");

    let checkpoints = default_checkpoints(120);
    let rows = aggregate_quartiles(&records, &checkpoints);
    let quartiles_path = dir.join("experiment_quartiles.csv");
    write_quartiles_csv(&quartiles_path, &rows).expect("write quartiles");

    let plot_path = dir.join("experiment_plot.svg");
    emit_plot(&rows, &plot_path).expect("plot");

    println!("records:   {}", records_path.display());
    println!("quartiles: {}", quartiles_path.display());
    println!("plot:      {}", plot_path.display());
    for row in rows.iter().filter(|r| r.checkpoint == 120) {
        println!(
            "final medians: {} on {} -> {:.3e}",
            row.algorithm.name(),
            row.function.name(),
            row.median
        );
    }
}

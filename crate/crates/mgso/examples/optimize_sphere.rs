//! Minimize a shifted sphere instance and print convergence milestones.
//!
//! ```text
//! cargo run --release --example optimize_sphere
//! ```

use mgso::bench::{BenchmarkFunction, BenchmarkInstance};
use mgso::solver::{run_mgso, MgsoConfig};

fn main() {
    let instance = BenchmarkInstance::new(BenchmarkFunction::Sphere, 2, 1);
    println!(
        "sphere 2D, optimum {:?} with value {:.3}\n",
        instance.optimum_point(),
        instance.f_opt()
    );

    let mut cfg = MgsoConfig::new(400, 2024);
    cfg.fit.n_restarts = 2;
    cfg.fit.max_evals_per_restart = 80;
    cfg.max_training_points = Some(120);
    let run = run_mgso(|x| instance.evaluate(x), instance.bounds(), cfg).expect("run");

    println!("{:>6}  {:>12}", "eval", "f_delta");
    for checkpoint in [10, 20, 50, 100, 200, 400] {
        let record = run
            .records
            .iter()
            .take_while(|r| r.eval_index <= checkpoint)
            .last()
            .unwrap();
        println!("{checkpoint:>6}  {:12.3e}", instance.f_delta(record.f_best));
    }
    println!(
        "\nbest point {:?} after {} evaluations and {} restrictions",
        run.best_point,
        run.records.len(),
        run.restrictions.len()
    );
}

//! The point of sampling: on a rugged landscape, drawing the population
//! from the improvement probability walks out of local basins that a
//! greedy acquisition maximizer drills into. This runs both variants on
//! the same Rastrigin instances and compares their final distances to the
//! optimum.
//!
//! ```text
//! cargo run --release --example escape_local_optima
//! ```

use mgso::bench::{BenchmarkFunction, BenchmarkInstance};
use mgso::solver::{run_mgso, MgsoConfig, PopulationStrategy};

fn main() {
    println!("rastrigin 2D, budget 400, five instances\n");
    println!("{:>10}  {:>12}  {:>12}", "instance", "sampling", "greedy");
    let mut sampled_better = 0;
    for instance_id in [1, 2, 3, 31, 32] {
        let instance = BenchmarkInstance::new(BenchmarkFunction::Rastrigin, 2, instance_id);
        let mut finals = Vec::new();
        for strategy in [PopulationStrategy::SamplePoi, PopulationStrategy::GreedyPoi] {
            let mut cfg = MgsoConfig::new(400, 9 + instance_id);
            cfg.strategy = strategy;
            cfg.fit.n_restarts = 2;
            cfg.fit.max_evals_per_restart = 80;
            cfg.max_training_points = Some(120);
            let run = run_mgso(|x| instance.evaluate(x), instance.bounds(), cfg).expect("run");
            finals.push(instance.f_delta(run.best_value));
        }
        if finals[0] <= finals[1] {
            sampled_better += 1;
        }
        println!("{instance_id:>10}  {:12.3e}  {:12.3e}", finals[0], finals[1]);
    }
    println!("\nsampling matched or beat greedy selection on {sampled_better}/5 instances");
}

//! Paired comparison against random search on 2D Rosenbrock at the same
//! evaluation budget.
//!
//! ```text
//! cargo run --release --example compare_random
//! ```

use mgso::bench::{BenchmarkFunction, BenchmarkInstance};
use mgso::optim::random_search;
use mgso::solver::{run_mgso, MgsoConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let budget = 400;
    println!("rosenbrock 2D, budget {budget}\n");
    println!("{:>10}  {:>12}  {:>12}", "instance", "surrogate", "random");
    for instance_id in [1, 2, 3] {
        let instance = BenchmarkInstance::new(BenchmarkFunction::Rosenbrock, 2, instance_id);
        let mut cfg = MgsoConfig::new(budget, 5 + instance_id);
        cfg.fit.n_restarts = 2;
        cfg.fit.max_evals_per_restart = 80;
        cfg.max_training_points = Some(120);
        let surrogate = run_mgso(|x| instance.evaluate(x), instance.bounds(), cfg).expect("run");

        let mut rng = ChaCha8Rng::seed_from_u64(5 + instance_id);
        let random = random_search(|x| instance.evaluate(x), &instance.bounds(), budget, &mut rng);

        println!(
            "{instance_id:>10}  {:12.3e}  {:12.3e}",
            instance.f_delta(surrogate.best_value),
            instance.f_delta(random.best_value)
        );
    }
}

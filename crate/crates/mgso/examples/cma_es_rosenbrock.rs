//! Run the bundled CMA-ES baseline on 5D Rosenbrock.
//!
//! ```text
//! cargo run --release --example cma_es_rosenbrock
//! ```

use mgso::optim::{basic_cma_es, CmaEsOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
        .sum()
}

fn main() {
    println!("{:>6}  {:>12}  {:>8}  {:>10}", "seed", "best", "evals", "converged");
    for seed in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let opts = CmaEsOptions { max_evals: 20_000, f_target: Some(1e-10), ..Default::default() };
        let res = basic_cma_es(rosenbrock, &[0.0; 5], 0.5, None, &opts, &mut rng).expect("run");
        println!(
            "{seed:>6}  {:12.3e}  {:>8}  {:>10}",
            res.best_value, res.n_evals, res.converged
        );
    }
}

//! Fit a Gaussian process to noisy samples of a 1D function and print the
//! posterior mean and standard deviation along a grid.
//!
//! ```text
//! cargo run --release --example fit_gp_1d
//! ```

use mgso::fit::{build_posterior_with_jitter, fit_hyperparams, FitConfig};
use mgso::gp::Dataset;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let truth = |x: f64| (3.0 * x).sin() + 0.5 * x;
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let mut dataset = Dataset::new(1);
    for _ in 0..25 {
        let x = rng.random_range(-1.0..1.0);
        let noise = 0.05 * rng.random_range(-1.0..1.0);
        dataset.push(&[x], truth(x) + noise);
    }

    let hp = fit_hyperparams(&dataset, &FitConfig::default(), &mut rng)
        .expect("fit should succeed");
    let lengths = hp.length_scales.lengths(1);
    println!(
        "fitted: signal variance {:.4}, length-scale {:.4}, noise {:.2e}\n",
        hp.signal_variance, lengths[0], hp.noise
    );

    let posterior = build_posterior_with_jitter(&dataset, &hp).expect("posterior builds");
    println!("{:>6}  {:>9}  {:>9}  {:>9}", "x", "truth", "mean", "sd");
    for i in 0..=20 {
        let x = -1.0 + 2.0 * i as f64 / 20.0;
        let p = posterior.predict(&[x]);
        println!(
            "{x:6.2}  {:9.4}  {:9.4}  {:9.4}",
            truth(x),
            p.mean,
            p.variance.sqrt()
        );
    }
}

//! Sample a candidate population from the improvement probability of a
//! surrogate fitted to a few Rastrigin evaluations, and show how the
//! positive-definiteness screen and threshold fallbacks behave.
//!
//! ```text
//! cargo run --release --example poi_population
//! ```

use mgso::bench::{BenchmarkFunction, BenchmarkInstance};
use mgso::fit::{build_posterior_with_jitter, fit_hyperparams, FitConfig};
use mgso::gp::Dataset;
use mgso::poi::{choose_thresholds, poi, sample_poi};
use mgso::solver::{initial_sample, ScalingTransform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let instance = BenchmarkInstance::with_parameters(
        BenchmarkFunction::Rastrigin,
        2,
        vec![0.0, 0.0],
        0.0,
    );
    let bounds = instance.bounds();
    let transform = ScalingTransform::from_bounds(&bounds);
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    let points = initial_sample(&bounds, 30, &mut rng);
    let scaled: Vec<Vec<f64>> = points.iter().map(|p| transform.forward(p)).collect();
    let values: Vec<f64> = points.iter().map(|p| instance.evaluate(p)).collect();
    let dataset = Dataset::from_rows(&scaled, &values);

    let hp = fit_hyperparams(&dataset, &FitConfig::default(), &mut rng).expect("fit");
    let posterior = build_posterior_with_jitter(&dataset, &hp).expect("posterior");
    let thresholds = choose_thresholds(posterior.dataset());
    println!(
        "thresholds: primary {:.3}, fallbacks {:.3} / {:.3}",
        thresholds.primary, thresholds.fallback_mid, thresholds.fallback_far
    );

    let batch = sample_poi(&posterior, &thresholds, 12, &mut rng);
    println!(
        "accepted {} of 12 requested points at threshold {:.3} \
         ({} proposals, {} screened out, exhausted: {})\n",
        batch.points.len(),
        batch.threshold_used,
        batch.n_proposals,
        batch.n_psd_rejections,
        batch.exhausted
    );

    println!("{:>8} {:>8}  {:>8}  {:>8}", "x1", "x2", "poi", "f(x)");
    for z in &batch.points {
        let x = transform.inverse(z);
        println!(
            "{:8.3} {:8.3}  {:8.3}  {:8.3}",
            x[0],
            x[1],
            poi(&posterior, z, batch.threshold_used),
            instance.evaluate(&x)
        );
    }
}

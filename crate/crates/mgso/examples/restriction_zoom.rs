//! Watch the input-space restriction zoom the search box onto the incumbent
//! as sampling starts rejecting or progress stalls.
//!
//! ```text
//! cargo run --release --example restriction_zoom
//! ```

use mgso::bench::{BenchmarkFunction, BenchmarkInstance};
use mgso::solver::{run_mgso, MgsoConfig};

fn main() {
    let instance = BenchmarkInstance::new(BenchmarkFunction::Rastrigin, 2, 31);
    println!("rastrigin 2D, optimum at {:?}\n", instance.optimum_point());

    let mut cfg = MgsoConfig::new(400, 13);
    cfg.fit.n_restarts = 2;
    cfg.fit.max_evals_per_restart = 80;
    cfg.max_training_points = Some(120);
    let run = run_mgso(|x| instance.evaluate(x), instance.bounds(), cfg).expect("run");

    println!("{} restrictions over {} iterations:", run.restrictions.len(), run.iterations);
    for event in &run.restrictions {
        let widths: Vec<String> = event
            .lower
            .iter()
            .zip(&event.upper)
            .map(|(l, u)| format!("{:.4}", u - l))
            .collect();
        println!(
            "  iteration {:>3} (eval {:>3}): box widths [{}], best f_delta {:.3e}",
            event.iteration,
            event.eval_count,
            widths.join(", "),
            instance.f_delta(
                run.records
                    .iter()
                    .take_while(|r| r.eval_index <= event.eval_count)
                    .last()
                    .unwrap()
                    .f_best
            )
        );
    }
    println!("\nfinal f_delta: {:.3e}", instance.f_delta(run.best_value));
}

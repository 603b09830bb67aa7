//! Loop-level behaviour that unit tests cannot see: the surrogate-minimum
//! injection against a dense-grid oracle, and the degraded mode taken when
//! hyper-parameter fitting cannot produce a usable model.

use mgso::bench::{BenchmarkFunction, BenchmarkInstance};
use mgso::fit::{build_posterior_with_jitter, fit_hyperparams, FitConfig, LogBounds};
use mgso::gp::Dataset;
use mgso::optim::{nelder_mead, BoxBounds, NelderMeadOptions};
use mgso::solver::{initial_sample, run_mgso, MgsoConfig, ScalingTransform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn surrogate_minimum_matches_dense_grid_oracle() {
    // 1D shifted sphere, 20 archive points: the simplex search over the
    // posterior mean must land on the dense-grid minimum of that mean, and
    // both must sit near the true optimum in scaled coordinates.
    let instance = BenchmarkInstance::new(BenchmarkFunction::Sphere, 1, 7);
    let bounds = instance.bounds();
    let transform = ScalingTransform::from_bounds(&bounds);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let points = initial_sample(&bounds, 20, &mut rng);
    let scaled: Vec<Vec<f64>> = points.iter().map(|p| transform.forward(p)).collect();
    let values: Vec<f64> = points.iter().map(|p| instance.evaluate(p)).collect();
    let dataset = Dataset::from_rows(&scaled, &values);

    let hp = fit_hyperparams(&dataset, &FitConfig::default(), &mut rng).unwrap();
    let posterior = build_posterior_with_jitter(&dataset, &hp).unwrap();

    // Start from the best archive point, as the loop does.
    let best_idx = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0;
    let unit = BoxBounds::symmetric(1, 1.0);
    let opts = NelderMeadOptions { max_evals: 200, tol_x: 1e-6, tol_f: 1e-12, ..Default::default() };
    let nm = nelder_mead(|z| posterior.predict_mean(z), &scaled[best_idx], Some(&unit), &opts)
        .unwrap();

    // Dense-grid oracle for the mean minimum.
    let grid_min = (0..=20_000)
        .map(|i| -1.0 + 2.0 * i as f64 / 20_000.0)
        .map(|x| (x, posterior.predict_mean(&[x])))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    assert!(
        (nm.best_point[0] - grid_min.0).abs() < 1e-3,
        "simplex {} vs grid {}",
        nm.best_point[0],
        grid_min.0
    );

    let true_scaled = transform.forward(instance.optimum_point())[0];
    assert!(
        (nm.best_point[0] - true_scaled).abs() < 0.1,
        "model minimum {} vs true optimum {true_scaled}",
        nm.best_point[0]
    );
}

#[test]
fn impossible_fit_bounds_degrade_to_uniform_sampling() {
    // Log bounds chosen so every decoded signal variance overflows to
    // infinity: every restart fails, no model is ever available, and the
    // loop must fall back to uniform populations while keeping its
    // accounting exact.
    let mut cfg = MgsoConfig::new(40, 5);
    cfg.population_size = Some(10);
    cfg.fit.log_bounds = Some(LogBounds {
        theta: (750.0, 760.0),
        ell: (-1.0, 1.0),
        noise: (-18.0, -17.0),
    });
    let bounds = BoxBounds::symmetric(2, 5.0);
    let mut calls = 0usize;
    let run = run_mgso(
        |x| {
            calls += 1;
            x.iter().map(|v| v * v).sum()
        },
        bounds.clone(),
        cfg,
    )
    .unwrap();
    assert_eq!(calls, 40);
    assert_eq!(run.records.len(), 40);
    assert!(run.evaluated_points.iter().all(|p| bounds.contains(p)));
    for w in run.records.windows(2) {
        assert!(w[1].f_best <= w[0].f_best);
    }
}

#[test]
fn transform_survives_many_restrictions() {
    // Round-trip accuracy after repeated zooming on a multimodal surface.
    let instance = BenchmarkInstance::new(BenchmarkFunction::Rastrigin, 2, 33);
    let mut cfg = MgsoConfig::new(300, 11);
    cfg.fit.n_restarts = 2;
    cfg.fit.max_evals_per_restart = 60;
    cfg.max_training_points = Some(100);
    let run = run_mgso(|x| instance.evaluate(x), instance.bounds(), cfg).unwrap();
    assert!(!run.restrictions.is_empty(), "expected at least one restriction");
    for event in &run.restrictions {
        let t = ScalingTransform::new(event.lower.clone(), event.upper.clone());
        let x = &event.best_point;
        let back = t.inverse(&t.forward(x));
        for (a, b) in x.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
        }
    }
}

#[test]
fn known_target_short_circuits_the_budget() {
    let instance = BenchmarkInstance::new(BenchmarkFunction::Sphere, 2, 3);
    let mut cfg = MgsoConfig::new(500, 17);
    cfg.fit.n_restarts = 2;
    cfg.fit.max_evals_per_restart = 60;
    cfg.known_optimum = Some(instance.f_opt());
    cfg.target_fdelta = Some(1e-3);
    let run = run_mgso(|x| instance.evaluate(x), instance.bounds(), cfg).unwrap();
    assert!(instance.f_delta(run.best_value) <= 1e-3);
    assert!(
        run.records.len() < 500,
        "target should stop the run early, used {}",
        run.records.len()
    );
}

//! Uniform random search over a box: the weakest sensible baseline.

use rand::Rng;

use super::{BoxBounds, OptResult};

/// Draws exactly `budget` uniform points and returns the running best.
pub fn random_search<F, R>(
    mut objective: F,
    bounds: &BoxBounds,
    budget: usize,
    rng: &mut R,
) -> OptResult
where
    F: FnMut(&[f64]) -> f64,
    R: Rng + ?Sized,
{
    assert!(budget >= 1, "budget must be at least 1");
    let mut best_point = Vec::new();
    let mut best_value = f64::INFINITY;
    for _ in 0..budget {
        let x = bounds.sample_uniform(rng);
        let raw = objective(&x);
        let value = if raw.is_finite() { raw } else { f64::INFINITY };
        if value < best_value || best_point.is_empty() {
            best_value = value;
            best_point = x;
        }
    }
    OptResult {
        best_point,
        best_value,
        n_evals: budget,
        converged: false,
    }
}

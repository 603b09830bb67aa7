//! Derivative-free optimizers: a bounded Nelder–Mead simplex, a basic
//! (μ/μ_w, λ) CMA-ES, and uniform random search. These serve three roles:
//! hyper-parameter fitting, locating the surrogate-model minimum, and
//! baselines in the benchmark harness.

mod cma_es;
mod nelder_mead;
mod random_search;

pub use cma_es::{basic_cma_es, CmaEsOptions};
pub use nelder_mead::{nelder_mead, NelderMeadOptions};
pub use random_search::random_search;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OptError {
    #[error("objective is not finite at the starting point")]
    NonFiniteStart,
    #[error("initial step size must be positive, got {0}")]
    InvalidSigma(f64),
    #[error("starting point lies outside the bounds")]
    StartOutOfBounds,
}

/// Axis-aligned box constraint `l ≤ x ≤ u` (componentwise, `l < u`).
#[derive(Debug, Clone, PartialEq)]
pub struct BoxBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxBounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len());
        assert!(!lower.is_empty());
        for (l, u) in lower.iter().zip(&upper) {
            assert!(l < u, "lower bound {l} must be below upper bound {u}");
        }
        BoxBounds { lower, upper }
    }

    /// The symmetric box `[−h, h]^D`.
    pub fn symmetric(dim: usize, half_width: f64) -> Self {
        assert!(half_width > 0.0);
        BoxBounds::new(vec![-half_width; dim], vec![half_width; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (l, u))| *v >= *l && *v <= *u)
    }

    pub fn project(&self, x: &mut [f64]) {
        for (v, (l, u)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*l, *u);
        }
    }

    pub fn widths(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(l, u)| u - l).collect()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| 0.5 * (l + u))
            .collect()
    }

    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&l, &u)| rng.random_range(l..u))
            .collect()
    }
}

/// Outcome of one optimizer run. `best_value` is the objective value as last
/// evaluated at `best_point`; it is never recomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub n_evals: usize,
    pub converged: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn bounds_projection_clamps() {
        let b = BoxBounds::new(vec![-1.0, 0.0], vec![1.0, 2.0]);
        let mut x = vec![-3.0, 5.0];
        b.project(&mut x);
        assert_eq!(x, vec![-1.0, 2.0]);
        assert!(b.contains(&x));
    }

    #[test]
    fn uniform_samples_respect_bounds() {
        let b = BoxBounds::new(vec![2.0, -4.0], vec![3.0, -1.0]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            assert!(b.contains(&b.sample_uniform(&mut rng)));
        }
    }
}

//! A Gaussian-process surrogate optimizer for expensive black-box functions.
//!
//! Instead of maximizing an acquisition criterion to pick one point per
//! iteration, this optimizer treats the *probability of improvement* of its
//! surrogate model as an unnormalized density and samples a whole population
//! from it. Exploration therefore never collapses onto a single basin: any
//! region where the model still admits improvement keeps a chance of being
//! visited, which is what lets the method walk out of local optima that
//! greedy acquisition maximizers get stuck in.
//!
//! The crate also ships the supporting cast: exact GP regression with
//! squared-exponential kernels (isotropic or per-axis), maximum-likelihood
//! hyper-parameter fitting, derivative-free optimizers (Nelder–Mead, a basic
//! CMA-ES, random search), shifted benchmark instances of sphere /
//! Rosenbrock / Rastrigin, and a benchmark harness that runs trial grids,
//! writes convergence CSVs, aggregates quartiles, and renders SVG plots and
//! improvement-probability maps.
//!
//! Start with the runnable examples (`cargo run --example <name>`); each one
//! demonstrates a single capability. The `mgso` binary wraps the harness
//! with `run`, `aggregate`, `plot`, and `poi-map` subcommands.
//!
//! ```
//! use mgso::optim::BoxBounds;
//! use mgso::solver::{run_mgso, MgsoConfig};
//!
//! let sphere = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
//! let mut cfg = MgsoConfig::new(60, 42);
//! cfg.fit.n_restarts = 2;
//! let run = run_mgso(sphere, BoxBounds::symmetric(2, 5.0), cfg).unwrap();
//! assert!(run.best_value < 1.0);
//! ```

pub mod bench;
pub mod fit;
pub mod gp;
pub mod harness;
pub mod optim;
pub mod poi;
pub mod solver;

mod linalg;
mod util;

pub use gp::{Dataset, GpHyperParams, GpPosterior, LengthScales, Prediction};
pub use optim::{BoxBounds, OptResult};
pub use solver::{run_mgso, Mgso, MgsoConfig, MgsoRun};

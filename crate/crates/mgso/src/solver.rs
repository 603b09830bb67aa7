//! The full optimization loop: draw an initial population, then repeat
//! fit → sample → evaluate, injecting the surrogate minimum into each
//! population and zooming the search box onto the incumbent when sampling
//! starts rejecting heavily or progress stalls.
//!
//! One iteration:
//! 1. fit kernel hyper-parameters on the archive points inside the current
//!    box, mapped to `[−1, 1]^D`;
//! 2. sample a population from the improvement probability (with the
//!    near-indefiniteness screen and threshold fallbacks);
//! 3. locate the surrogate-mean minimum by simplex search from the incumbent
//!    and swap it for the nearest sampled point (or append it when the batch
//!    came up short);
//! 4. map the population back to original coordinates, evaluate the
//!    objective, and grow the archive;
//! 5. if sampling was exhausted or the incumbent has stalled, shrink the box
//!    to the neighbourhood of the `r` nearest archive points and rescale.
//!
//! Runs are deterministic for a fixed seed. State lives in [`Mgso`], so a
//! caller can drive iterations one at a time and inspect everything between
//! steps; [`run_mgso`] is the plain run-to-completion entry point.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fit::{build_posterior_with_jitter, fit_hyperparams_warm, FitConfig};
use crate::gp::{Dataset, GpHyperParams, DEFAULT_PSD_TOLERANCE};
use crate::optim::{nelder_mead, BoxBounds, NelderMeadOptions};
use crate::poi::{choose_thresholds, sample_population, SelectionStrategy};

#[derive(Debug, Error, PartialEq)]
pub enum MgsoError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// Affine map between an original-coordinate box `[l, u]` and the internal
/// hypercube `[−1, 1]^D`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingTransform {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl ScalingTransform {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len());
        for (l, u) in lower.iter().zip(&upper) {
            assert!(l < u, "degenerate box side [{l}, {u}]");
        }
        ScalingTransform { lower, upper }
    }

    pub fn from_bounds(bounds: &BoxBounds) -> Self {
        ScalingTransform::new(bounds.lower().to_vec(), bounds.upper().to_vec())
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

    /// `[l, u] → [−1, 1]^D`.
    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.dim());
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(v, (l, u))| 2.0 * (v - l) / (u - l) - 1.0)
            .collect()
    }

    /// `[−1, 1]^D → [l, u]`.
    pub fn inverse(&self, z: &[f64]) -> Vec<f64> {
        debug_assert_eq!(z.len(), self.dim());
        z.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(v, (l, u))| l + 0.5 * (v + 1.0) * (u - l))
            .collect()
    }
}

/// How the per-iteration population is selected; `GreedyPoi` is the
/// exploitation-only ablation used for comparison studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PopulationStrategy {
    SamplePoi,
    GreedyPoi,
}

#[derive(Debug, Clone)]
pub struct MgsoConfig {
    /// Points per iteration; `None` means `max(10, 5·D)`.
    pub population_size: Option<usize>,
    /// Neighbourhood size for input-space restriction; `None` means `15·D`.
    pub restriction_r: Option<usize>,
    /// Total objective-evaluation budget (exact; the last population is
    /// truncated rather than overshooting).
    pub budget: usize,
    /// Optional early stop: finish once `f_best − known_optimum` is at or
    /// below this. Ignored unless `known_optimum` is set too.
    pub target_fdelta: Option<f64>,
    pub known_optimum: Option<f64>,
    pub seed: u64,
    pub fit: FitConfig,
    pub strategy: PopulationStrategy,
    /// Relative pivot tolerance of the candidate screen.
    pub psd_tolerance: f64,
    /// Cap on the number of archive points used to train the model (nearest
    /// to the incumbent first); `None` trains on every in-box point.
    pub max_training_points: Option<usize>,
    /// Simplex budget for the surrogate-minimum search, per dimension.
    pub model_min_evals_per_dim: usize,
    /// Consecutive non-improving iterations that trigger a restriction.
    pub stagnation_iterations: usize,
    /// Improvements at or below this do not reset the stagnation counter.
    pub stagnation_tolerance: f64,
}

impl MgsoConfig {
    pub fn new(budget: usize, seed: u64) -> Self {
        MgsoConfig {
            population_size: None,
            restriction_r: None,
            budget,
            target_fdelta: None,
            known_optimum: None,
            seed,
            fit: FitConfig::default(),
            strategy: PopulationStrategy::SamplePoi,
            psd_tolerance: DEFAULT_PSD_TOLERANCE,
            max_training_points: None,
            model_min_evals_per_dim: 200,
            stagnation_iterations: 5,
            stagnation_tolerance: 1e-10,
        }
    }
}

/// One row of the convergence trace; `f_best` is the running minimum after
/// this evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalRecord {
    pub eval_index: usize,
    pub value: f64,
    pub f_best: f64,
}

/// A restriction of the search box, kept for auditing.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictionEvent {
    pub iteration: usize,
    pub eval_count: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Incumbent at the time of the restriction (original coordinates).
    pub best_point: Vec<f64>,
}

/// Result of a completed run.
#[derive(Debug, Clone)]
pub struct MgsoRun {
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub records: Vec<EvalRecord>,
    /// Every evaluated point, in evaluation order (original coordinates).
    pub evaluated_points: Vec<Vec<f64>>,
    pub restrictions: Vec<RestrictionEvent>,
    pub iterations: usize,
}

/// `n` points uniform in `bounds`; deterministic for a given generator state.
pub fn initial_sample<R: Rng + ?Sized>(
    bounds: &BoxBounds,
    n: usize,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    assert!(n >= 1);
    (0..n).map(|_| bounds.sample_uniform(rng)).collect()
}

pub struct Mgso {
    bounds: BoxBounds,
    cfg: MgsoConfig,
    population_size: usize,
    restriction_r: usize,
    transform: ScalingTransform,
    archive_points: Vec<Vec<f64>>,
    archive_values: Vec<f64>,
    best_index: usize,
    records: Vec<EvalRecord>,
    restrictions: Vec<RestrictionEvent>,
    rng: ChaCha8Rng,
    previous_fit: Option<GpHyperParams>,
    stagnation: usize,
    iteration: usize,
    target_reached: bool,
}

impl Mgso {
    pub fn new(bounds: BoxBounds, cfg: MgsoConfig) -> Result<Self, MgsoError> {
        let dim = bounds.dim();
        let population_size = cfg.population_size.unwrap_or_else(|| 10.max(5 * dim));
        let restriction_r = cfg.restriction_r.unwrap_or(15 * dim);
        if population_size < 2 {
            return Err(MgsoError::InvalidConfig(format!(
                "population size must be at least 2, got {population_size}"
            )));
        }
        if restriction_r < dim + 1 {
            return Err(MgsoError::InvalidConfig(format!(
                "restriction neighbourhood must be at least D+1 = {}, got {restriction_r}",
                dim + 1
            )));
        }
        if cfg.budget < population_size {
            return Err(MgsoError::InvalidConfig(format!(
                "budget {} cannot hold one population of {population_size}",
                cfg.budget
            )));
        }
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let transform = ScalingTransform::from_bounds(&bounds);
        Ok(Mgso {
            bounds,
            cfg,
            population_size,
            restriction_r,
            transform,
            archive_points: Vec::new(),
            archive_values: Vec::new(),
            best_index: 0,
            records: Vec::new(),
            restrictions: Vec::new(),
            rng,
            previous_fit: None,
            stagnation: 0,
            iteration: 0,
            target_reached: false,
        })
    }

    pub fn eval_count(&self) -> usize {
        self.archive_values.len()
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn best(&self) -> Option<(&[f64], f64)> {
        if self.archive_values.is_empty() {
            None
        } else {
            Some((
                &self.archive_points[self.best_index],
                self.archive_values[self.best_index],
            ))
        }
    }

    pub fn records(&self) -> &[EvalRecord] {
        &self.records
    }

    pub fn restrictions(&self) -> &[RestrictionEvent] {
        &self.restrictions
    }

    pub fn transform(&self) -> &ScalingTransform {
        &self.transform
    }

    pub fn is_done(&self) -> bool {
        self.target_reached || self.eval_count() >= self.cfg.budget
    }

    fn check_target(&mut self) {
        if let (Some(opt), Some(delta)) = (self.cfg.known_optimum, self.cfg.target_fdelta) {
            if let Some((_, best)) = self.best() {
                if best - opt <= delta {
                    self.target_reached = true;
                }
            }
        }
    }

    fn evaluate_and_record<F>(&mut self, objective: &mut F, x: Vec<f64>)
    where
        F: FnMut(&[f64]) -> f64,
    {
        let value = objective(&x);
        self.archive_points.push(x);
        self.archive_values.push(value);
        let idx = self.archive_values.len() - 1;
        if value < self.archive_values[self.best_index] || idx == 0 {
            self.best_index = idx;
        }
        self.records.push(EvalRecord {
            eval_index: idx + 1,
            value,
            f_best: self.archive_values[self.best_index],
        });
        self.check_target();
    }

    /// Evaluates the initial uniform population (consumes `population_size`
    /// of the budget).
    pub fn initialize<F>(&mut self, objective: &mut F)
    where
        F: FnMut(&[f64]) -> f64,
    {
        assert!(self.archive_values.is_empty(), "already initialized");
        let n = self.population_size.min(self.cfg.budget);
        let points = initial_sample(&self.bounds, n, &mut self.rng);
        for x in points {
            if self.is_done() {
                break;
            }
            self.evaluate_and_record(objective, x);
        }
    }

    /// Archive points inside the current box, mapped to `[−1, 1]^D`. When a
    /// training cap is set, the points nearest the incumbent win.
    fn training_dataset(&self) -> Dataset {
        let dim = self.bounds.dim();
        let mut scaled: Vec<(Vec<f64>, f64)> = Vec::new();
        for (p, &y) in self.archive_points.iter().zip(&self.archive_values) {
            let z = self.transform.forward(p);
            if z.iter().all(|v| v.abs() <= 1.0 + 1e-9) {
                scaled.push((z, y));
            }
        }
        if let Some(cap) = self.cfg.max_training_points {
            if scaled.len() > cap {
                let best_scaled = self
                    .transform
                    .forward(&self.archive_points[self.best_index]);
                let mut order: Vec<usize> = (0..scaled.len()).collect();
                order.sort_by(|&a, &b| {
                    let da = crate::linalg::squared_distance(&scaled[a].0, &best_scaled);
                    let db = crate::linalg::squared_distance(&scaled[b].0, &best_scaled);
                    da.partial_cmp(&db)
                        .unwrap_or(std::cmp::Ordering::Equal)
                        .then(a.cmp(&b))
                });
                order.truncate(cap);
                order.sort_unstable();
                scaled = order.into_iter().map(|i| scaled[i].clone()).collect();
            }
        }
        let mut ds = Dataset::new(dim);
        for (z, y) in &scaled {
            ds.push(z, *y);
        }
        ds
    }

    /// One fit–sample–evaluate iteration.
    pub fn step<F>(&mut self, objective: &mut F)
    where
        F: FnMut(&[f64]) -> f64,
    {
        assert!(!self.archive_values.is_empty(), "call initialize first");
        if self.is_done() {
            return;
        }
        let dim = self.bounds.dim();
        let n_pop = self.population_size;
        let best_before = self.archive_values[self.best_index];

        let training = self.training_dataset();
        let hp = match fit_hyperparams_warm(
            &training,
            &self.cfg.fit,
            self.previous_fit.as_ref(),
            &mut self.rng,
        ) {
            Ok(hp) => {
                self.previous_fit = Some(hp.clone());
                Some(hp)
            }
            // Keep last iteration's parameters; with none available the
            // iteration degrades to uniform sampling below.
            Err(_) => self.previous_fit.clone(),
        };

        let posterior = hp.and_then(|hp| build_posterior_with_jitter(&training, &hp).ok());

        let mut exhausted = false;
        let mut population: Vec<Vec<f64>> = match &posterior {
            Some(post) => {
                let thresholds = choose_thresholds(post.dataset());
                let strategy = match self.cfg.strategy {
                    PopulationStrategy::SamplePoi => SelectionStrategy::Sample,
                    PopulationStrategy::GreedyPoi => SelectionStrategy::GreedyArgmax,
                };
                let batch = sample_population(
                    post,
                    &thresholds,
                    n_pop,
                    strategy,
                    self.cfg.psd_tolerance,
                    &mut self.rng,
                );
                exhausted = batch.exhausted;
                batch.points
            }
            None => (0..n_pop)
                .map(|_| (0..dim).map(|_| self.rng.random_range(-1.0..1.0)).collect())
                .collect(),
        };

        // Surrogate minimum from the incumbent; replaces the nearest sampled
        // point, or joins a short batch.
        if let Some(post) = &posterior {
            let mut start = self
                .transform
                .forward(&self.archive_points[self.best_index]);
            let unit_box = BoxBounds::symmetric(dim, 1.0);
            unit_box.project(&mut start);
            let opts = NelderMeadOptions {
                max_evals: self.cfg.model_min_evals_per_dim * dim,
                tol_x: 1e-6,
                tol_f: 1e-12,
                ..Default::default()
            };
            if let Ok(res) = nelder_mead(|z| post.predict_mean(z), &start, Some(&unit_box), &opts)
            {
                if population.len() == n_pop {
                    let nearest = population
                        .iter()
                        .enumerate()
                        .min_by(|(_, a), (_, b)| {
                            let da = crate::linalg::squared_distance(a, &res.best_point);
                            let db = crate::linalg::squared_distance(b, &res.best_point);
                            da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
                        })
                        .map(|(i, _)| i);
                    if let Some(i) = nearest {
                        population[i] = res.best_point;
                    }
                } else {
                    population.push(res.best_point);
                }
            }
        }

        // Evaluate in original coordinates, truncating to the remaining
        // budget so the total count is exact.
        let remaining = self.cfg.budget - self.eval_count();
        population.truncate(remaining);
        for z in population {
            if self.is_done() {
                break;
            }
            let mut x = self.transform.inverse(&z);
            self.bounds.project(&mut x);
            self.evaluate_and_record(objective, x);
        }

        let best_after = self.archive_values[self.best_index];
        if best_before - best_after > self.cfg.stagnation_tolerance {
            self.stagnation = 0;
        } else {
            self.stagnation += 1;
        }

        let triggered = exhausted || self.stagnation >= self.cfg.stagnation_iterations;
        if triggered && self.restrict_input_space() {
            self.stagnation = 0;
        }
        self.iteration += 1;
    }

    /// Shrinks the box to the 10%-enlarged bounding box of the `r` archive
    /// points nearest the incumbent (in current scaled coordinates), unless
    /// that box would still cover `[−0.8, 0.8]^D`. Returns whether the
    /// transform changed.
    pub fn restrict_input_space(&mut self) -> bool {
        let r = self.restriction_r;
        if self.archive_points.len() < r {
            return false;
        }
        let dim = self.bounds.dim();
        let scaled: Vec<Vec<f64>> = self
            .archive_points
            .iter()
            .map(|p| self.transform.forward(p))
            .collect();
        let best_scaled = &scaled[self.best_index];

        let mut order: Vec<usize> = (0..scaled.len()).collect();
        order.sort_by(|&a, &b| {
            let da = crate::linalg::squared_distance(&scaled[a], best_scaled);
            let db = crate::linalg::squared_distance(&scaled[b], best_scaled);
            da.partial_cmp(&db)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        order.truncate(r);

        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for &i in &order {
            for d in 0..dim {
                lo[d] = lo[d].min(scaled[i][d]);
                hi[d] = hi[d].max(scaled[i][d]);
            }
        }
        // Enlarge by 10% of each side (5% per end), clip to the current box,
        // and keep a minimal width so the new transform stays invertible.
        for d in 0..dim {
            let width = hi[d] - lo[d];
            lo[d] = (lo[d] - 0.05 * width).max(-1.0);
            hi[d] = (hi[d] + 0.05 * width).min(1.0);
            if hi[d] - lo[d] < 1e-6 {
                let c = 0.5 * (lo[d] + hi[d]);
                lo[d] = (c - 5e-7).max(-1.0);
                hi[d] = (c + 5e-7).min(1.0);
            }
        }

        let covers_core = (0..dim).all(|d| lo[d] <= -0.8 && hi[d] >= 0.8);
        if covers_core {
            return false;
        }

        let new_lower = self.transform.inverse(&lo);
        let new_upper = self.transform.inverse(&hi);
        // Once a side reaches floating-point resolution in original
        // coordinates there is nothing left to zoom into.
        for d in 0..dim {
            let scale = new_lower[d].abs().max(new_upper[d].abs()).max(1.0);
            if new_upper[d] - new_lower[d] < 1e-12 * scale {
                return false;
            }
        }
        self.transform = ScalingTransform::new(new_lower.clone(), new_upper.clone());
        self.restrictions.push(RestrictionEvent {
            iteration: self.iteration,
            eval_count: self.eval_count(),
            lower: new_lower,
            upper: new_upper,
            best_point: self.archive_points[self.best_index].clone(),
        });
        true
    }

    /// Runs to budget exhaustion (or the optional target) and returns the
    /// trace.
    pub fn run<F>(mut self, mut objective: F) -> MgsoRun
    where
        F: FnMut(&[f64]) -> f64,
    {
        if self.archive_values.is_empty() {
            self.initialize(&mut objective);
        }
        while !self.is_done() {
            self.step(&mut objective);
        }
        let best_point = self.archive_points[self.best_index].clone();
        let best_value = self.archive_values[self.best_index];
        MgsoRun {
            best_point,
            best_value,
            records: self.records,
            evaluated_points: self.archive_points,
            restrictions: self.restrictions,
            iterations: self.iteration,
        }
    }
}

/// Convenience wrapper: build, run, return the trace.
pub fn run_mgso<F>(objective: F, bounds: BoxBounds, cfg: MgsoConfig) -> Result<MgsoRun, MgsoError>
where
    F: FnMut(&[f64]) -> f64,
{
    Ok(Mgso::new(bounds, cfg)?.run(objective))
}

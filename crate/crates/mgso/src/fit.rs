//! Maximum-likelihood hyper-parameter fitting.
//!
//! The negative log marginal likelihood is minimized over log-parameters
//! (positivity by construction) with multi-start local search: the first
//! restart begins at a warm start or a data-driven heuristic, the remaining
//! ones at uniform random points inside the log bounds. For ARD kernels the
//! per-axis length-scales are projected after every step so that no
//! component drifts more than a fixed ratio away from the median — extreme
//! spread between components is the classic symptom of a restart stuck in a
//! bad local optimum.

use rand::Rng;
use thiserror::Error;

use crate::gp::{neg_log_likelihood, Dataset, GpError, GpHyperParams, GpPosterior, LengthScales};
use crate::optim::{basic_cma_es, nelder_mead, BoxBounds, CmaEsOptions, NelderMeadOptions};

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("no restart produced a finite likelihood")]
    FitFailed,
}

/// Which local optimizer drives each restart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitOptimizer {
    Simplex,
    BasicCmaEs,
}

/// Kernel family to fit: one shared length-scale or one per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Iso,
    Ard,
}

/// Search box in natural-log space, one `(low, high)` pair per group.
#[derive(Debug, Clone, PartialEq)]
pub struct LogBounds {
    pub theta: (f64, f64),
    pub ell: (f64, f64),
    pub noise: (f64, f64),
}

impl LogBounds {
    /// Data-driven defaults: length-scales span [0.01, 10] (the training
    /// inputs live in [−1, 1]^D), signal variance spans six decades below to
    /// one above the value variance, and noise runs from the 1e-8 floor up
    /// to the value variance.
    pub fn derived(values: &[f64]) -> LogBounds {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / n;
        let var = var.max(1e-12);
        LogBounds {
            theta: ((1e-6 * var).ln(), (10.0 * var).ln()),
            ell: (0.01f64.ln(), 10.0f64.ln()),
            noise: (1e-8f64.ln(), var.max(1e-7).ln()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitConfig {
    /// Independent local-search restarts per fit.
    pub n_restarts: usize,
    pub kernel: KernelKind,
    pub optimizer: FitOptimizer,
    /// Cap on max(ℓ)/median(ℓ) and median(ℓ)/min(ℓ) under ARD.
    pub ard_ratio_cap: f64,
    /// Explicit log-space bounds; `None` derives them from the data.
    pub log_bounds: Option<LogBounds>,
    /// Objective-evaluation budget per restart.
    pub max_evals_per_restart: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            n_restarts: 4,
            kernel: KernelKind::Iso,
            optimizer: FitOptimizer::Simplex,
            ard_ratio_cap: 2.5,
            log_bounds: None,
            max_evals_per_restart: 200,
        }
    }
}

/// Clamps every component into `[median/ρ, median·ρ]` in the length-scale
/// domain. The median is the lower-middle order statistic, so it is itself a
/// component and the projection is idempotent.
pub fn ard_project(lengths: &[f64], ratio_cap: f64) -> Vec<f64> {
    assert!(ratio_cap >= 1.0, "ratio cap must be at least 1");
    assert!(lengths.iter().all(|l| *l > 0.0), "length-scales must be positive");
    if lengths.len() <= 1 {
        return lengths.to_vec();
    }
    let mut sorted = lengths.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = sorted[(sorted.len() - 1) / 2];
    let lo = median / ratio_cap;
    let hi = median * ratio_cap;
    lengths.iter().map(|l| l.clamp(lo, hi)).collect()
}

/// Builds a posterior for `hp`, escalating an effective noise floor
/// `max(σ, 10⁻¹⁰·θ·2^a)` for `a = 0..6` if the factorization fails. Intended
/// for fitting-time model construction only; candidate screening must see
/// the un-jittered covariance.
pub fn build_posterior_with_jitter(
    dataset: &Dataset,
    hp: &GpHyperParams,
) -> Result<GpPosterior, GpError> {
    let mut last = match GpPosterior::new(dataset.clone(), hp.clone()) {
        Ok(p) => return Ok(p),
        Err(e) => e,
    };
    for a in 0..=6 {
        let jitter = 1e-10 * hp.signal_variance * f64::powi(2.0, a);
        let noise = hp.noise.max(jitter);
        if noise <= hp.noise {
            continue;
        }
        let jittered = GpHyperParams::new(hp.signal_variance, hp.length_scales.clone(), noise);
        match GpPosterior::new(dataset.clone(), jittered) {
            Ok(p) => return Ok(p),
            Err(e) => last = e,
        }
    }
    Err(last)
}

struct ParamSpace {
    dim: usize,
    kernel: KernelKind,
    ratio_cap: f64,
    bounds: LogBounds,
}

impl ParamSpace {
    fn n_params(&self) -> usize {
        2 + match self.kernel {
            KernelKind::Iso => 1,
            KernelKind::Ard => self.dim,
        }
    }

    fn n_ell(&self) -> usize {
        self.n_params() - 2
    }

    /// Log-parameter layout: [ln θ, ln ℓ₁.., ln σ].
    fn search_box(&self) -> BoxBounds {
        let mut lower = vec![self.bounds.theta.0];
        let mut upper = vec![self.bounds.theta.1];
        for _ in 0..self.n_ell() {
            lower.push(self.bounds.ell.0);
            upper.push(self.bounds.ell.1);
        }
        lower.push(self.bounds.noise.0);
        upper.push(self.bounds.noise.1);
        BoxBounds::new(lower, upper)
    }

    fn clip(&self, p: &mut [f64]) {
        self.search_box().project(p);
    }

    fn decode(&self, p: &[f64]) -> GpHyperParams {
        let mut q = p.to_vec();
        self.clip(&mut q);
        let theta = q[0].exp();
        let noise = q[self.n_params() - 1].exp();
        let scales = match self.kernel {
            KernelKind::Iso => LengthScales::iso(q[1].exp()),
            KernelKind::Ard => {
                let lengths: Vec<f64> = q[1..1 + self.dim].iter().map(|v| v.exp()).collect();
                LengthScales::ard_from_lengths(&ard_project(&lengths, self.ratio_cap))
            }
        };
        GpHyperParams::new(theta, scales, noise)
    }

    fn encode(&self, hp: &GpHyperParams) -> Vec<f64> {
        let mut p = vec![hp.signal_variance.ln()];
        let lengths = hp.length_scales.lengths(self.dim);
        match self.kernel {
            KernelKind::Iso => {
                // Collapse an ARD warm start to its geometric-mean scale.
                let mean_log = lengths.iter().map(|l| l.ln()).sum::<f64>() / lengths.len() as f64;
                p.push(mean_log);
            }
            KernelKind::Ard => p.extend(lengths.iter().map(|l| l.ln())),
        }
        p.push(hp.noise.max(1e-300).ln());
        self.clip(&mut p);
        p
    }
}

/// Fits hyper-parameters by multi-start likelihood minimization. The result
/// is the best restart by (likelihood, restart index), so identical data and
/// seed give bit-identical parameters.
pub fn fit_hyperparams<R: Rng + ?Sized>(
    dataset: &Dataset,
    cfg: &FitConfig,
    rng: &mut R,
) -> Result<GpHyperParams, FitError> {
    fit_hyperparams_warm(dataset, cfg, None, rng)
}

/// Like [`fit_hyperparams`], with the first restart started from a previous
/// fit instead of the heuristic initializer.
pub fn fit_hyperparams_warm<R: Rng + ?Sized>(
    dataset: &Dataset,
    cfg: &FitConfig,
    warm_start: Option<&GpHyperParams>,
    rng: &mut R,
) -> Result<GpHyperParams, FitError> {
    assert!(!dataset.is_empty(), "cannot fit on an empty dataset");
    assert!(cfg.n_restarts >= 1);

    let n = dataset.len() as f64;
    let y_mean = dataset.values().iter().sum::<f64>() / n;
    let centered: Vec<f64> = dataset.values().iter().map(|y| y - y_mean).collect();
    let var_y = centered.iter().map(|y| y * y).sum::<f64>() / n;
    let work = dataset.with_values(centered);

    let space = ParamSpace {
        dim: dataset.dim(),
        kernel: cfg.kernel,
        ratio_cap: cfg.ard_ratio_cap,
        bounds: cfg
            .log_bounds
            .clone()
            .unwrap_or_else(|| LogBounds::derived(dataset.values())),
    };
    let search_box = space.search_box();

    let nll_of = |p: &[f64]| -> f64 {
        let hp = space.decode(p);
        match neg_log_likelihood(&work, &hp) {
            Ok(v) if v.is_finite() => v,
            _ => f64::INFINITY,
        }
    };

    // Heuristic start: ℓ = 0.5 (half the scaled-space radius), θ = var y,
    // σ = 1e-4·θ.
    let heuristic = {
        let theta = var_y.max(1e-12);
        let mut p = vec![theta.ln()];
        for _ in 0..space.n_ell() {
            p.push(0.5f64.ln());
        }
        p.push((1e-4 * theta).ln());
        space.clip(&mut p);
        p
    };

    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(cfg.n_restarts);
    starts.push(match warm_start {
        Some(hp) => space.encode(hp),
        None => heuristic,
    });
    for _ in 1..cfg.n_restarts {
        starts.push(search_box.sample_uniform(rng));
    }

    let mut best: Option<(f64, Vec<f64>)> = None;
    for start in &starts {
        let f_start = nll_of(start);
        let mut candidate = (f_start, start.clone());

        let opts = NelderMeadOptions {
            max_evals: cfg.max_evals_per_restart,
            tol_x: 1e-6,
            tol_f: 1e-9,
            ..Default::default()
        };
        let run = match cfg.optimizer {
            FitOptimizer::Simplex => nelder_mead(&nll_of, start, Some(&search_box), &opts),
            FitOptimizer::BasicCmaEs => {
                let cma_opts = CmaEsOptions {
                    max_evals: cfg.max_evals_per_restart,
                    tol_fun: 1e-9,
                    tol_x: 1e-6,
                    ..Default::default()
                };
                basic_cma_es(&nll_of, start, 0.5, Some(&search_box), &cma_opts, rng)
            }
        };
        if let Ok(res) = run {
            if res.best_value < candidate.0 {
                candidate = (res.best_value, res.best_point);
            }
        }
        if candidate.0.is_finite() {
            let better = match &best {
                None => true,
                Some((b, _)) => candidate.0 < *b,
            };
            if better {
                best = Some(candidate);
            }
        }
    }

    match best {
        Some((_, p)) => Ok(space.decode(&p)),
        None => Err(FitError::FitFailed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn project_keeps_uniform_vector() {
        assert_eq!(ard_project(&[1.0, 1.0, 1.0], 2.5), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn project_clamps_around_median() {
        let out = ard_project(&[0.1, 1.0, 100.0], 2.5);
        assert!((out[0] - 0.4).abs() < 1e-12);
        assert!((out[1] - 1.0).abs() < 1e-12);
        assert!((out[2] - 2.5).abs() < 1e-12);
    }

    #[test]
    fn project_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        use rand::Rng;
        for _ in 0..1000 {
            let n = rng.random_range(1..8);
            let v: Vec<f64> = (0..n).map(|_| (rng.random_range(-4.0..4.0f64)).exp()).collect();
            let once = ard_project(&v, 2.5);
            let twice = ard_project(&once, 2.5);
            assert_eq!(once, twice, "not idempotent for {v:?}");
        }
    }

    fn toy_dataset(seed: u64, n: usize) -> Dataset {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
            .collect();
        let values: Vec<f64> = rows
            .iter()
            .map(|r| (3.0 * r[0]).sin() + 0.5 * r[1] + rng.random_range(-0.05..0.05))
            .collect();
        Dataset::from_rows(&rows, &values)
    }

    #[test]
    fn two_point_dataset_fits_without_error() {
        let ds = Dataset::from_rows(&[vec![-0.5], vec![0.5]], &[1.0, 2.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let hp = fit_hyperparams(&ds, &FitConfig::default(), &mut rng).unwrap();
        assert!(hp.signal_variance.is_finite() && hp.signal_variance > 0.0);
        assert!(hp.noise.is_finite() && hp.noise >= 0.0);
    }

    #[test]
    fn fit_never_beats_heuristic_start_backwards() {
        for seed in 0..6 {
            let ds = toy_dataset(seed, 15);
            let cfg = FitConfig::default();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let hp = fit_hyperparams(&ds, &cfg, &mut rng).unwrap();

            // Recompute the heuristic-init likelihood on centered values.
            let n = ds.len() as f64;
            let mean = ds.values().iter().sum::<f64>() / n;
            let centered: Vec<f64> = ds.values().iter().map(|y| y - mean).collect();
            let var_y = centered.iter().map(|y| y * y).sum::<f64>() / n;
            let work = ds.with_values(centered);
            let init = GpHyperParams::new(var_y, LengthScales::iso(0.5), 1e-4 * var_y);
            let nll_init = neg_log_likelihood(&work, &init).unwrap();
            let nll_fit = neg_log_likelihood(&work, &hp).unwrap();
            assert!(
                nll_fit <= nll_init + 1e-9,
                "seed {seed}: fit {nll_fit} worse than init {nll_init}"
            );
        }
    }

    #[test]
    fn identical_seed_gives_bit_identical_parameters() {
        let ds = toy_dataset(3, 20);
        let cfg = FitConfig { kernel: KernelKind::Ard, ..Default::default() };
        let mut rng_a = ChaCha8Rng::seed_from_u64(42);
        let mut rng_b = ChaCha8Rng::seed_from_u64(42);
        let a = fit_hyperparams(&ds, &cfg, &mut rng_a).unwrap();
        let b = fit_hyperparams(&ds, &cfg, &mut rng_b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn ard_ratio_cap_holds_after_fitting() {
        for seed in 0..4 {
            let ds = toy_dataset(seed + 10, 18);
            let cfg = FitConfig { kernel: KernelKind::Ard, ..Default::default() };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let hp = fit_hyperparams(&ds, &cfg, &mut rng).unwrap();
            let lengths = hp.length_scales.lengths(ds.dim());
            let mut sorted = lengths.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let median = sorted[(sorted.len() - 1) / 2];
            let max = sorted.last().unwrap();
            let min = sorted[0];
            assert!(max / median <= 2.5 + 1e-12);
            assert!(median / min <= 2.5 + 1e-12);
        }
    }

    #[test]
    fn jitter_recovers_near_singular_fit() {
        // Two nearly identical rows with zero noise: the plain build fails,
        // the jittered build succeeds.
        let ds = Dataset::from_rows(
            &[vec![0.0], vec![1e-13], vec![0.8]],
            &[1.0, 1.0, 2.0],
        );
        let hp = GpHyperParams::new(1.0, LengthScales::iso(1.0), 0.0);
        assert!(GpPosterior::new(ds.clone(), hp.clone()).is_err());
        let post = build_posterior_with_jitter(&ds, &hp).unwrap();
        assert!(post.hyper_params().noise > 0.0);
    }

    #[test]
    fn cma_es_fitter_also_works() {
        let ds = toy_dataset(5, 16);
        let cfg = FitConfig {
            optimizer: FitOptimizer::BasicCmaEs,
            max_evals_per_restart: 300,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let hp = fit_hyperparams(&ds, &cfg, &mut rng).unwrap();
        assert!(hp.signal_variance > 0.0);
    }
}

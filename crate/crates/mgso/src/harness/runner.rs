//! Executes experiment grids: every algorithm × function × dimension ×
//! instance cell, each reproducible in isolation from its own derived seed.

use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bench::{BenchmarkFunction, BenchmarkInstance};
use crate::fit::KernelKind;
use crate::optim::{basic_cma_es, random_search, CmaEsOptions};
use crate::solver::{Mgso, MgsoConfig, PopulationStrategy};
use crate::util::mix_seed;

use super::config::{AlgorithmId, ExperimentConfig};
use super::records::{records_to_csv, ConvergenceRecord, RECORDS_CSV_HEADER};
use super::HarnessError;

/// One experiment cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSpec {
    pub algorithm: AlgorithmId,
    pub function: BenchmarkFunction,
    pub dim: usize,
    pub instance: u64,
}

/// Instance ids for `trials` trials: 1–5 then 31–40, continuing upward past
/// 15 trials.
pub fn instance_ids(trials: usize) -> Vec<u64> {
    let mut ids: Vec<u64> = (1..=5).chain(31..=40).collect();
    let mut next = 41;
    while ids.len() < trials {
        ids.push(next);
        next += 1;
    }
    ids.truncate(trials);
    ids
}

/// Trial seed derived from the master seed and the cell coordinates (not the
/// algorithm, so algorithms face identical instances and starting draws).
pub fn trial_seed(master_seed: u64, function: BenchmarkFunction, dim: usize, instance: u64) -> u64 {
    let function_tag = match function {
        BenchmarkFunction::Sphere => 1,
        BenchmarkFunction::Rosenbrock => 2,
        BenchmarkFunction::Rastrigin => 3,
    };
    mix_seed(master_seed, &[function_tag, dim as u64, instance])
}

fn cells(cfg: &ExperimentConfig) -> Vec<CellSpec> {
    let mut out = Vec::new();
    for &algorithm in &cfg.algorithms {
        for &function in &cfg.functions {
            for &dim in &cfg.dims {
                for &instance in &instance_ids(cfg.trials) {
                    out.push(CellSpec { algorithm, function, dim, instance });
                }
            }
        }
    }
    out
}

fn mgso_config(cfg: &ExperimentConfig, budget: usize, seed: u64, kind: KernelKind, strategy: PopulationStrategy) -> MgsoConfig {
    let mut mc = MgsoConfig::new(budget, seed);
    mc.population_size = cfg.population_size;
    mc.restriction_r = cfg.restriction_r;
    mc.fit.kernel = kind;
    mc.strategy = strategy;
    if let Some(n) = cfg.fit_restarts {
        mc.fit.n_restarts = n;
    }
    if let Some(n) = cfg.fit_max_evals {
        mc.fit.max_evals_per_restart = n;
    }
    if let Some(n) = cfg.max_training_points {
        mc.max_training_points = Some(n);
    }
    if let Some(t) = cfg.psd_tolerance {
        mc.psd_tolerance = t;
    }
    if let Some(n) = cfg.stagnation_iterations {
        mc.stagnation_iterations = n;
    }
    if let Some(n) = cfg.model_min_evals_per_dim {
        mc.model_min_evals_per_dim = n;
    }
    mc
}

/// Runs one cell and returns its convergence rows.
pub fn run_cell(cfg: &ExperimentConfig, cell: &CellSpec) -> Result<Vec<ConvergenceRecord>, HarnessError> {
    run_cell_audited(cfg, cell).map(|(records, _)| records)
}

/// Like [`run_cell`], additionally returning the full solver run (with its
/// evaluated points and restriction events) for the surrogate-based
/// algorithms, so callers can audit loop invariants.
pub fn run_cell_audited(
    cfg: &ExperimentConfig,
    cell: &CellSpec,
) -> Result<(Vec<ConvergenceRecord>, Option<crate::solver::MgsoRun>), HarnessError> {
    let instance = BenchmarkInstance::new(cell.function, cell.dim, cell.instance);
    let bounds = instance.bounds();
    let seed = trial_seed(cfg.master_seed, cell.function, cell.dim, cell.instance);
    let budget = cfg.budget_per_dim * cell.dim;
    let run_id = format!(
        "{}-{}-{}d-i{:02}",
        cell.algorithm.name(),
        cell.function.name(),
        cell.dim,
        cell.instance
    );

    let make_record = |eval_index: usize, f_best: f64| ConvergenceRecord {
        run_id: run_id.clone(),
        algorithm: cell.algorithm,
        function: cell.function,
        dim: cell.dim,
        instance: cell.instance,
        seed,
        eval_index,
        f_best,
        f_delta: instance.f_delta(f_best),
    };

    let mut audited_run = None;
    let records: Vec<ConvergenceRecord> = match cell.algorithm {
        AlgorithmId::Mgso | AlgorithmId::MgsoArd | AlgorithmId::MgsoGreedy => {
            let (kind, strategy) = match cell.algorithm {
                AlgorithmId::MgsoArd => (KernelKind::Ard, PopulationStrategy::SamplePoi),
                AlgorithmId::MgsoGreedy => (KernelKind::Iso, PopulationStrategy::GreedyPoi),
                _ => (KernelKind::Iso, PopulationStrategy::SamplePoi),
            };
            let mc = mgso_config(cfg, budget, seed, kind, strategy);
            let solver = Mgso::new(bounds, mc)
                .map_err(|e| HarnessError::Runtime(format!("{run_id}: {e}")))?;
            let run = solver.run(|x| instance.evaluate(x));
            let records = run
                .records
                .iter()
                .map(|r| make_record(r.eval_index, r.f_best))
                .collect();
            audited_run = Some(run);
            records
        }
        AlgorithmId::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut trace: Vec<f64> = Vec::with_capacity(budget);
            let mut best = f64::INFINITY;
            random_search(
                |x| {
                    let v = instance.evaluate(x);
                    best = best.min(v);
                    trace.push(best);
                    v
                },
                &bounds,
                budget,
                &mut rng,
            );
            trace
                .iter()
                .enumerate()
                .map(|(i, &f_best)| make_record(i + 1, f_best))
                .collect()
        }
        AlgorithmId::Cmaes => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x0 = bounds.sample_uniform(&mut rng);
            let sigma0 = 0.3 * (bounds.upper()[0] - bounds.lower()[0]);
            let mut trace: Vec<f64> = Vec::with_capacity(budget);
            let mut best = f64::INFINITY;
            let opts = CmaEsOptions { max_evals: budget, ..Default::default() };
            basic_cma_es(
                |x| {
                    let v = instance.evaluate(x);
                    best = best.min(v);
                    trace.push(best);
                    v
                },
                &x0,
                sigma0,
                Some(&bounds),
                &opts,
                &mut rng,
            )
            .map_err(|e| HarnessError::Runtime(format!("{run_id}: {e}")))?;
            trace
                .iter()
                .enumerate()
                .map(|(i, &f_best)| make_record(i + 1, f_best))
                .collect()
        }
    };
    Ok((records, audited_run))
}

/// Runs every cell of the grid. Cells execute in a work pool (size from the
/// config, defaulting to the available cores) and the output order is the
/// deterministic grid order regardless of scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ConvergenceRecord>, HarnessError> {
    let grid = cells(cfg);
    let results: Vec<Result<Vec<ConvergenceRecord>, HarnessError>> = match cfg.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| HarnessError::Runtime(e.to_string()))?;
            pool.install(|| grid.par_iter().map(|c| run_cell(cfg, c)).collect())
        }
        None => grid.par_iter().map(|c| run_cell(cfg, c)).collect(),
    };
    let mut records = Vec::new();
    for res in results {
        records.extend(res?);
    }
    Ok(records)
}

/// Like [`run_experiment`], but streams finished cells to `path` so that a
/// mid-run failure still leaves the completed prefix on disk.
pub fn run_experiment_to_csv(cfg: &ExperimentConfig, path: &Path) -> Result<usize, HarnessError> {
    let grid = cells(cfg);
    let results: Vec<Result<Vec<ConvergenceRecord>, HarnessError>> = match cfg.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| HarnessError::Runtime(e.to_string()))?;
            pool.install(|| grid.par_iter().map(|c| run_cell(cfg, c)).collect())
        }
        None => grid.par_iter().map(|c| run_cell(cfg, c)).collect(),
    };

    let mut file = std::fs::File::create(path)?;
    file.write_all(RECORDS_CSV_HEADER.as_bytes())?;
    file.write_all(b"\n")?;
    let mut written = 0usize;
    for res in results {
        match res {
            Ok(records) => {
                let body = records_to_csv(&records);
                let body = body.split_once('\n').map(|(_, b)| b).unwrap_or("");
                file.write_all(body.as_bytes())?;
                written += records.len();
            }
            Err(e) => {
                file.flush()?;
                return Err(e);
            }
        }
    }
    file.flush()?;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::parse_config;

    #[test]
    fn instance_ids_follow_the_trial_convention() {
        assert_eq!(instance_ids(3), vec![1, 2, 3]);
        assert_eq!(
            instance_ids(15),
            vec![1, 2, 3, 4, 5, 31, 32, 33, 34, 35, 36, 37, 38, 39, 40]
        );
        assert_eq!(instance_ids(17).last(), Some(&42));
    }

    #[test]
    fn trial_seeds_separate_cells() {
        let a = trial_seed(1, BenchmarkFunction::Sphere, 2, 1);
        let b = trial_seed(1, BenchmarkFunction::Sphere, 2, 2);
        let c = trial_seed(1, BenchmarkFunction::Rastrigin, 2, 1);
        let d = trial_seed(2, BenchmarkFunction::Sphere, 2, 1);
        assert!(a != b && a != c && a != d);
        assert_eq!(a, trial_seed(1, BenchmarkFunction::Sphere, 2, 1));
    }

    fn tiny_config(algorithms: &str) -> ExperimentConfig {
        parse_config(&format!(
            r#"
functions = ["sphere"]
dims = [2]
budget_per_dim = 25
trials = 2
algorithms = [{algorithms}]
master_seed = 9
fit_restarts = 2
fit_max_evals = 40
threads = 1
"#
        ))
        .unwrap()
    }

    #[test]
    fn row_accounting_is_exact() {
        let cfg = tiny_config("\"random\"");
        let records = run_experiment(&cfg).unwrap();
        // 1 algorithm × 1 function × 1 dim × 2 trials × 50 evals.
        assert_eq!(records.len(), 100);
        assert!(records.iter().all(|r| r.eval_index >= 1 && r.eval_index <= 50));
    }

    #[test]
    fn rerun_is_byte_identical() {
        let cfg = tiny_config("\"mgso\", \"random\"");
        let a = records_to_csv(&run_experiment(&cfg).unwrap());
        let b = records_to_csv(&run_experiment(&cfg).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn every_algorithm_produces_consistent_f_delta() {
        let cfg = tiny_config("\"mgso\", \"mgso_ard\", \"mgso_greedy\", \"random\", \"cmaes\"");
        let records = run_experiment(&cfg).unwrap();
        for r in &records {
            let inst = BenchmarkInstance::new(r.function, r.dim, r.instance);
            assert!((r.f_delta - inst.f_delta(r.f_best)).abs() < 1e-12);
            assert!(r.f_delta >= -1e-9, "f_delta negative: {r:?}");
        }
        crate::harness::audit_runs(&records).unwrap();
    }
}

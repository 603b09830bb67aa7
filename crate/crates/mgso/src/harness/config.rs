//! Experiment configuration: a flat TOML file with explicit keys.
//!
//! ```toml
//! functions = ["sphere", "rosenbrock"]
//! dims = [2]
//! budget_per_dim = 250
//! trials = 15
//! algorithms = ["mgso", "random"]
//! master_seed = 42
//! # optional overrides
//! population_size = 10
//! restriction_r = 30
//! fit_restarts = 2
//! max_training_points = 120
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::bench::BenchmarkFunction;

use super::HarnessError;

/// Algorithms the runner can execute. `MgsoGreedy` is the argmax-selection
/// ablation of the sampling optimizer, kept runnable for comparison studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmId {
    Mgso,
    MgsoArd,
    MgsoGreedy,
    Random,
    Cmaes,
}

impl AlgorithmId {
    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmId::Mgso => "mgso",
            AlgorithmId::MgsoArd => "mgso_ard",
            AlgorithmId::MgsoGreedy => "mgso_greedy",
            AlgorithmId::Random => "random",
            AlgorithmId::Cmaes => "cmaes",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mgso" => Some(AlgorithmId::Mgso),
            "mgso_ard" => Some(AlgorithmId::MgsoArd),
            "mgso_greedy" => Some(AlgorithmId::MgsoGreedy),
            "random" => Some(AlgorithmId::Random),
            "cmaes" => Some(AlgorithmId::Cmaes),
            _ => None,
        }
    }
}

impl std::fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    functions: Vec<String>,
    dims: Vec<usize>,
    budget_per_dim: usize,
    trials: usize,
    algorithms: Vec<String>,
    master_seed: u64,
    #[serde(default)]
    population_size: Option<usize>,
    #[serde(default)]
    restriction_r: Option<usize>,
    #[serde(default)]
    fit_restarts: Option<usize>,
    #[serde(default)]
    fit_max_evals: Option<usize>,
    #[serde(default)]
    max_training_points: Option<usize>,
    #[serde(default)]
    psd_tolerance: Option<f64>,
    #[serde(default)]
    stagnation_iterations: Option<usize>,
    #[serde(default)]
    model_min_evals_per_dim: Option<usize>,
    #[serde(default)]
    threads: Option<usize>,
}

/// A validated experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub functions: Vec<BenchmarkFunction>,
    pub dims: Vec<usize>,
    pub budget_per_dim: usize,
    pub trials: usize,
    pub algorithms: Vec<AlgorithmId>,
    pub master_seed: u64,
    pub population_size: Option<usize>,
    pub restriction_r: Option<usize>,
    pub fit_restarts: Option<usize>,
    pub fit_max_evals: Option<usize>,
    pub max_training_points: Option<usize>,
    pub psd_tolerance: Option<f64>,
    pub stagnation_iterations: Option<usize>,
    pub model_min_evals_per_dim: Option<usize>,
    pub threads: Option<usize>,
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, HarnessError> {
    let raw: RawConfig = toml::from_str(text)
        .map_err(|e| HarnessError::Config(format!("cannot parse config: {e}")))?;

    let mut functions = Vec::new();
    for name in &raw.functions {
        match BenchmarkFunction::parse(name) {
            Some(f) => functions.push(f),
            None => {
                return Err(HarnessError::Config(format!(
                    "functions: unknown function {name:?} (expected sphere, rosenbrock or rastrigin)"
                )))
            }
        }
    }
    if functions.is_empty() {
        return Err(HarnessError::Config("functions: list is empty".into()));
    }

    let mut algorithms = Vec::new();
    for name in &raw.algorithms {
        match AlgorithmId::parse(name) {
            Some(a) => algorithms.push(a),
            None => {
                return Err(HarnessError::Config(format!(
                    "algorithms: unknown algorithm {name:?} (expected mgso, mgso_ard, mgso_greedy, random or cmaes)"
                )))
            }
        }
    }
    if algorithms.is_empty() {
        return Err(HarnessError::Config("algorithms: list is empty".into()));
    }

    if raw.dims.is_empty() {
        return Err(HarnessError::Config("dims: list is empty".into()));
    }
    if raw.dims.contains(&0) {
        return Err(HarnessError::Config("dims: dimensions must be positive".into()));
    }
    if raw.budget_per_dim == 0 {
        return Err(HarnessError::Config("budget_per_dim: must be positive".into()));
    }
    if raw.trials == 0 {
        return Err(HarnessError::Config("trials: must be positive".into()));
    }
    if let Some(n) = raw.population_size {
        if n < 2 {
            return Err(HarnessError::Config(
                "population_size: must be at least 2".into(),
            ));
        }
    }
    if let Some(t) = raw.psd_tolerance {
        if t <= 0.0 || t.is_nan() {
            return Err(HarnessError::Config("psd_tolerance: must be positive".into()));
        }
    }

    Ok(ExperimentConfig {
        functions,
        dims: raw.dims,
        budget_per_dim: raw.budget_per_dim,
        trials: raw.trials,
        algorithms,
        master_seed: raw.master_seed,
        population_size: raw.population_size,
        restriction_r: raw.restriction_r,
        fit_restarts: raw.fit_restarts,
        fit_max_evals: raw.fit_max_evals,
        max_training_points: raw.max_training_points,
        psd_tolerance: raw.psd_tolerance,
        stagnation_iterations: raw.stagnation_iterations,
        model_min_evals_per_dim: raw.model_min_evals_per_dim,
        threads: raw.threads,
    })
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        HarnessError::Config(format!("cannot read config {}: {e}", path.display()))
    })?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"
functions = ["sphere", "rastrigin"]
dims = [2, 5]
budget_per_dim = 100
trials = 3
algorithms = ["mgso", "random"]
master_seed = 7
fit_restarts = 2
"#;

    #[test]
    fn good_config_parses() {
        let cfg = parse_config(GOOD).unwrap();
        assert_eq!(cfg.functions.len(), 2);
        assert_eq!(cfg.dims, vec![2, 5]);
        assert_eq!(cfg.algorithms, vec![AlgorithmId::Mgso, AlgorithmId::Random]);
        assert_eq!(cfg.fit_restarts, Some(2));
        assert_eq!(cfg.population_size, None);
    }

    #[test]
    fn unknown_function_is_rejected_with_field_name() {
        let bad = GOOD.replace("rastrigin", "ackley");
        let err = parse_config(&bad).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("functions"), "{msg}");
        assert!(msg.contains("ackley"), "{msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_key_is_rejected_with_location() {
        let bad = format!("{GOOD}\nbanana = 1\n");
        let err = parse_config(&bad).unwrap_err();
        assert!(err.to_string().contains("banana"), "{err}");
    }

    #[test]
    fn syntax_error_reports_line() {
        let err = parse_config("functions = [\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "diagnostic lacks a line: {msg}");
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in [
            AlgorithmId::Mgso,
            AlgorithmId::MgsoArd,
            AlgorithmId::MgsoGreedy,
            AlgorithmId::Random,
            AlgorithmId::Cmaes,
        ] {
            assert_eq!(AlgorithmId::parse(a.name()), Some(a));
        }
    }
}

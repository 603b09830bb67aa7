//! Benchmark objectives (sphere, Rosenbrock, Rastrigin) with randomized
//! instances: each instance shifts the optimum uniformly inside `[−4, 4]^D`
//! and offsets the optimal value uniformly in `[−100, 100]`, both derived
//! deterministically from the instance id. Bounds are fixed to `[−5, 5]^D`
//! so the optimum always lies strictly inside.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::optim::BoxBounds;
use crate::util::mix_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BenchmarkFunction {
    Sphere,
    Rosenbrock,
    Rastrigin,
}

impl BenchmarkFunction {
    pub const ALL: [BenchmarkFunction; 3] = [
        BenchmarkFunction::Sphere,
        BenchmarkFunction::Rosenbrock,
        BenchmarkFunction::Rastrigin,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BenchmarkFunction::Sphere => "sphere",
            BenchmarkFunction::Rosenbrock => "rosenbrock",
            BenchmarkFunction::Rastrigin => "rastrigin",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sphere" => Some(BenchmarkFunction::Sphere),
            "rosenbrock" => Some(BenchmarkFunction::Rosenbrock),
            "rastrigin" => Some(BenchmarkFunction::Rastrigin),
            _ => None,
        }
    }

    fn id(&self) -> u64 {
        match self {
            BenchmarkFunction::Sphere => 1,
            BenchmarkFunction::Rosenbrock => 2,
            BenchmarkFunction::Rastrigin => 3,
        }
    }

    /// Base landscape before shift and offset. Sphere and Rastrigin have
    /// their minimum 0 at the origin; Rosenbrock has its minimum 0 at the
    /// all-ones point.
    pub fn base(&self, z: &[f64]) -> f64 {
        match self {
            BenchmarkFunction::Sphere => z.iter().map(|v| v * v).sum(),
            BenchmarkFunction::Rosenbrock => z
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                .sum(),
            BenchmarkFunction::Rastrigin => {
                10.0 * z.len() as f64
                    + z.iter()
                        .map(|v| v * v - 10.0 * (2.0 * std::f64::consts::PI * v).cos())
                        .sum::<f64>()
            }
        }
    }
}

impl std::fmt::Display for BenchmarkFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One randomized instance: `f(x) = f_opt + base(x − x_opt [+ 1])`, with the
/// Rosenbrock shift folded in so the optimum of every function sits at
/// `x_opt` with value exactly `f_opt`.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkInstance {
    function: BenchmarkFunction,
    dim: usize,
    instance_id: u64,
    x_opt: Vec<f64>,
    f_opt: f64,
}

impl BenchmarkInstance {
    pub fn new(function: BenchmarkFunction, dim: usize, instance_id: u64) -> Self {
        assert!(dim >= 1);
        let seed = mix_seed(0x42b0_b001, &[function.id(), dim as u64, instance_id]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x_opt: Vec<f64> = (0..dim).map(|_| rng.random_range(-4.0..4.0)).collect();
        let f_opt = rng.random_range(-100.0..100.0);
        BenchmarkInstance { function, dim, instance_id, x_opt, f_opt }
    }

    /// Explicit shift and offset; used by tests and unshifted baselines.
    pub fn with_parameters(
        function: BenchmarkFunction,
        dim: usize,
        x_opt: Vec<f64>,
        f_opt: f64,
    ) -> Self {
        assert_eq!(x_opt.len(), dim);
        BenchmarkInstance { function, dim, instance_id: 0, x_opt, f_opt }
    }

    pub fn function(&self) -> BenchmarkFunction {
        self.function
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn instance_id(&self) -> u64 {
        self.instance_id
    }

    pub fn f_opt(&self) -> f64 {
        self.f_opt
    }

    /// Location of the global optimum.
    pub fn optimum_point(&self) -> &[f64] {
        &self.x_opt
    }

    pub fn bounds(&self) -> BoxBounds {
        BoxBounds::symmetric(self.dim, 5.0)
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim, "point dimension mismatch");
        let z: Vec<f64> = match self.function {
            BenchmarkFunction::Rosenbrock => {
                x.iter().zip(&self.x_opt).map(|(v, o)| (v - o) + 1.0).collect()
            }
            _ => x.iter().zip(&self.x_opt).map(|(v, o)| v - o).collect(),
        };
        self.f_opt + self.function.base(&z)
    }

    /// Distance of a value from the instance optimum.
    pub fn f_delta(&self, y: f64) -> f64 {
        y - self.f_opt
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_matches_hand_arithmetic() {
        let inst = BenchmarkInstance::with_parameters(
            BenchmarkFunction::Sphere,
            2,
            vec![0.0, 0.0],
            0.0,
        );
        assert_eq!(inst.evaluate(&[3.0, 4.0]), 25.0);
    }

    #[test]
    fn rosenbrock_base_values() {
        let f = BenchmarkFunction::Rosenbrock;
        assert_eq!(f.base(&[1.0, 1.0]), 0.0);
        assert_eq!(f.base(&[0.0, 0.0]), 1.0);
    }

    #[test]
    fn rastrigin_base_collapses_at_integers() {
        // cos(2π) = 1 collapses each term to z².
        let f = BenchmarkFunction::Rastrigin;
        let v = f.base(&[1.0, 1.0]);
        assert!((v - 2.0).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn optimum_witness_for_random_instances() {
        // 3 functions x 17 ids x 2 dims: 102 instances.
        for function in BenchmarkFunction::ALL {
            for instance_id in 1..=17 {
                for dim in [2, 5] {
                    let inst = BenchmarkInstance::new(function, dim, instance_id);
                    let at_opt = inst.evaluate(inst.optimum_point().to_vec().as_slice());
                    assert!(
                        (at_opt - inst.f_opt()).abs() < 1e-12,
                        "{function} d{dim} i{instance_id}: {at_opt} vs {}",
                        inst.f_opt()
                    );
                    assert!(inst.f_delta(at_opt).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn shift_stays_inside_bounds() {
        for instance_id in 1..50 {
            let inst = BenchmarkInstance::new(BenchmarkFunction::Rastrigin, 3, instance_id);
            assert!(inst.optimum_point().iter().all(|v| v.abs() < 4.0));
        }
    }

    #[test]
    fn translation_consistency_is_exact() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for function in BenchmarkFunction::ALL {
            let shifted = BenchmarkInstance::new(function, 3, 12);
            let unshifted = BenchmarkInstance::with_parameters(
                function,
                3,
                vec![0.0; 3],
                0.0,
            );
            for _ in 0..50 {
                let x: Vec<f64> = (0..3).map(|_| rng.random_range(-5.0..5.0)).collect();
                let moved: Vec<f64> = x
                    .iter()
                    .zip(shifted.optimum_point())
                    .map(|(a, s)| a - s)
                    .collect();
                assert_eq!(
                    shifted.evaluate(&x),
                    unshifted.evaluate(&moved) + shifted.f_opt()
                );
            }
        }
    }

    #[test]
    fn instances_are_deterministic() {
        let a = BenchmarkInstance::new(BenchmarkFunction::Sphere, 4, 33);
        let b = BenchmarkInstance::new(BenchmarkFunction::Sphere, 4, 33);
        assert_eq!(a, b);
        let c = BenchmarkInstance::new(BenchmarkFunction::Sphere, 4, 34);
        assert_ne!(a.optimum_point(), c.optimum_point());
    }

    #[test]
    fn f_delta_is_a_plain_difference() {
        let inst = BenchmarkInstance::new(BenchmarkFunction::Sphere, 2, 1);
        assert_eq!(inst.f_delta(inst.f_opt()), 0.0);
        assert_eq!(inst.f_delta(inst.f_opt() + 5.0), 5.0);
    }

    #[test]
    fn dimension_mismatch_panics() {
        let inst = BenchmarkInstance::new(BenchmarkFunction::Sphere, 2, 1);
        let result = std::panic::catch_unwind(|| inst.evaluate(&[1.0, 2.0, 3.0]));
        assert!(result.is_err());
    }
}

//! A basic (μ/μ_w, λ) covariance-matrix-adaptation evolution strategy with
//! weighted recombination, cumulative step-size adaptation, and rank-one plus
//! rank-μ covariance updates. No restarts and no negative recombination
//! weights; it serves as a hyper-parameter fitter and a desk-scale baseline.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{BoxBounds, OptError, OptResult};
use crate::linalg;

#[derive(Debug, Clone)]
pub struct CmaEsOptions {
    /// Hard cap on objective evaluations; only whole generations run.
    pub max_evals: usize,
    /// Population size; defaults to `4 + ⌊3·ln D⌋`.
    pub lambda: Option<usize>,
    /// Stop once the best value drops to or below this.
    pub f_target: Option<f64>,
    /// Stop when the value spread within and across recent generations
    /// falls below this.
    pub tol_fun: f64,
    /// Stop when the overall step length falls below this.
    pub tol_x: f64,
}

impl Default for CmaEsOptions {
    fn default() -> Self {
        CmaEsOptions {
            max_evals: 10_000,
            lambda: None,
            f_target: None,
            tol_fun: 1e-12,
            tol_x: 1e-12,
        }
    }
}

pub fn basic_cma_es<F, R>(
    mut objective: F,
    x0: &[f64],
    sigma0: f64,
    bounds: Option<&BoxBounds>,
    opts: &CmaEsOptions,
    rng: &mut R,
) -> Result<OptResult, OptError>
where
    F: FnMut(&[f64]) -> f64,
    R: Rng + ?Sized,
{
    if sigma0 <= 0.0 || !sigma0.is_finite() {
        return Err(OptError::InvalidSigma(sigma0));
    }
    let dim = x0.len();
    assert!(dim >= 1);
    let d = dim as f64;

    let lambda = opts.lambda.unwrap_or(4 + (3.0 * d.ln()).floor() as usize).max(2);
    let mu = lambda / 2;
    let mut weights: Vec<f64> = (0..mu)
        .map(|i| ((lambda as f64 + 1.0) / 2.0).ln() - ((i + 1) as f64).ln())
        .collect();
    let w_sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= w_sum;
    }
    let mu_eff = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();

    let c_sigma = (mu_eff + 2.0) / (d + mu_eff + 5.0);
    let d_sigma = 1.0 + 2.0 * (((mu_eff - 1.0) / (d + 1.0)).sqrt() - 1.0).max(0.0) + c_sigma;
    let c_c = (4.0 + mu_eff / d) / (d + 4.0 + 2.0 * mu_eff / d);
    let c_1 = 2.0 / ((d + 1.3) * (d + 1.3) + mu_eff);
    let c_mu = (1.0 - c_1)
        .min(2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((d + 2.0) * (d + 2.0) + mu_eff));
    let chi_n = d.sqrt() * (1.0 - 1.0 / (4.0 * d) + 1.0 / (21.0 * d * d));

    let mut mean = x0.to_vec();
    if let Some(b) = bounds {
        b.project(&mut mean);
    }
    let mut sigma = sigma0;
    let mut cov = vec![0.0; dim * dim];
    for i in 0..dim {
        cov[i * dim + i] = 1.0;
    }
    let mut path_sigma = vec![0.0; dim];
    let mut path_c = vec![0.0; dim];

    let mut n_evals = 0usize;
    let mut best_point = mean.clone();
    let mut best_value = f64::INFINITY;
    let mut converged = false;
    let mut generation = 0usize;
    let mut recent_best: Vec<f64> = Vec::new();

    while n_evals + lambda <= opts.max_evals {
        generation += 1;

        let (mut eigvals, eigvecs) = linalg::symmetric_eigen(&cov, dim);
        for v in &mut eigvals {
            *v = v.max(1e-20);
        }
        let scales: Vec<f64> = eigvals.iter().map(|v| v.sqrt()).collect();
        let max_scale = scales.iter().cloned().fold(0.0f64, f64::max);

        // Sample λ offspring; infeasible ones are resampled a few times and
        // then projected onto the box.
        let mut population: Vec<(Vec<f64>, Vec<f64>, f64)> = Vec::with_capacity(lambda);
        for _ in 0..lambda {
            let mut x = vec![0.0; dim];
            let mut feasible = false;
            for _attempt in 0..10 {
                let z: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                for i in 0..dim {
                    let mut step = 0.0;
                    for k in 0..dim {
                        step += eigvecs[i * dim + k] * scales[k] * z[k];
                    }
                    x[i] = mean[i] + sigma * step;
                }
                if bounds.is_none_or(|b| b.contains(&x)) {
                    feasible = true;
                    break;
                }
            }
            if !feasible {
                if let Some(b) = bounds {
                    b.project(&mut x);
                }
            }
            let raw = objective(&x);
            n_evals += 1;
            let value = if raw.is_finite() { raw } else { f64::INFINITY };
            if value < best_value {
                best_value = value;
                best_point = x.clone();
            }
            // The update step is recomputed from the final (possibly
            // projected) position so selection and adaptation agree.
            let y: Vec<f64> = x.iter().zip(&mean).map(|(xi, mi)| (xi - mi) / sigma).collect();
            population.push((x, y, value));
        }

        population.sort_by(|a, b| a.2.partial_cmp(&b.2).unwrap_or(std::cmp::Ordering::Equal));

        let gen_best = population[0].2;
        let gen_worst = population[lambda - 1].2;

        let mut y_w = vec![0.0; dim];
        for (w, (_, y, _)) in weights.iter().zip(&population) {
            for i in 0..dim {
                y_w[i] += w * y[i];
            }
        }
        for i in 0..dim {
            mean[i] += sigma * y_w[i];
        }

        // C^(−1/2)·y_w for the step-size path.
        let mut c_inv_sqrt_y = vec![0.0; dim];
        for k in 0..dim {
            let mut proj = 0.0;
            for i in 0..dim {
                proj += eigvecs[i * dim + k] * y_w[i];
            }
            let scaled = proj / scales[k];
            for i in 0..dim {
                c_inv_sqrt_y[i] += eigvecs[i * dim + k] * scaled;
            }
        }
        let coef_sigma = (c_sigma * (2.0 - c_sigma) * mu_eff).sqrt();
        for i in 0..dim {
            path_sigma[i] = (1.0 - c_sigma) * path_sigma[i] + coef_sigma * c_inv_sqrt_y[i];
        }
        let ps_norm = path_sigma.iter().map(|v| v * v).sum::<f64>().sqrt();
        let expected =
            (1.0 - (1.0 - c_sigma).powi(2 * generation as i32)).sqrt() * chi_n;
        let h_sigma = if ps_norm / expected < (1.4 + 2.0 / (d + 1.0)) * 1.0 {
            1.0
        } else {
            0.0
        };

        let coef_c = (c_c * (2.0 - c_c) * mu_eff).sqrt();
        for i in 0..dim {
            path_c[i] = (1.0 - c_c) * path_c[i] + h_sigma * coef_c * y_w[i];
        }

        let delta_h = (1.0 - h_sigma) * c_c * (2.0 - c_c);
        for i in 0..dim {
            for j in 0..dim {
                let mut rank_mu = 0.0;
                for (w, (_, y, _)) in weights.iter().zip(&population) {
                    rank_mu += w * y[i] * y[j];
                }
                cov[i * dim + j] = (1.0 - c_1 - c_mu) * cov[i * dim + j]
                    + c_1 * (path_c[i] * path_c[j] + delta_h * cov[i * dim + j])
                    + c_mu * rank_mu;
            }
        }
        // Keep the matrix exactly symmetric against round-off drift.
        for i in 0..dim {
            for j in 0..i {
                let avg = 0.5 * (cov[i * dim + j] + cov[j * dim + i]);
                cov[i * dim + j] = avg;
                cov[j * dim + i] = avg;
            }
        }

        sigma *= ((c_sigma / d_sigma) * (ps_norm / chi_n - 1.0)).exp();
        if !sigma.is_finite() {
            break;
        }

        if let Some(target) = opts.f_target {
            if best_value <= target {
                converged = true;
                break;
            }
        }
        recent_best.push(gen_best);
        let window = 10 + (30.0 * d / lambda as f64).ceil() as usize;
        if recent_best.len() > window {
            recent_best.remove(0);
        }
        let hist_spread = recent_best
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
            - recent_best.iter().cloned().fold(f64::INFINITY, f64::min);
        if recent_best.len() == window
            && (gen_worst - gen_best) < opts.tol_fun
            && hist_spread < opts.tol_fun
        {
            converged = true;
            break;
        }
        if sigma * max_scale < opts.tol_x {
            converged = true;
            break;
        }
    }

    Ok(OptResult {
        best_point,
        best_value,
        n_evals,
        converged,
    })
}

//! Nelder–Mead simplex search with reflection/expansion/contraction/shrink
//! coefficients (1, 2, 0.5, 0.5). Box constraints are handled by projecting
//! every proposed vertex before evaluation.

use super::{BoxBounds, OptError, OptResult};

#[derive(Debug, Clone)]
pub struct NelderMeadOptions {
    /// Hard cap on objective evaluations.
    pub max_evals: usize,
    /// Stop when every vertex is within this distance of the best vertex.
    pub tol_x: f64,
    /// Stop when the value spread across the simplex falls below this.
    pub tol_f: f64,
    /// Initial step per axis, as a fraction of the bound width (or of
    /// `max(1, |x0_i|)` when unbounded).
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            max_evals: 1000,
            tol_x: 1e-8,
            tol_f: 1e-10,
            initial_step: 0.1,
        }
    }
}

struct Budget {
    used: usize,
    max: usize,
}

impl Budget {
    fn spend(&mut self) -> bool {
        if self.used < self.max {
            self.used += 1;
            true
        } else {
            false
        }
    }
}

pub fn nelder_mead<F>(
    mut objective: F,
    x0: &[f64],
    bounds: Option<&BoxBounds>,
    opts: &NelderMeadOptions,
) -> Result<OptResult, OptError>
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert!(n >= 1, "need at least one variable");
    if let Some(b) = bounds {
        if !b.contains(x0) {
            return Err(OptError::StartOutOfBounds);
        }
    }

    let mut budget = Budget { used: 0, max: opts.max_evals.max(1) };
    let mut best_point = x0.to_vec();
    let mut best_value = f64::INFINITY;

    let project = |mut x: Vec<f64>| {
        if let Some(b) = bounds {
            b.project(&mut x);
        }
        x
    };

    // Evaluate, tracking the best point ever seen. Non-finite values are
    // treated as +inf so a bad region cannot poison the bookkeeping.
    macro_rules! eval {
        ($x:expr) => {{
            let x: &Vec<f64> = &$x;
            if !budget.spend() {
                None
            } else {
                let raw = objective(x);
                let v = if raw.is_finite() { raw } else { f64::INFINITY };
                if v < best_value {
                    best_value = v;
                    best_point = x.clone();
                }
                Some(v)
            }
        }};
    }

    let f0 = eval!(x0.to_vec()).expect("budget is at least 1");
    if !f0.is_finite() {
        return Err(OptError::NonFiniteStart);
    }

    // Initial simplex: x0 plus one step along each axis, stepping inward when
    // the forward step would leave the box.
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        let scale = match bounds {
            Some(b) => b.upper()[i] - b.lower()[i],
            None => x0[i].abs().max(1.0),
        };
        let step = opts.initial_step * scale;
        let mut v = x0.to_vec();
        let forward_ok = bounds.is_none_or(|b| x0[i] + step <= b.upper()[i]);
        v[i] += if forward_ok { step } else { -step };
        let v = project(v);
        let fv = match eval!(v.clone()) {
            Some(f) => f,
            None => {
                return Ok(OptResult {
                    best_point,
                    best_value,
                    n_evals: budget.used,
                    converged: false,
                })
            }
        };
        simplex.push((v, fv));
    }

    let mut converged = false;
    'outer: loop {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));

        let spread = simplex[n].1 - simplex[0].1;
        let diameter = simplex[1..]
            .iter()
            .map(|(v, _)| {
                v.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0f64, f64::max);
        // Both criteria must hold: a value spread of zero alone can be a
        // symmetric straddle of the minimum with the simplex still wide.
        if diameter < opts.tol_x && spread < opts.tol_f {
            converged = true;
            break;
        }

        // Centroid of all vertices but the worst.
        let mut centroid = vec![0.0; n];
        for (v, _) in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let direction: Vec<f64> = centroid.iter().zip(&worst.0).map(|(c, w)| c - w).collect();
        let at = |coef: f64| -> Vec<f64> {
            project(
                centroid
                    .iter()
                    .zip(&direction)
                    .map(|(c, d)| c + coef * d)
                    .collect(),
            )
        };

        macro_rules! eval_or_stop {
            ($x:expr) => {
                match eval!($x) {
                    Some(f) => f,
                    None => break 'outer,
                }
            };
        }

        let reflected = at(1.0);
        let f_reflected = eval_or_stop!(reflected.clone());

        if f_reflected < simplex[0].1 {
            let expanded = at(2.0);
            let f_expanded = eval_or_stop!(expanded.clone());
            simplex[n] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
        } else if f_reflected < simplex[n - 1].1 {
            simplex[n] = (reflected, f_reflected);
        } else {
            // Outside contraction keeps a tie with the reflected value;
            // inside contraction must strictly improve on the worst vertex,
            // otherwise flat regions never reach the shrink step.
            let accepted = if f_reflected < worst.1 {
                let contracted = at(0.5);
                let f_contracted = eval_or_stop!(contracted.clone());
                (f_contracted <= f_reflected).then_some((contracted, f_contracted))
            } else {
                let contracted = at(-0.5);
                let f_contracted = eval_or_stop!(contracted.clone());
                (f_contracted < worst.1).then_some((contracted, f_contracted))
            };
            match accepted {
                Some(entry) => simplex[n] = entry,
                None => {
                    // Shrink toward the best vertex.
                    let anchor = simplex[0].0.clone();
                    for entry in simplex.iter_mut().skip(1) {
                        let shrunk = project(
                            anchor
                                .iter()
                                .zip(&entry.0)
                                .map(|(a, v)| a + 0.5 * (v - a))
                                .collect(),
                        );
                        let f_shrunk = eval_or_stop!(shrunk.clone());
                        *entry = (shrunk, f_shrunk);
                    }
                }
            }
        }
    }

    Ok(OptResult {
        best_point,
        best_value,
        n_evals: budget.used,
        converged,
    })
}

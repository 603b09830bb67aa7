//! Shared test oracles. Everything here is deliberately independent of the
//! library's linear-algebra path: plain Gauss–Jordan elimination with
//! partial pivoting, an explicit determinant, and a textbook dense Cholesky.

#![allow(dead_code)]
// Textbook index-style loops are deliberate here: the oracle should read
// like the pseudocode it is checked against.
#![allow(clippy::needless_range_loop)]

use mgso::gp::{kernel, GpHyperParams};

/// Inverse by Gauss–Jordan elimination with partial pivoting.
pub fn dense_inverse(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut ext = row.clone();
            ext.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            ext
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| m[r1][col].abs().partial_cmp(&m[r2][col].abs()).unwrap())
            .unwrap();
        m.swap(col, pivot_row);
        let pivot = m[col][col];
        assert!(pivot.abs() > 0.0, "singular matrix");
        for j in 0..2 * n {
            m[col][j] /= pivot;
        }
        for row in 0..n {
            if row != col {
                let factor = m[row][col];
                for j in 0..2 * n {
                    m[row][j] -= factor * m[col][j];
                }
            }
        }
    }
    m.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Determinant by LU elimination with partial pivoting.
pub fn dense_determinant(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| m[r1][col].abs().partial_cmp(&m[r2][col].abs()).unwrap())
            .unwrap();
        if pivot_row != col {
            m.swap(col, pivot_row);
            det = -det;
        }
        let pivot = m[col][col];
        if pivot == 0.0 {
            return 0.0;
        }
        det *= pivot;
        for row in col + 1..n {
            let factor = m[row][col] / pivot;
            for j in col..n {
                m[row][j] -= factor * m[col][j];
            }
        }
    }
    det
}

/// Textbook dense Cholesky; returns the diagonal pivots `d_i` (before the
/// square root), or `None` as soon as one is non-positive.
pub fn dense_cholesky_pivots(a: &[Vec<f64>]) -> Option<Vec<f64>> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    let mut pivots = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                pivots.push(s);
                if s <= 0.0 || s.is_nan() {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(pivots)
}

/// Training covariance `C = K + σI` assembled through the public kernel.
pub fn covariance_matrix(rows: &[Vec<f64>], hp: &GpHyperParams) -> Vec<Vec<f64>> {
    let n = rows.len();
    let mut c = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            c[i][j] = kernel(&rows[i], &rows[j], hp);
        }
        c[i][i] += hp.noise;
    }
    c
}

pub fn mat_vec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter().map(|row| dot(row, x)).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Mean/variance at `query` through the explicit inverse, with the same
/// value-centering convention the library uses.
pub fn oracle_predict(
    rows: &[Vec<f64>],
    values: &[f64],
    hp: &GpHyperParams,
    query: &[f64],
) -> (f64, f64) {
    let n = rows.len();
    let c = covariance_matrix(rows, hp);
    let c_inv = dense_inverse(&c);
    let y_mean = values.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = values.iter().map(|y| y - y_mean).collect();
    let k: Vec<f64> = rows.iter().map(|r| kernel(query, r, hp)).collect();
    let mean = y_mean + dot(&k, &mat_vec(&c_inv, &centered));
    let kappa = hp.signal_variance + hp.noise;
    let variance = kappa - dot(&k, &mat_vec(&c_inv, &k));
    (mean, variance.max(0.0))
}

/// Raw negative log likelihood through the explicit determinant and inverse.
pub fn oracle_nll(rows: &[Vec<f64>], values: &[f64], hp: &GpHyperParams) -> f64 {
    let n = rows.len();
    let c = covariance_matrix(rows, hp);
    let c_inv = dense_inverse(&c);
    let det = dense_determinant(&c);
    let quad = dot(values, &mat_vec(&c_inv, values));
    0.5 * quad + 0.5 * det.ln() + 0.5 * n as f64 * (2.0 * std::f64::consts::PI).ln()
}

/// Draws one sample of a zero-mean multivariate Gaussian with covariance
/// `C = K + σI`, using the dense Cholesky above (not the library's).
pub fn sample_gp_values<R: rand::Rng + ?Sized>(
    rows: &[Vec<f64>],
    hp: &GpHyperParams,
    rng: &mut R,
) -> Vec<f64> {
    let n = rows.len();
    let c = covariance_matrix(rows, hp);
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = c[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                assert!(s > 0.0, "sampling covariance is not positive definite");
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    let z: Vec<f64> = (0..n)
        .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
        .collect();
    (0..n).map(|i| dot(&l[i][..=i], &z[..=i])).collect()
}

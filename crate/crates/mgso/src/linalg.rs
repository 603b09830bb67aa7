//! Small dense linear-algebra routines shared by the GP core and CMA-ES.
//!
//! Lower-triangular factors are stored packed (row `i` occupies `i + 1`
//! consecutive entries), which keeps the forward-substitution inner loops
//! on contiguous memory.

/// Index of the first entry of packed row `i`.
#[inline]
pub(crate) fn row_start(i: usize) -> usize {
    i * (i + 1) / 2
}

/// Cholesky factorization `A = L·Lᵀ` of a symmetric matrix given in full
/// row-major storage. Returns the packed lower factor, or the index of the
/// first non-positive (or non-finite) pivot.
pub(crate) fn cholesky_lower(a: &[f64], n: usize) -> Result<Vec<f64>, usize> {
    debug_assert_eq!(a.len(), n * n);
    let mut l = vec![0.0; n * (n + 1) / 2];
    for i in 0..n {
        let (head, tail) = l.split_at_mut(row_start(i));
        let row_i = &mut tail[..i + 1];
        for j in 0..i {
            let row_j = &head[row_start(j)..row_start(j) + j];
            let s = a[i * n + j] - dot(&row_i[..j], row_j);
            row_i[j] = s / head[row_start(j) + j];
        }
        let d = a[i * n + i] - dot(&row_i[..i], &row_i[..i]);
        if d <= 0.0 || !d.is_finite() {
            return Err(i);
        }
        row_i[i] = d.sqrt();
    }
    Ok(l)
}

/// Solves `L·x = b` in place for a packed lower factor.
pub(crate) fn solve_lower(l: &[f64], n: usize, b: &mut [f64]) {
    debug_assert_eq!(b.len(), n);
    for i in 0..n {
        let row = &l[row_start(i)..row_start(i) + i + 1];
        let s = b[i] - dot(&row[..i], &b[..i]);
        b[i] = s / row[i];
    }
}

/// Solves `Lᵀ·x = b` in place for a packed lower factor.
pub(crate) fn solve_lower_transpose(l: &[f64], n: usize, b: &mut [f64]) {
    debug_assert_eq!(b.len(), n);
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= l[row_start(j) + i] * b[j];
        }
        b[i] = s / l[row_start(i) + i];
    }
}

/// `log det A` from the packed Cholesky factor of `A`.
pub(crate) fn log_det_from_cholesky(l: &[f64], n: usize) -> f64 {
    (0..n).map(|i| l[row_start(i) + i].ln()).sum::<f64>() * 2.0
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Eigendecomposition of a symmetric matrix (full row-major storage) by
/// cyclic Jacobi rotations. Returns `(eigenvalues, eigenvectors)` with
/// eigenvectors stored column-major (column k pairs with eigenvalue k).
/// Intended for the small matrices CMA-ES works with.
pub(crate) fn symmetric_eigen(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if off.sqrt() < 1e-14 * (1.0 + frobenius(&m, n)) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let eigenvalues = (0..n).map(|i| m[i * n + i]).collect();
    (eigenvalues, v)
}

fn frobenius(m: &[f64], n: usize) -> f64 {
    m.iter().take(n * n).map(|x| x * x).sum::<f64>().sqrt()
}

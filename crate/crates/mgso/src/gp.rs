//! Exact Gaussian-process regression with squared-exponential kernels.
//!
//! The model treats observed values as one draw of a zero-mean multivariate
//! Gaussian whose covariance is `C_N = K_N + σ·I`, where `K_N` holds pairwise
//! kernel values and `σ` is the signal noise. Conditioning on the data gives
//! a univariate Gaussian at any query point; [`GpPosterior::predict`] returns
//! its mean and variance. Values are centered by their sample mean before
//! fitting and the offset is added back on prediction, so the zero-mean prior
//! behaves sensibly on objectives with large constant offsets.
//!
//! Two kernel parameterizations are supported behind one code path: a single
//! characteristic length-scale, and per-axis length-scales (automatic
//! relevance determination). Both are stored as inverse-squared scales so the
//! isotropic kernel is exactly the ARD kernel with equal components.

use thiserror::Error;

use crate::linalg;

/// Default relative pivot tolerance for the near-indefiniteness check used
/// when screening sampled candidates.
pub const DEFAULT_PSD_TOLERANCE: f64 = 1e-8;

/// Negative predictive variances within `tol·max(1, θ+σ)` of zero are
/// round-off and clamped; anything more negative is an internal bug.
const VARIANCE_CLAMP_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum GpError {
    #[error("covariance matrix is not positive definite (pivot {pivot_index})")]
    NotPositiveDefinite { pivot_index: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid hyper-parameters: {0}")]
    InvalidHyperParams(String),
    #[error("cannot fit a model on an empty dataset")]
    EmptyDataset,
}

/// Kernel length-scales, stored as inverse-squared scales (`1/ℓ²` per axis).
#[derive(Debug, Clone, PartialEq)]
pub enum LengthScales {
    /// One shared scale: the kernel exponent is `|x−x′|² / (2ℓ²)`.
    Iso { inv_sq: f64 },
    /// Per-axis scales: the exponent is `½·Σ w_d (x_d−x′_d)²` with `w_d = 1/ℓ_d²`.
    Ard { inv_sq: Vec<f64> },
}

impl LengthScales {
    /// Isotropic scales from a length `ℓ > 0`.
    pub fn iso(ell: f64) -> Self {
        assert!(ell > 0.0, "length-scale must be positive");
        LengthScales::Iso { inv_sq: 1.0 / (ell * ell) }
    }

    /// ARD scales from per-axis lengths `ℓ_d > 0`.
    pub fn ard_from_lengths(lengths: &[f64]) -> Self {
        assert!(!lengths.is_empty());
        let inv_sq = lengths
            .iter()
            .map(|&l| {
                assert!(l > 0.0, "length-scale must be positive");
                1.0 / (l * l)
            })
            .collect();
        LengthScales::Ard { inv_sq }
    }

    /// Converts back to the length domain, one entry per input axis.
    pub fn lengths(&self, dim: usize) -> Vec<f64> {
        match self {
            LengthScales::Iso { inv_sq } => vec![1.0 / inv_sq.sqrt(); dim],
            LengthScales::Ard { inv_sq } => inv_sq.iter().map(|w| 1.0 / w.sqrt()).collect(),
        }
    }

    pub fn is_ard(&self) -> bool {
        matches!(self, LengthScales::Ard { .. })
    }

    fn check_dim(&self, dim: usize) -> Result<(), GpError> {
        match self {
            LengthScales::Iso { .. } => Ok(()),
            LengthScales::Ard { inv_sq } if inv_sq.len() == dim => Ok(()),
            LengthScales::Ard { inv_sq } => Err(GpError::DimensionMismatch {
                expected: dim,
                actual: inv_sq.len(),
            }),
        }
    }

    /// Weighted squared distance between two points (the kernel exponent
    /// before the −½ factor).
    #[inline]
    fn weighted_sq_dist(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            LengthScales::Iso { inv_sq } => linalg::squared_distance(a, b) * inv_sq,
            LengthScales::Ard { inv_sq } => a
                .iter()
                .zip(b)
                .zip(inv_sq)
                .map(|((x, y), w)| (x - y) * (x - y) * w)
                .sum(),
        }
    }
}

/// Kernel and noise parameters: signal variance `θ`, length-scales, noise `σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GpHyperParams {
    pub signal_variance: f64,
    pub length_scales: LengthScales,
    pub noise: f64,
}

impl GpHyperParams {
    pub fn new(signal_variance: f64, length_scales: LengthScales, noise: f64) -> Self {
        GpHyperParams { signal_variance, length_scales, noise }
    }

    pub fn validate(&self, dim: usize) -> Result<(), GpError> {
        if self.signal_variance <= 0.0 || !self.signal_variance.is_finite() {
            return Err(GpError::InvalidHyperParams(format!(
                "signal variance must be positive and finite, got {}",
                self.signal_variance
            )));
        }
        if self.noise < 0.0 || !self.noise.is_finite() {
            return Err(GpError::InvalidHyperParams(format!(
                "noise must be non-negative and finite, got {}",
                self.noise
            )));
        }
        let positive = match &self.length_scales {
            LengthScales::Iso { inv_sq } => *inv_sq > 0.0 && inv_sq.is_finite(),
            LengthScales::Ard { inv_sq } => {
                inv_sq.iter().all(|w| *w > 0.0 && w.is_finite())
            }
        };
        if !positive {
            return Err(GpError::InvalidHyperParams(
                "every length-scale component must be positive and finite".into(),
            ));
        }
        self.length_scales.check_dim(dim)
    }

    /// Prior variance of a single point: `κ = θ + σ`.
    pub fn kappa(&self) -> f64 {
        self.signal_variance + self.noise
    }
}

/// Squared-exponential kernel value `θ·exp(−½·q)` with `q` the (possibly
/// per-axis weighted) squared distance. Symmetric, in `(0, θ]`.
pub fn kernel(x: &[f64], x2: &[f64], hp: &GpHyperParams) -> f64 {
    assert_eq!(x.len(), x2.len(), "kernel arguments must share a dimension");
    hp.length_scales
        .check_dim(x.len())
        .expect("hyper-parameter dimension must match the points");
    let q = hp.length_scales.weighted_sq_dist(x, x2);
    hp.signal_variance * (-0.5 * q).exp()
}

/// Archive of evaluated points: an `N×D` matrix (flat, row-major) plus values.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    dim: usize,
    points: Vec<f64>,
    values: Vec<f64>,
}

impl Dataset {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1);
        Dataset { dim, points: Vec::new(), values: Vec::new() }
    }

    pub fn from_rows(rows: &[Vec<f64>], values: &[f64]) -> Self {
        assert!(!rows.is_empty(), "need at least one row");
        assert_eq!(rows.len(), values.len());
        let mut ds = Dataset::new(rows[0].len());
        for (row, &y) in rows.iter().zip(values) {
            ds.push(row, y);
        }
        ds
    }

    pub fn push(&mut self, x: &[f64], y: f64) {
        assert_eq!(x.len(), self.dim);
        assert!(y.is_finite(), "observed values must be finite");
        self.points.extend_from_slice(x);
        self.values.push(y);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter_points(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.dim)
    }

    /// Same points, different values (used to center values before fitting).
    pub fn with_values(&self, values: Vec<f64>) -> Dataset {
        assert_eq!(values.len(), self.len());
        Dataset { dim: self.dim, points: self.points.clone(), values }
    }
}

/// Posterior mean and variance at one query point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub mean: f64,
    pub variance: f64,
}

/// A fitted GP: dataset, hyper-parameters, the Cholesky factor of
/// `C_N = K_N + σI`, and the precomputed weight vector `C_N⁻¹(y − ȳ)`.
///
/// Immutable after construction; safe to share across threads for reads.
#[derive(Debug, Clone)]
pub struct GpPosterior {
    dataset: Dataset,
    hyper_params: GpHyperParams,
    chol: Vec<f64>,
    alpha: Vec<f64>,
    y_mean: f64,
    kappa: f64,
}

impl GpPosterior {
    /// Assembles and factorizes the training covariance. Deterministic for
    /// identical inputs. Fails with the failing pivot index when the matrix
    /// is not numerically positive definite.
    pub fn new(dataset: Dataset, hyper_params: GpHyperParams) -> Result<Self, GpError> {
        if dataset.is_empty() {
            return Err(GpError::EmptyDataset);
        }
        hyper_params.validate(dataset.dim())?;
        let n = dataset.len();
        let mut c = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = kernel(dataset.point(i), dataset.point(j), &hyper_params);
                c[i * n + j] = v;
                c[j * n + i] = v;
            }
            c[i * n + i] += hyper_params.noise;
        }
        let chol = linalg::cholesky_lower(&c, n)
            .map_err(|pivot_index| GpError::NotPositiveDefinite { pivot_index })?;
        let y_mean = dataset.values().iter().sum::<f64>() / n as f64;
        let mut alpha: Vec<f64> = dataset.values().iter().map(|y| y - y_mean).collect();
        linalg::solve_lower(&chol, n, &mut alpha);
        linalg::solve_lower_transpose(&chol, n, &mut alpha);
        let kappa = hyper_params.kappa();
        Ok(GpPosterior { dataset, hyper_params, chol, alpha, y_mean, kappa })
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    pub fn hyper_params(&self) -> &GpHyperParams {
        &self.hyper_params
    }

    pub fn y_mean(&self) -> f64 {
        self.y_mean
    }

    /// Prior variance `θ + σ` of a single query.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    fn kernel_vector(&self, x: &[f64]) -> Vec<f64> {
        self.dataset
            .iter_points()
            .map(|p| kernel(x, p, &self.hyper_params))
            .collect()
    }

    /// Posterior mean and variance at `x`:
    /// `ŷ = ȳ + kᵀC_N⁻¹(y − ȳ)`, `s² = κ − kᵀC_N⁻¹k`.
    pub fn predict(&self, x: &[f64]) -> Prediction {
        assert_eq!(x.len(), self.dataset.dim(), "query dimension mismatch");
        let k = self.kernel_vector(x);
        let mean = self.y_mean + linalg::dot(&k, &self.alpha);
        let mut w = k;
        linalg::solve_lower(&self.chol, self.dataset.len(), &mut w);
        let variance = self.clamp_variance(self.kappa - linalg::dot(&w, &w));
        Prediction { mean, variance }
    }

    /// Mean-only prediction; skips the triangular solve the variance needs.
    pub fn predict_mean(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dataset.dim(), "query dimension mismatch");
        let k = self.kernel_vector(x);
        self.y_mean + linalg::dot(&k, &self.alpha)
    }

    fn clamp_variance(&self, variance: f64) -> f64 {
        if variance >= 0.0 {
            return variance;
        }
        let tol = VARIANCE_CLAMP_TOL * self.kappa.max(1.0);
        if variance >= -tol {
            0.0
        } else {
            panic!(
                "predictive variance {variance} is more negative than round-off allows; \
                 the posterior state is inconsistent"
            );
        }
    }

    /// Whether appending `x` to the training set keeps the covariance safely
    /// positive definite. Pure; see [`PsdAugmenter`] for the sequential
    /// batch variant that accumulates accepted points.
    pub fn psd_check_augmented(&self, x: &[f64]) -> bool {
        self.augmenter(DEFAULT_PSD_TOLERANCE).check(x)
    }

    /// Starts an incremental near-indefiniteness screen with the given
    /// relative pivot tolerance.
    pub fn augmenter(&self, tolerance: f64) -> PsdAugmenter<'_> {
        PsdAugmenter {
            posterior: self,
            extra_points: Vec::new(),
            extra_rows: Vec::new(),
            tolerance,
        }
    }
}

/// The per-dataset negative log marginal likelihood
/// `½·yᵀC_N⁻¹y + ½·log det C_N + (N/2)·log 2π`, computed from the Cholesky
/// factor of `C_N`. Values are used as-is (no centering).
pub fn neg_log_likelihood(dataset: &Dataset, hp: &GpHyperParams) -> Result<f64, GpError> {
    if dataset.is_empty() {
        return Err(GpError::EmptyDataset);
    }
    hp.validate(dataset.dim())?;
    let n = dataset.len();
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let v = kernel(dataset.point(i), dataset.point(j), hp);
            c[i * n + j] = v;
            c[j * n + i] = v;
        }
        c[i * n + i] += hp.noise;
    }
    let chol = linalg::cholesky_lower(&c, n)
        .map_err(|pivot_index| GpError::NotPositiveDefinite { pivot_index })?;
    let mut w = dataset.values().to_vec();
    linalg::solve_lower(&chol, n, &mut w);
    let quad = linalg::dot(&w, &w);
    let log_det = linalg::log_det_from_cholesky(&chol, n);
    Ok(0.5 * quad + 0.5 * log_det + 0.5 * n as f64 * (2.0 * std::f64::consts::PI).ln())
}

/// Incremental positive-definiteness screen over a growing candidate batch.
///
/// Each accepted candidate extends the Cholesky factor by one row, so later
/// candidates are checked against the training set *plus* everything already
/// accepted in this batch. A candidate passes when its Schur-complement pivot
/// exceeds `tolerance·(θ + σ)`. No jitter is applied here: near-duplicates
/// must be rejected, not papered over.
pub struct PsdAugmenter<'a> {
    posterior: &'a GpPosterior,
    extra_points: Vec<f64>,
    /// Appended packed factor rows; row j has length N + j + 1.
    extra_rows: Vec<Vec<f64>>,
    tolerance: f64,
}

impl PsdAugmenter<'_> {
    pub fn n_accepted(&self) -> usize {
        self.extra_rows.len()
    }

    fn pivot_and_row(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let ds = self.posterior.dataset();
        let hp = self.posterior.hyper_params();
        let n = ds.len();
        let m = self.extra_rows.len();
        let mut k: Vec<f64> = Vec::with_capacity(n + m);
        k.extend(ds.iter_points().map(|p| kernel(x, p, hp)));
        k.extend(
            self.extra_points
                .chunks_exact(ds.dim())
                .map(|p| kernel(x, p, hp)),
        );
        // Forward solve against the composite factor: base rows then extras.
        linalg::solve_lower(&self.posterior.chol, n, &mut k[..n]);
        for j in 0..m {
            let row = &self.extra_rows[j];
            let s = k[n + j] - linalg::dot(&row[..n + j], &k[..n + j]);
            k[n + j] = s / row[n + j];
        }
        let pivot = self.posterior.kappa - linalg::dot(&k, &k);
        (pivot, k)
    }

    /// Pure check: would `x` keep the augmented covariance well-conditioned?
    pub fn check(&self, x: &[f64]) -> bool {
        let (pivot, _) = self.pivot_and_row(x);
        pivot > self.tolerance * self.posterior.kappa
    }

    /// Checks `x` and, on success, commits it to the batch.
    pub fn try_accept(&mut self, x: &[f64]) -> bool {
        let (pivot, mut row) = self.pivot_and_row(x);
        if pivot > self.tolerance * self.posterior.kappa {
            row.push(pivot.sqrt());
            self.extra_rows.push(row);
            self.extra_points.extend_from_slice(x);
            true
        } else {
            false
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iso_params(theta: f64, ell: f64, noise: f64) -> GpHyperParams {
        GpHyperParams::new(theta, LengthScales::iso(ell), noise)
    }

    #[test]
    fn kernel_at_zero_distance_is_theta() {
        let hp = iso_params(1.0, 1.0, 0.0);
        assert_eq!(kernel(&[0.3, -0.7], &[0.3, -0.7], &hp), 1.0);
    }

    #[test]
    fn kernel_matches_direct_substitution() {
        // |x−x′|² = 2 with θ = ℓ = 1 gives exp(−1).
        let hp = iso_params(1.0, 1.0, 0.0);
        let v = kernel(&[1.0, 1.0], &[0.0, 0.0], &hp);
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
        assert!((v - 0.367879441171442).abs() < 1e-12);
    }

    #[test]
    fn ard_with_equal_components_equals_iso() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let ell = 0.37;
        let iso = iso_params(1.3, ell, 0.0);
        let ard = GpHyperParams::new(1.3, LengthScales::ard_from_lengths(&[ell; 4]), 0.0);
        for _ in 0..100 {
            let a: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
            let b: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
            assert!((kernel(&a, &b, &iso) - kernel(&a, &b, &ard)).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_is_symmetric_and_bounded() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let hp = GpHyperParams::new(2.5, LengthScales::ard_from_lengths(&[0.4, 1.7, 0.9]), 0.0);
        for _ in 0..200 {
            let a: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let b: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let kab = kernel(&a, &b, &hp);
            let kba = kernel(&b, &a, &hp);
            assert_eq!(kab, kba);
            assert!(kab > 0.0 && kab <= 2.5);
        }
        assert_eq!(kernel(&[0.1, 0.2, 0.3], &[0.1, 0.2, 0.3], &hp), 2.5);
    }

    #[test]
    fn single_point_posterior_has_expected_factor() {
        let ds = Dataset::from_rows(&[vec![0.0]], &[2.0]);
        let post = GpPosterior::new(ds, iso_params(1.0, 1.0, 0.01)).unwrap();
        assert!((post.chol[0] - 1.01f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn duplicate_rows_without_noise_fail() {
        let ds = Dataset::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]], &[1.0, 1.0]);
        let err = GpPosterior::new(ds, iso_params(1.0, 1.0, 0.0)).unwrap_err();
        assert_eq!(err, GpError::NotPositiveDefinite { pivot_index: 1 });
    }

    #[test]
    fn noise_free_training_point_is_interpolated() {
        let ds = Dataset::from_rows(&[vec![0.0]], &[2.0]);
        let post = GpPosterior::new(ds, iso_params(1.0, 1.0, 0.0)).unwrap();
        let p = post.predict(&[0.0]);
        assert!((p.mean - 2.0).abs() < 1e-12);
        assert!(p.variance.abs() < 1e-12);
    }

    #[test]
    fn far_query_reverts_to_prior() {
        let ds = Dataset::from_rows(&[vec![0.0]], &[2.0]);
        let post = GpPosterior::new(ds, iso_params(1.0, 1.0, 0.0)).unwrap();
        let p = post.predict(&[100.0]);
        assert!((p.mean - post.y_mean()).abs() < 1e-6);
        assert!((p.variance - post.kappa()).abs() < 1e-6);
    }

    #[test]
    fn interpolation_at_all_training_points() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let n = rng.random_range(2..8);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..2).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect();
            let values: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
            let ds = Dataset::from_rows(&rows, &values);
            let post = match GpPosterior::new(ds, iso_params(1.0, 0.7, 0.0)) {
                Ok(p) => p,
                // A rare near-duplicate draw without noise; skip it.
                Err(GpError::NotPositiveDefinite { .. }) => continue,
                Err(e) => panic!("{e}"),
            };
            for (row, &y) in rows.iter().zip(&values) {
                let p = post.predict(row);
                assert!((p.mean - y).abs() < 1e-6, "mean {} vs {}", p.mean, y);
                assert!(p.variance.abs() < 1e-6);
            }
        }
    }

    #[test]
    fn nll_of_single_standard_observation() {
        // N = 1, raw y = 0, θ + σ = 1: the standard normal gives ½·log 2π.
        let ds = Dataset::from_rows(&[vec![0.0]], &[0.0]);
        let hp = iso_params(0.99, 1.0, 0.01);
        let nll = neg_log_likelihood(&ds, &hp).unwrap();
        assert!((nll - 0.918_938_533_204_672_7).abs() < 1e-12);

        let ds = Dataset::from_rows(&[vec![0.0]], &[1.0]);
        let nll = neg_log_likelihood(&ds, &hp).unwrap();
        assert!((nll - 1.418_938_533_204_672_7).abs() < 1e-12);
    }

    #[test]
    fn psd_check_rejects_exact_duplicate() {
        let ds = Dataset::from_rows(&[vec![0.0], vec![1.0]], &[0.0, 1.0]);
        let post = GpPosterior::new(ds, iso_params(1.0, 1.0, 0.0)).unwrap();
        assert!(!post.psd_check_augmented(&[0.0]));
        assert!(!post.psd_check_augmented(&[1.0]));
    }

    #[test]
    fn psd_check_accepts_distant_point() {
        let ds = Dataset::from_rows(&[vec![0.0], vec![1.0]], &[0.0, 1.0]);
        let post = GpPosterior::new(ds, iso_params(1.0, 1.0, 0.0)).unwrap();
        assert!(post.psd_check_augmented(&[10.0]));
    }

    #[test]
    fn augmenter_rejects_duplicate_of_accepted_point() {
        let ds = Dataset::from_rows(&[vec![0.0]], &[0.0]);
        let post = GpPosterior::new(ds, iso_params(1.0, 1.0, 0.0)).unwrap();
        let mut aug = post.augmenter(DEFAULT_PSD_TOLERANCE);
        assert!(aug.try_accept(&[0.5]));
        // The same point passes the one-shot check but must now fail.
        assert!(post.psd_check_augmented(&[0.5]));
        assert!(!aug.try_accept(&[0.5]));
        assert_eq!(aug.n_accepted(), 1);
    }

    #[test]
    fn variance_stays_in_prior_range() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let rows: Vec<Vec<f64>> = (0..12)
            .map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let values: Vec<f64> = (0..12).map(|_| rng.random_range(-2.0..2.0)).collect();
        let ds = Dataset::from_rows(&rows, &values);
        let hp = iso_params(1.7, 0.5, 1e-4);
        let post = GpPosterior::new(ds, hp).unwrap();
        let kappa = post.kappa();
        for _ in 0..10_000 {
            let q: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let p = post.predict(&q);
            assert!(p.variance >= 0.0);
            assert!(p.variance <= kappa + 1e-9);
        }
    }

    #[test]
    fn extra_training_point_never_increases_variance() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(53);
        let mut done = 0;
        while done < 25 {
            let n = rng.random_range(2..10);
            let rows: Vec<Vec<f64>> = (0..n + 1)
                .map(|_| (0..2).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect();
            let values: Vec<f64> = (0..n + 1).map(|_| rng.random_range(-2.0..2.0)).collect();
            let hp = iso_params(1.0, 0.6, 0.0);
            let small = Dataset::from_rows(&rows[..n], &values[..n]);
            let large = Dataset::from_rows(&rows, &values);
            let (post_small, post_large) =
                match (GpPosterior::new(small, hp.clone()), GpPosterior::new(large, hp)) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => continue,
                };
            for _ in 0..20 {
                let q: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
                let vs = post_small.predict(&q).variance;
                let vl = post_large.predict(&q).variance;
                assert!(vl <= vs + 1e-9, "variance grew: {vs} -> {vl}");
            }
            done += 1;
        }
    }
}

//! Regression from per-pair resistance changes to contact location.
//!
//! Two learners are provided: ordinary least squares with an intercept, and
//! kernel ridge regression with the Laplacian kernel
//! `k(a, b) = exp(-σ·‖a − b‖₁)`. The kernel model's ridge factor λ and
//! bandwidth σ are chosen by grid search, fitting on the first half of the
//! training records and scoring the median localization error on the second.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::geometry::Point2;

/// Feature vector of one indentation (ohms, canonical pair order).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("feature {k} is not finite")));
        }
        Ok(FeatureVector(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::LengthMismatch { expected, actual });
    }
    Ok(())
}

fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

pub fn laplacian_kernel(a: &[f64], b: &[f64], sigma: f64) -> Result<f64> {
    check_len(a.len(), b.len())?;
    if !(sigma > 0.0) {
        return Err(Error::Domain(format!("kernel sigma must be positive, got {sigma}")));
    }
    Ok((-sigma * l1_distance(a, b)).exp())
}

/// Anything that maps a feature vector to a location.
pub trait Predictor {
    fn predict(&self, features: &[f64]) -> Result<Point2>;

    /// Expected feature length, or `None` when features are ignored.
    fn feature_len(&self) -> Option<usize>;
}

fn design(data: &Dataset) -> (Vec<&[f64]>, Vec<[f64; 2]>) {
    data.records
        .iter()
        .map(|r| (r.dr.as_slice(), [r.indentation.location.x, r.indentation.location.y]))
        .unzip()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    /// Two rows (x, y), one column per feature.
    pub weights: [Vec<f64>; 2],
    pub intercept: [f64; 2],
}

impl Predictor for LinearModel {
    fn predict(&self, f: &[f64]) -> Result<Point2> {
        check_len(self.weights[0].len(), f.len())?;
        let dot = |w: &[f64]| w.iter().zip(f).map(|(a, b)| a * b).sum::<f64>();
        Ok(Point2::new(
            self.intercept[0] + dot(&self.weights[0]),
            self.intercept[1] + dot(&self.weights[1]),
        ))
    }

    fn feature_len(&self) -> Option<usize> {
        Some(self.weights[0].len())
    }
}

pub fn fit_linear(train: &Dataset) -> Result<LinearModel> {
    let (x, y) = design(train);
    fit_linear_rows(&x, &y, train.feature_len())
}

/// Least squares with intercept via centred, column-scaled normal equations
/// plus a `1e-10·trace/p` diagonal stabilizer.
pub fn fit_linear_rows(x: &[&[f64]], y: &[[f64; 2]], p: usize) -> Result<LinearModel> {
    let n = x.len();
    check_len(n, y.len())?;
    if n < p + 1 {
        return Err(Error::Fit(format!(
            "linear regression needs at least {} records, got {n}",
            p + 1
        )));
    }
    for row in x {
        check_len(p, row.len())?;
    }
    let mean_x: Vec<f64> = (0..p).map(|j| x.iter().map(|r| r[j]).sum::<f64>() / n as f64).collect();
    let mean_y = [0, 1].map(|c| y.iter().map(|l| l[c]).sum::<f64>() / n as f64);
    let xc = DMatrix::from_fn(n, p, |i, j| x[i][j] - mean_x[j]);
    let scale: Vec<f64> = (0..p)
        .map(|j| {
            let norm = xc.column(j).norm();
            if norm > 0.0 {
                norm
            } else {
                1.0
            }
        })
        .collect();
    let xs = DMatrix::from_fn(n, p, |i, j| xc[(i, j)] / scale[j]);
    let yc = DMatrix::from_fn(n, 2, |i, c| y[i][c] - mean_y[c]);

    let mut gram = xs.transpose() * &xs;
    let trace = gram.trace();
    let eps = if trace > 0.0 { 1e-10 * trace / p.max(1) as f64 } else { 1e-10 };
    for j in 0..p {
        gram[(j, j)] += eps;
    }
    let chol = gram
        .cholesky()
        .ok_or_else(|| Error::Fit("normal equations are rank deficient".into()))?;
    let w = chol.solve(&(xs.transpose() * yc));

    let weights = [0, 1].map(|c| (0..p).map(|j| w[(j, c)] / scale[j]).collect::<Vec<f64>>());
    let intercept = [0, 1].map(|c| mean_y[c] - weights[c].iter().zip(&mean_x).map(|(a, b)| a * b).sum::<f64>());
    if weights.iter().flatten().chain(&intercept).any(|v| !v.is_finite()) {
        return Err(Error::Fit("linear regression produced non-finite weights".into()));
    }
    Ok(LinearModel { weights, intercept })
}

/// How λ enters the dual system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RidgeScaling {
    /// `K + λ·n·I`.
    #[default]
    PerSample,
    /// `K + λ·I`.
    Unscaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct KrrOptions {
    pub ridge_scaling: RidgeScaling,
    /// Z-score features with training statistics before the kernel.
    pub standardize: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Standardizer {
    fn fit(x: &[&[f64]], p: usize) -> Self {
        let n = x.len().max(1) as f64;
        let mean: Vec<f64> = (0..p).map(|j| x.iter().map(|r| r[j]).sum::<f64>() / n).collect();
        let scale = (0..p)
            .map(|j| {
                let var = x.iter().map(|r| (r[j] - mean[j]).powi(2)).sum::<f64>() / n;
                if var > 0.0 {
                    var.sqrt()
                } else {
                    1.0
                }
            })
            .collect();
        Standardizer { mean, scale }
    }

    fn apply(&self, f: &[f64]) -> Vec<f64> {
        f.iter()
            .zip(self.mean.iter().zip(&self.scale))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrrModel {
    pub support: Vec<Vec<f64>>,
    /// One `[x, y]` row per support vector.
    pub dual_coefficients: Vec<[f64; 2]>,
    pub sigma: f64,
    pub lambda: f64,
    pub label_offset: [f64; 2],
    #[serde(default)]
    pub options: KrrOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standardizer: Option<Standardizer>,
}

impl KrrModel {
    fn kernel_row(&self, f: &[f64]) -> Vec<f64> {
        self.support
            .iter()
            .map(|s| (-self.sigma * l1_distance(s, f)).exp())
            .collect()
    }
}

impl Predictor for KrrModel {
    fn predict(&self, f: &[f64]) -> Result<Point2> {
        let p = self.support.first().map_or(0, Vec::len);
        check_len(p, f.len())?;
        let k = match &self.standardizer {
            Some(s) => self.kernel_row(&s.apply(f)),
            None => self.kernel_row(f),
        };
        let mut out = self.label_offset;
        for (ki, a) in k.iter().zip(&self.dual_coefficients) {
            out[0] += ki * a[0];
            out[1] += ki * a[1];
        }
        Ok(Point2::new(out[0], out[1]))
    }

    fn feature_len(&self) -> Option<usize> {
        self.support.first().map(Vec::len)
    }
}

fn check_hyper(lambda: f64, sigma: f64) -> Result<()> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("lambda must be non-negative, got {lambda}")));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
    }
    Ok(())
}

fn ridge_term(lambda: f64, n: usize, scaling: RidgeScaling) -> f64 {
    match scaling {
        RidgeScaling::PerSample => lambda * n as f64,
        RidgeScaling::Unscaled => lambda,
    }
}

/// Solves `(K + ridge·I) A = Y` with `K = exp(-σ·D)` from a precomputed L1
/// distance matrix.
fn solve_duals(dist: &DMatrix<f64>, yc: &DMatrix<f64>, sigma: f64, ridge: f64) -> Result<DMatrix<f64>> {
    let n = dist.nrows();
    let mut k = dist.map(|d| (-sigma * d).exp());
    for i in 0..n {
        k[(i, i)] += ridge;
    }
    let chol = k.cholesky().ok_or_else(|| {
        Error::Fit(format!(
            "kernel system is singular (sigma = {sigma}, ridge = {ridge}); duplicate inputs need lambda > 0"
        ))
    })?;
    let a = chol.solve(yc);
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Fit("kernel solve produced non-finite coefficients".into()));
    }
    Ok(a)
}

fn distance_matrix(a: &[Vec<f64>], b: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(a.len(), b.len(), |i, j| l1_distance(&a[i], &b[j]))
}

struct KrrProblem {
    support: Vec<Vec<f64>>,
    yc: DMatrix<f64>,
    offset: [f64; 2],
    dist: DMatrix<f64>,
    standardizer: Option<Standardizer>,
}

impl KrrProblem {
    fn new(x: &[&[f64]], y: &[[f64; 2]], options: KrrOptions) -> Result<Self> {
        let n = x.len();
        if n == 0 {
            return Err(Error::Fit("kernel ridge regression needs at least one record".into()));
        }
        check_len(n, y.len())?;
        let p = x[0].len();
        for row in x {
            check_len(p, row.len())?;
        }
        let standardizer = options.standardize.then(|| Standardizer::fit(x, p));
        let support: Vec<Vec<f64>> = x
            .iter()
            .map(|r| match &standardizer {
                Some(s) => s.apply(r),
                None => r.to_vec(),
            })
            .collect();
        let offset = [0, 1].map(|c| y.iter().map(|l| l[c]).sum::<f64>() / n as f64);
        let yc = DMatrix::from_fn(n, 2, |i, c| y[i][c] - offset[c]);
        let dist = distance_matrix(&support, &support);
        Ok(KrrProblem {
            support,
            yc,
            offset,
            dist,
            standardizer,
        })
    }

    fn fit(&self, lambda: f64, sigma: f64, options: KrrOptions) -> Result<KrrModel> {
        check_hyper(lambda, sigma)?;
        let ridge = ridge_term(lambda, self.support.len(), options.ridge_scaling);
        let a = solve_duals(&self.dist, &self.yc, sigma, ridge)?;
        Ok(KrrModel {
            support: self.support.clone(),
            dual_coefficients: (0..a.nrows()).map(|i| [a[(i, 0)], a[(i, 1)]]).collect(),
            sigma,
            lambda,
            label_offset: self.offset,
            options,
            standardizer: self.standardizer.clone(),
        })
    }
}

pub fn fit_krr(train: &Dataset, lambda: f64, sigma: f64, options: KrrOptions) -> Result<KrrModel> {
    let (x, y) = design(train);
    fit_krr_rows(&x, &y, lambda, sigma, options)
}

pub fn fit_krr_rows(x: &[&[f64]], y: &[[f64; 2]], lambda: f64, sigma: f64, options: KrrOptions) -> Result<KrrModel> {
    check_hyper(lambda, sigma)?;
    KrrProblem::new(x, y, options)?.fit(lambda, sigma, options)
}

/// First `ceil(n/2)` records for fitting, the rest for calibration, order
/// preserved.
pub fn split_halves(train: &Dataset) -> Result<(Dataset, Dataset)> {
    if train.len() < 2 {
        return Err(Error::Fit(format!("cannot split {} records into halves", train.len())));
    }
    let cut = train.len().div_ceil(2);
    Ok((
        train.with_records(train.records[..cut].to_vec()),
        train.with_records(train.records[cut..].to_vec()),
    ))
}

/// `count` values evenly spaced in log10 between `lo` and `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.log10(), hi.log10());
            (0..count)
                .map(|i| 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64))
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSearchSpec {
    pub lambda_grid: Vec<f64>,
    pub sigma_grid: Vec<f64>,
    pub options: KrrOptions,
}

impl Default for GridSearchSpec {
    fn default() -> Self {
        GridSearchSpec {
            lambda_grid: log_space(1e-4, 1e1, 16),
            sigma_grid: log_space(1e-6, 1e-1, 16),
            options: KrrOptions::default(),
        }
    }
}

impl GridSearchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.lambda_grid.is_empty() || self.sigma_grid.is_empty() {
            return Err(Error::Config("grid search needs non-empty lambda and sigma grids".into()));
        }
        for &l in &self.lambda_grid {
            if !(l >= 0.0 && l.is_finite()) {
                return Err(Error::Config(format!("lambda grid value {l} must be non-negative")));
            }
        }
        for &s in &self.sigma_grid {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::Config(format!("sigma grid value {s} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellScore {
    pub lambda: f64,
    pub sigma: f64,
    /// Median calibration error in mm, `None` when the fit failed.
    pub median_error: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct GridSearchOutcome {
    pub lambda: f64,
    pub sigma: f64,
    pub calibration_error: f64,
    pub model: KrrModel,
    pub cells: Vec<CellScore>,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Median-error argmin over all (λ, σ) cells, then refit on the full set.
/// Exact ties go to the larger λ, then the larger σ.
pub fn grid_search(train: &Dataset, spec: &GridSearchSpec) -> Result<GridSearchOutcome> {
    spec.validate()?;
    let (fit_half, cal_half) = split_halves(train)?;
    let (xf, yf) = design(&fit_half);
    let (xc, yc) = design(&cal_half);
    let problem = KrrProblem::new(&xf, &yf, spec.options)?;
    let cal_features: Vec<Vec<f64>> = xc
        .iter()
        .map(|r| match &problem.standardizer {
            Some(s) => s.apply(r),
            None => r.to_vec(),
        })
        .collect();
    let cross = distance_matrix(&cal_features, &problem.support);

    let cells: Vec<(f64, f64)> = spec
        .sigma_grid
        .iter()
        .flat_map(|&s| spec.lambda_grid.iter().map(move |&l| (l, s)))
        .collect();
    let scores: Vec<CellScore> = crate::par::map_ordered(&cells, |&(lambda, sigma)| {
        let median_error = problem.fit(lambda, sigma, spec.options).ok().map(|m| {
            let k = cross.map(|d| (-sigma * d).exp());
            let mut errs: Vec<f64> = (0..k.nrows())
                .map(|i| {
                    let mut p = m.label_offset;
                    for (j, a) in m.dual_coefficients.iter().enumerate() {
                        p[0] += k[(i, j)] * a[0];
                        p[1] += k[(i, j)] * a[1];
                    }
                    (p[0] - yc[i][0]).hypot(p[1] - yc[i][1])
                })
                .collect();
            median(&mut errs)
        });
        CellScore {
            lambda,
            sigma,
            median_error: median_error.filter(|e| e.is_finite()),
        }
    });

    let best = scores
        .iter()
        .filter_map(|c| c.median_error.map(|e| (e, c)))
        .min_by(|(ea, a), (eb, b)| {
            ea.total_cmp(eb)
                .then(b.lambda.total_cmp(&a.lambda))
                .then(b.sigma.total_cmp(&a.sigma))
        })
        .map(|(e, c)| (e, *c))
        .ok_or_else(|| Error::Search("every (lambda, sigma) cell failed to fit".into()))?;

    let (calibration_error, cell) = best;
    let model = fit_krr(train, cell.lambda, cell.sigma, spec.options)?;
    Ok(GridSearchOutcome {
        lambda: cell.lambda,
        sigma: cell.sigma,
        calibration_error,
        model,
        cells: scores,
    })
}

pub const MODEL_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum TrainedModel {
    Linear(LinearModel),
    Krr(KrrModel),
}

impl TrainedModel {
    pub fn name(&self) -> &'static str {
        match self {
            TrainedModel::Linear(_) => "linear",
            TrainedModel::Krr(_) => "krr",
        }
    }
}

impl Predictor for TrainedModel {
    fn predict(&self, f: &[f64]) -> Result<Point2> {
        match self {
            TrainedModel::Linear(m) => m.predict(f),
            TrainedModel::Krr(m) => m.predict(f),
        }
    }

    fn feature_len(&self) -> Option<usize> {
        match self {
            TrainedModel::Linear(m) => m.feature_len(),
            TrainedModel::Krr(m) => m.feature_len(),
        }
    }
}

/// Versioned on-disk model document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub schema_version: u32,
    pub model: TrainedModel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
    pub training_records: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub lambda: f64,
    pub sigma: f64,
    pub calibration_median_error: f64,
    pub lambda_grid: Vec<f64>,
    pub sigma_grid: Vec<f64>,
}

impl ModelDocument {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Domain(e.to_string()))
    }

    pub fn from_json(text: &str, path: &std::path::Path) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            message: e.to_string(),
        })?;
        match value.get("schema_version").and_then(|v| v.as_u64()) {
            Some(v) if v == u64::from(MODEL_SCHEMA_VERSION) => {}
            other => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: 1,
                    message: format!("unsupported model schema_version {other:?}"),
                })
            }
        }
        serde_json::from_value(value).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: e.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{FeatureSource, Provenance};
    use crate::geometry::{Indentation, IndentationRecord, SensorGeometry};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dataset(rows: &[(Vec<f64>, [f64; 2])]) -> Dataset {
        let mut g = SensorGeometry::with_corner_electrodes(100.0, 100.0, 6.0);
        let p = rows[0].0.len();
        let n = (2..40).find(|n| n * (n - 1) / 2 == p).expect("pair count");
        g.electrodes = (0..n).map(|i| Point2::new(i as f64, 0.0)).collect();
        let records = rows
            .iter()
            .map(|(f, l)| IndentationRecord::new(&g, Indentation::new(Point2::new(l[0], l[1]), 0.0), f.clone()).unwrap())
            .collect();
        Dataset::new(g, records, Provenance::bare(FeatureSource::Ideal)).unwrap()
    }

    #[test]
    fn kernel_examples() {
        let a = [1.0, 2.0, 3.0];
        assert_eq!(laplacian_kernel(&a, &a, 0.7).unwrap(), 1.0);
        let b = [1.0 + 2f64.ln() / 0.5, 2.0, 3.0];
        assert_relative_eq!(laplacian_kernel(&a, &b, 0.5).unwrap(), 0.5, max_relative = 1e-14);
        assert!(laplacian_kernel(&a, &[1e6, 0.0, 0.0], 1e-12).unwrap() > 0.999_998);
        assert!(laplacian_kernel(&a, &[1.0], 0.5).is_err());
        assert!(laplacian_kernel(&a, &a, 0.0).is_err());
    }

    #[test]
    fn linear_recovers_affine_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w = [[0.3, -1.2, 2.0, 0.5, 0.0, 1.1], [-0.7, 0.4, 0.1, 0.9, -2.0, 0.25]];
        let b = [4.0, -3.0];
        let rows: Vec<_> = (0..40)
            .map(|_| {
                let f: Vec<f64> = (0..6).map(|_| rng.random_range(-10.0..10.0)).collect();
                let l = [0, 1].map(|c| b[c] + w[c].iter().zip(&f).map(|(a, x)| a * x).sum::<f64>());
                (f, l)
            })
            .collect();
        let x: Vec<&[f64]> = rows.iter().map(|r| r.0.as_slice()).collect();
        let y: Vec<[f64; 2]> = rows.iter().map(|r| r.1).collect();
        let m = fit_linear_rows(&x, &y, 6).unwrap();
        for c in 0..2 {
            for j in 0..6 {
                assert!((m.weights[c][j] - w[c][j]).abs() <= 1e-8 * w[c][j].abs().max(1.0));
            }
            assert_relative_eq!(m.intercept[c], b[c], max_relative = 1e-8);
        }
    }

    #[test]
    fn linear_with_constant_features_predicts_mean() {
        let rows: Vec<_> = (0..10)
            .map(|i| (vec![5.0; 6], [i as f64, 2.0 * i as f64]))
            .collect();
        let m = fit_linear(&dataset(&rows)).unwrap();
        assert!(m.weights.iter().flatten().all(|&w| w == 0.0));
        assert_relative_eq!(m.intercept[0], 4.5);
        assert_relative_eq!(m.intercept[1], 9.0);
    }

    #[test]
    fn linear_needs_enough_records() {
        let rows: Vec<_> = (0..6).map(|i| (vec![i as f64; 6], [0.0, 0.0])).collect();
        assert!(matches!(fit_linear(&dataset(&rows)), Err(Error::Fit(_))));
    }

    #[test]
    fn zero_weight_linear_predicts_intercept() {
        let m = LinearModel {
            weights: [vec![0.0; 3], vec![0.0; 3]],
            intercept: [1.5, -2.0],
        };
        assert_eq!(m.predict(&[9.0, 8.0, 7.0]).unwrap(), Point2::new(1.5, -2.0));
        assert!(m.predict(&[1.0]).is_err());
    }

    #[test]
    fn krr_single_point_interpolates() {
        let rows = vec![(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0], [3.0, 7.0])];
        let m = fit_krr(&dataset(&rows), 0.0, 0.1, KrrOptions::default()).unwrap();
        let p = m.predict(&rows[0].0).unwrap();
        assert_relative_eq!(p.x, 3.0, epsilon = 1e-12);
        assert_relative_eq!(p.y, 7.0, epsilon = 1e-12);
    }

    #[test]
    fn krr_large_lambda_predicts_label_mean() {
        let rows: Vec<_> = (0..8)
            .map(|i| (vec![i as f64 * 10.0, 0.0, 1.0, 2.0, 3.0, 4.0], [i as f64, 1.0 + i as f64]))
            .collect();
        let m = fit_krr(&dataset(&rows), 1e9, 0.01, KrrOptions::default()).unwrap();
        let p = m.predict(&[35.0, 0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((p.x - 3.5).abs() < 1e-6 && (p.y - 4.5).abs() < 1e-6, "{p:?}");
    }

    #[test]
    fn krr_duplicates_at_zero_lambda_fail() {
        let rows = vec![(vec![1.0; 6], [0.0, 0.0]), (vec![1.0; 6], [1.0, 1.0])];
        assert!(matches!(fit_krr(&dataset(&rows), 0.0, 0.1, KrrOptions::default()), Err(Error::Fit(_))));
        assert!(fit_krr(&dataset(&rows), 0.1, 0.1, KrrOptions::default()).is_ok());
    }

    #[test]
    fn split_rule() {
        let rows: Vec<_> = (0..3).map(|i| (vec![i as f64; 6], [i as f64, 0.0])).collect();
        let (a, b) = split_halves(&dataset(&rows)).unwrap();
        assert_eq!((a.len(), b.len()), (2, 1));
        assert_eq!(a.records[1].location().x, 1.0);
        assert_eq!(b.records[0].location().x, 2.0);
        let one: Vec<_> = rows[..1].to_vec();
        assert!(split_halves(&dataset(&one)).is_err());
    }

    #[test]
    fn single_cell_grid_returns_that_cell() {
        let rows: Vec<_> = (0..10)
            .map(|i| (vec![i as f64, (i * i) as f64, 0.0, 1.0, 2.0, 3.0], [i as f64, 0.5 * i as f64]))
            .collect();
        let spec = GridSearchSpec {
            lambda_grid: vec![0.01],
            sigma_grid: vec![0.2],
            ..GridSearchSpec::default()
        };
        let out = grid_search(&dataset(&rows), &spec).unwrap();
        assert_eq!((out.lambda, out.sigma), (0.01, 0.2));
        assert_eq!(out.cells.len(), 1);
        assert_eq!(out.model.support.len(), 10);
    }

    #[test]
    fn grid_search_ties_prefer_smoother_cells() {
        // Constant labels: every cell scores exactly zero error.
        let rows: Vec<_> = (0..10)
            .map(|i| (vec![i as f64, 1.0, 2.0, 3.0, 4.0, 5.0], [2.0, 3.0]))
            .collect();
        let spec = GridSearchSpec {
            lambda_grid: vec![0.1, 1.0, 0.01],
            sigma_grid: vec![0.5, 0.05],
            ..GridSearchSpec::default()
        };
        let out = grid_search(&dataset(&rows), &spec).unwrap();
        assert_eq!((out.lambda, out.sigma), (1.0, 0.5));
    }

    #[test]
    fn empty_grids_rejected() {
        let rows: Vec<_> = (0..4).map(|i| (vec![i as f64; 6], [0.0, 0.0])).collect();
        let spec = GridSearchSpec {
            lambda_grid: vec![],
            ..GridSearchSpec::default()
        };
        assert!(grid_search(&dataset(&rows), &spec).is_err());
    }

    #[test]
    fn default_grids_are_log_spaced() {
        let s = GridSearchSpec::default();
        assert_eq!(s.lambda_grid.len(), 16);
        assert_relative_eq!(s.lambda_grid[0], 1e-4, max_relative = 1e-12);
        assert_relative_eq!(s.lambda_grid[15], 1e1, max_relative = 1e-12);
        assert_relative_eq!(s.sigma_grid[0], 1e-6, max_relative = 1e-12);
        assert_relative_eq!(s.sigma_grid[15], 1e-1, max_relative = 1e-12);
        assert_relative_eq!(s.sigma_grid[1] / s.sigma_grid[0], s.sigma_grid[2] / s.sigma_grid[1], max_relative = 1e-12);
    }

    #[test]
    fn standardized_model_round_trips_through_json() {
        let rows: Vec<_> = (0..12)
            .map(|i| (vec![i as f64, (i % 3) as f64, 7.0, 1.0, -2.0 * i as f64, 0.5], [i as f64, 1.0]))
            .collect();
        let opts = KrrOptions {
            standardize: true,
            ..KrrOptions::default()
        };
        let m = fit_krr(&dataset(&rows), 1e-3, 0.3, opts).unwrap();
        let doc = ModelDocument {
            schema_version: MODEL_SCHEMA_VERSION,
            model: TrainedModel::Krr(m.clone()),
            config_hash: None,
            training_records: 12,
            search: None,
        };
        let back = ModelDocument::from_json(&doc.to_json().unwrap(), std::path::Path::new("m.json")).unwrap();
        assert_eq!(back, doc);
        let q = [3.5, 1.0, 7.0, 1.0, -7.0, 0.5];
        assert_eq!(back.model.predict(&q).unwrap(), m.predict(&q).unwrap());
    }
}

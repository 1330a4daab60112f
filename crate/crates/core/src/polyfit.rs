//! Ordinary least squares polynomial regression with SPSS-style diagnostics.
//!
//! Fits are solved by Householder QR on a centred and scaled copy of the
//! predictor, then mapped back to the raw power basis `b0 + b1 x + ... + bd x^d`.
//! The raw Vandermonde matrix is never factorised directly; for `x` in `[0, 1]`
//! its condition number grows quickly with the degree.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{f_sig, student_t_two_sided_sig};

/// Relative size of a diagonal entry of `R` below which a column is treated
/// as linearly dependent.
const RANK_TOL: f64 = 1e-10;

/// Residual sum of squares below this fraction of `sum(y^2)` counts as an exact fit.
const EXACT_FIT_TOL: f64 = 1e-24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    pub x: f64,
    pub y: f64,
}

impl DataPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Polynomial in the raw power basis; `coefficients[j]` multiplies `x^j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyModel {
    pub degree: usize,
    pub coefficients: Vec<f64>,
}

impl PolyModel {
    pub fn new(coefficients: Vec<f64>) -> Self {
        assert!(
            !coefficients.is_empty(),
            "a polynomial needs at least one coefficient"
        );
        Self {
            degree: coefficients.len() - 1,
            coefficients,
        }
    }

    pub fn predict(&self, x: f64) -> f64 {
        predict(self, x)
    }
}

/// Horner evaluation of `model` at `x`.
pub fn predict(model: &PolyModel, x: f64) -> f64 {
    model
        .coefficients
        .iter()
        .rev()
        .fold(0.0, |acc, &b| acc * x + b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSummaryStats {
    pub r: f64,
    pub r_squared: f64,
    pub adjusted_r_squared: f64,
    pub std_error_of_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnovaTable {
    pub ss_regression: f64,
    pub ss_residual: f64,
    pub ss_total: f64,
    pub df_regression: usize,
    pub df_residual: usize,
    pub df_total: usize,
    pub ms_regression: f64,
    pub ms_residual: f64,
    /// `None` for an exact fit.
    pub f: Option<f64>,
    pub sig: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub term_name: String,
    pub power: usize,
    pub b: f64,
    pub std_error: f64,
    /// Absent for the intercept.
    pub beta: Option<f64>,
    /// Absent for an exact fit.
    pub t: Option<f64>,
    pub sig: Option<f64>,
}

/// Fitted model plus the Model Summary, ANOVA and Coefficients tables.
///
/// Coefficient rows run `x, x^2, ..., x^d` with the constant last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionReport {
    pub model: PolyModel,
    pub summary: ModelSummaryStats,
    pub anova: AnovaTable,
    pub coefficients: Vec<CoefficientRow>,
    pub m: usize,
    pub exact_fit: bool,
}

impl RegressionReport {
    /// Row of the coefficient on `x^power`.
    pub fn coefficient(&self, power: usize) -> Option<&CoefficientRow> {
        self.coefficients.iter().find(|row| row.power == power)
    }

    /// Row of the highest-order term.
    pub fn highest_term(&self) -> &CoefficientRow {
        self.coefficient(self.model.degree)
            .expect("every degree has a row")
    }
}

/// Name of the `x^power` term, e.g. `"p"`, `"p**2"`, `"(Constant)"`.
pub fn term_name(predictor: &str, power: usize) -> String {
    match power {
        0 => "(Constant)".to_string(),
        1 => predictor.to_string(),
        k => format!("{predictor}**{k}"),
    }
}

/// QR factorisation of a scaled polynomial design.
struct ScaledQr {
    center: f64,
    scale: f64,
    /// Upper triangle, `cols x cols`, row-major.
    r: Vec<f64>,
    /// Solution in the scaled basis.
    coef: Vec<f64>,
    cols: usize,
}

impl ScaledQr {
    fn new(points: &[DataPoint], degree: usize) -> Result<Self> {
        let m = points.len();
        let cols = degree + 1;
        let (lo, hi) = points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p.x), hi.max(p.x))
            });
        let center = 0.5 * (lo + hi);
        let scale = if hi > lo { 0.5 * (hi - lo) } else { 1.0 };

        // column-major m x cols design in z = (x - center) / scale
        let mut a = vec![0.0; m * cols];
        for (i, pt) in points.iter().enumerate() {
            let z = (pt.x - center) / scale;
            let mut zp = 1.0;
            for j in 0..cols {
                a[j * m + i] = zp;
                zp *= z;
            }
        }
        let mut rhs: Vec<f64> = points.iter().map(|p| p.y).collect();

        let mut diag_max: f64 = 0.0;
        for k in 0..cols {
            let col = &mut a[k * m..(k + 1) * m];
            let norm = col[k..].iter().map(|v| v * v).sum::<f64>().sqrt();
            let col_scale = col.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm <= RANK_TOL * col_scale.max(diag_max) || norm == 0.0 {
                return Err(Error::RankDeficient { rank: k, cols });
            }
            let alpha = if col[k] > 0.0 { -norm } else { norm };
            // v = x - alpha e_k, stored in place below the diagonal
            let mut v: Vec<f64> = col[k..].to_vec();
            v[0] -= alpha;
            let vnorm2: f64 = v.iter().map(|x| x * x).sum();
            col[k] = alpha;
            for val in col[k + 1..].iter_mut() {
                *val = 0.0;
            }
            diag_max = diag_max.max(norm);
            if vnorm2 == 0.0 {
                continue;
            }
            for j in k + 1..cols {
                let cj = &mut a[j * m..(j + 1) * m];
                let dot: f64 = v.iter().zip(&cj[k..]).map(|(a, b)| a * b).sum();
                let f = 2.0 * dot / vnorm2;
                for (c, vi) in cj[k..].iter_mut().zip(&v) {
                    *c -= f * vi;
                }
            }
            let dot: f64 = v.iter().zip(&rhs[k..]).map(|(a, b)| a * b).sum();
            let f = 2.0 * dot / vnorm2;
            for (c, vi) in rhs[k..].iter_mut().zip(&v) {
                *c -= f * vi;
            }
        }

        let mut r = vec![0.0; cols * cols];
        for i in 0..cols {
            for j in i..cols {
                r[i * cols + j] = a[j * m + i];
            }
        }
        let mut coef = vec![0.0; cols];
        for i in (0..cols).rev() {
            let s: f64 = (i + 1..cols).map(|j| r[i * cols + j] * coef[j]).sum();
            coef[i] = (rhs[i] - s) / r[i * cols + i];
        }
        Ok(Self {
            center,
            scale,
            r,
            coef,
            cols,
        })
    }

    /// `T` with `raw = T * scaled`; column `k` expands `((x - c)/s)^k`.
    fn basis_change(&self) -> Vec<f64> {
        let n = self.cols;
        let mut t = vec![0.0; n * n];
        for k in 0..n {
            let inv_s_k = self.scale.powi(-(k as i32));
            let mut binom = 1.0;
            for j in 0..=k {
                // C(k, j) x^j (-c)^(k-j)
                t[j * n + k] = binom * (-self.center).powi((k - j) as i32) * inv_s_k;
                binom = binom * (k - j) as f64 / (j + 1) as f64;
            }
        }
        t
    }

    fn raw_coefficients(&self) -> Vec<f64> {
        let n = self.cols;
        let t = self.basis_change();
        (0..n)
            .map(|j| (0..n).map(|k| t[j * n + k] * self.coef[k]).sum())
            .collect()
    }

    /// `(X^T X)^{-1}` in the raw basis.
    fn raw_unscaled_covariance(&self) -> Vec<f64> {
        let n = self.cols;
        // R^{-1}, upper triangular
        let mut rinv = vec![0.0; n * n];
        for j in 0..n {
            rinv[j * n + j] = 1.0 / self.r[j * n + j];
            for i in (0..j).rev() {
                let s: f64 = (i + 1..=j)
                    .map(|k| self.r[i * n + k] * rinv[k * n + j])
                    .sum();
                rinv[i * n + j] = -s / self.r[i * n + i];
            }
        }
        // M = T R^{-1}; covariance = M M^T
        let t = self.basis_change();
        let mut mm = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                mm[i * n + j] = (0..n).map(|k| t[i * n + k] * rinv[k * n + j]).sum();
            }
        }
        let mut cov = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                cov[i * n + j] = (0..n).map(|k| mm[i * n + k] * mm[j * n + k]).sum();
            }
        }
        cov
    }
}

fn check_points(points: &[DataPoint]) -> Result<()> {
    for (i, p) in points.iter().enumerate() {
        if !p.x.is_finite() || !p.y.is_finite() {
            return Err(Error::NonFinite(i));
        }
    }
    Ok(())
}

/// Least-squares polynomial of the given degree, allowing zero residual
/// degrees of freedom (`m = degree + 1` interpolates).
pub fn solve_least_squares(points: &[DataPoint], degree: usize) -> Result<PolyModel> {
    check_points(points)?;
    if points.len() < degree + 1 {
        return Err(Error::TooFewPoints {
            degree,
            needed: degree + 1,
            got: points.len(),
        });
    }
    let qr = ScaledQr::new(points, degree)?;
    Ok(PolyModel::new(qr.raw_coefficients()))
}

/// Least-squares fit that leaves at least one residual degree of freedom.
pub fn fit(points: &[DataPoint], degree: usize) -> Result<PolyModel> {
    check_points(points)?;
    if points.len() < degree + 2 {
        return Err(Error::TooFewPoints {
            degree,
            needed: degree + 2,
            got: points.len(),
        });
    }
    solve_least_squares(points, degree)
}

fn sample_sd(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / m;
    (values.map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt()
}

/// Model Summary, ANOVA and coefficient tables for `model` on `points`.
pub fn diagnostics(points: &[DataPoint], model: &PolyModel) -> Result<RegressionReport> {
    diagnostics_named(points, model, "x")
}

/// As [`diagnostics`], naming the predictor in coefficient rows.
pub fn diagnostics_named(
    points: &[DataPoint],
    model: &PolyModel,
    predictor: &str,
) -> Result<RegressionReport> {
    check_points(points)?;
    let d = model.degree;
    let m = points.len();
    if m < d + 2 {
        return Err(Error::TooFewPoints {
            degree: d,
            needed: d + 2,
            got: m,
        });
    }
    let qr = ScaledQr::new(points, d)?;

    let y_mean = points.iter().map(|p| p.y).sum::<f64>() / m as f64;
    let mut ss_total = 0.0;
    let mut ss_residual = 0.0;
    let mut ss_regression = 0.0;
    let mut y_sq = 0.0;
    for pt in points {
        let fitted = predict(model, pt.x);
        ss_total += (pt.y - y_mean).powi(2);
        ss_residual += (pt.y - fitted).powi(2);
        ss_regression += (fitted - y_mean).powi(2);
        y_sq += pt.y * pt.y;
    }
    let exact_fit = ss_residual <= EXACT_FIT_TOL * y_sq;
    if exact_fit {
        ss_residual = 0.0;
        ss_regression = ss_total;
    }

    let df_regression = d;
    let df_residual = m - d - 1;
    let df_total = m - 1;
    let ms_residual = ss_residual / df_residual as f64;
    let ms_regression = if d > 0 { ss_regression / d as f64 } else { 0.0 };
    let (f, f_sig_value) = if exact_fit || d == 0 {
        (None, None)
    } else {
        let f = ms_regression / ms_residual;
        (
            Some(f),
            Some(f_sig(f, df_regression as u64, df_residual as u64)),
        )
    };

    let r_squared = if ss_total > 0.0 {
        (1.0 - ss_residual / ss_total).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let adjusted_r_squared = 1.0 - (1.0 - r_squared) * df_total as f64 / df_residual as f64;
    let summary = ModelSummaryStats {
        r: r_squared.sqrt(),
        r_squared,
        adjusted_r_squared,
        std_error_of_estimate: ms_residual.sqrt(),
    };

    let cov = qr.raw_unscaled_covariance();
    let n = d + 1;
    let sd_y = sample_sd(points.iter().map(|p| p.y));
    let mut coefficients = Vec::with_capacity(n);
    for power in (1..=d).chain(std::iter::once(0)) {
        let b = model.coefficients[power];
        let std_error = (cov[power * n + power].max(0.0) * ms_residual).sqrt();
        let beta = (power > 0).then(|| {
            let sd_x = sample_sd(points.iter().map(|p| p.x.powi(power as i32)));
            b * sd_x / sd_y
        });
        let (t, sig) = if exact_fit {
            (None, None)
        } else {
            let t = b / std_error;
            (
                Some(t),
                Some(student_t_two_sided_sig(t, df_residual as u64)),
            )
        };
        coefficients.push(CoefficientRow {
            term_name: term_name(predictor, power),
            power,
            b,
            std_error,
            beta,
            t,
            sig,
        });
    }

    Ok(RegressionReport {
        model: model.clone(),
        summary,
        anova: AnovaTable {
            ss_regression,
            ss_residual,
            ss_total,
            df_regression,
            df_residual,
            df_total,
            ms_regression,
            ms_residual,
            f,
            sig: f_sig_value,
        },
        coefficients,
        m,
        exact_fit,
    })
}

/// [`fit`] followed by [`diagnostics_named`].
pub fn fit_report(
    points: &[DataPoint],
    degree: usize,
    predictor: &str,
) -> Result<RegressionReport> {
    let model = fit(points, degree)?;
    diagnostics_named(points, &model, predictor)
}

//! Log-linear least squares for exponential growth series.

use thiserror::Error;

use crate::error::MathError;
use crate::ingest::{check_same_range, IngestError, TimeSeries};
use crate::model::ExponentialModel;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("series `{name}` has {len} point(s); at least 2 are needed")]
    TooShort { name: String, len: usize },
    #[error("series `{0}` has no spread in time")]
    DegenerateTime(String),
    #[error(transparent)]
    Range(#[from] IngestError),
    #[error(transparent)]
    Model(#[from] MathError),
}

/// Regression statistics of one `ln(value) ~ t` fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitDiagnostics<T> {
    pub slope: T,
    pub intercept: T,
    /// Coefficient of determination in `[0, 1]`; 1 for a series with no variance.
    pub r_squared: T,
    /// Largest absolute residual on the log scale.
    pub residual_max_abs: T,
    pub n_points: usize,
}

/// Growth rate and log initial level recovered from one series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLinearFit<T> {
    pub rate: T,
    pub ln_initial: T,
    pub diagnostics: FitDiagnostics<T>,
}

/// Fitted system plus the per-series diagnostics, in labor, capital, output order.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemFit<T> {
    pub model: ExponentialModel<T>,
    pub labor: FitDiagnostics<T>,
    pub capital: FitDiagnostics<T>,
    pub output: FitDiagnostics<T>,
}

impl<T> SystemFit<T> {
    pub fn diagnostics(&self) -> [&FitDiagnostics<T>; 3] {
        [&self.labor, &self.capital, &self.output]
    }
}

/// Ordinary least squares of `ln(value)` on `t = year - base_year`, solved
/// in closed form from centered sums.
pub fn fit_log_linear<T: Scalar>(series: &TimeSeries<T>) -> Result<LogLinearFit<T>, FitError> {
    fit_log_linear_from(series, series.base_year())
}

/// As [`fit_log_linear`] with time measured from `origin_year`. Only the
/// intercept depends on the origin.
pub fn fit_log_linear_from<T: Scalar>(series: &TimeSeries<T>, origin_year: i32) -> Result<LogLinearFit<T>, FitError> {
    let n_points = series.len();
    if n_points < 2 {
        return Err(FitError::TooShort {
            name: series.name().to_string(),
            len: n_points,
        });
    }
    let n = T::from_usize(n_points).unwrap();
    let offset = i64::from(series.base_year()) - i64::from(origin_year);
    let ts: Vec<T> = (0..n_points)
        .map(|i| T::from_i64(offset + i as i64).unwrap())
        .collect();
    let ys: Vec<T> = series.values().iter().map(|v| v.ln()).collect();

    let t_mean = ts.iter().fold(T::zero(), |a, &t| a + t) / n;
    let y_mean = ys.iter().fold(T::zero(), |a, &y| a + y) / n;
    let (mut s_tt, mut s_ty, mut s_yy) = (T::zero(), T::zero(), T::zero());
    for (&t, &y) in ts.iter().zip(&ys) {
        let dt = t - t_mean;
        let dy = y - y_mean;
        s_tt = s_tt + dt * dt;
        s_ty = s_ty + dt * dy;
        s_yy = s_yy + dy * dy;
    }
    if s_tt <= T::zero() {
        return Err(FitError::DegenerateTime(series.name().to_string()));
    }
    let slope = s_ty / s_tt;
    let intercept = y_mean - slope * t_mean;

    let mut sse = T::zero();
    let mut residual_max_abs = T::zero();
    for (&t, &y) in ts.iter().zip(&ys) {
        let r = y - (intercept + slope * t);
        sse = sse + r * r;
        residual_max_abs = residual_max_abs.max(r.abs());
    }
    let r_squared = if s_yy == T::zero() {
        T::one()
    } else {
        (T::one() - sse / s_yy).max(T::zero()).min(T::one())
    };

    Ok(LogLinearFit {
        rate: slope,
        ln_initial: intercept,
        diagnostics: FitDiagnostics {
            slope,
            intercept,
            r_squared,
            residual_max_abs,
            n_points,
        },
    })
}

/// Fits all three series and packs them into a model sharing their base year.
pub fn fit_system<T: Scalar>(
    labor: &TimeSeries<T>,
    capital: &TimeSeries<T>,
    output: &TimeSeries<T>,
) -> Result<SystemFit<T>, FitError> {
    check_same_range(&[labor.clone(), capital.clone(), output.clone()])?;
    let l = fit_log_linear(labor)?;
    let k = fit_log_linear(capital)?;
    let y = fit_log_linear(output)?;
    let model = ExponentialModel::new(
        [l.rate, k.rate, y.rate],
        [l.ln_initial, k.ln_initial, y.ln_initial],
        labor.base_year(),
    )?;
    Ok(SystemFit {
        model,
        labor: l.diagnostics,
        capital: k.diagnostics,
        output: y.diagnostics,
    })
}

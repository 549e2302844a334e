use crate::error::{LabError, Result};

/// Values at or below this are treated as converged to zero and left out of fits.
pub const ZERO_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// RMS residual of the log-log fit.
    pub residual: f64,
    /// Rows dropped as converged to zero.
    pub dropped: Vec<(f64, f64)>,
}

/// Least-squares slope of `log(value)` against `log(ε)`.
pub fn fit_rate(rows: &[(f64, f64)]) -> Result<RateFit> {
    let (used, dropped): (Vec<_>, Vec<_>) = rows.iter().copied().partition(|&(e, v)| v > ZERO_FLOOR && e > 0.0);
    if used.len() < 3 {
        return Err(LabError::InsufficientData { usable: used.len() });
    }
    let n = used.len() as f64;
    let xs: Vec<f64> = used.iter().map(|r| r.0.ln()).collect();
    let ys: Vec<f64> = used.iter().map(|r| r.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let residual = (xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum::<f64>() / n).sqrt();
    Ok(RateFit { slope, intercept, residual, dropped })
}

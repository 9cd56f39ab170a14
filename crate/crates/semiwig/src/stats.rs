//! Least-squares fits used by the scaling and remainder diagnostics.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute residual of the fitted line.
    pub max_residual: f64,
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(Error::Statistics(
            "abscissa and ordinate counts differ".into(),
        ));
    }
    if xs.len() < 2 {
        return Err(Error::Statistics(format!(
            "a line fit needs at least 2 samples, got {}",
            xs.len()
        )));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::Statistics("non-finite sample in fit".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Statistics("degenerate abscissae".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).abs())
        .fold(0.0, f64::max);
    Ok(LinearFit {
        slope,
        intercept,
        max_residual,
    })
}

/// Fit of `ln y` against `ln x`; needs at least `min_samples` strictly positive pairs.
pub fn fit_loglog(xs: &[f64], ys: &[f64], min_samples: usize) -> Result<LinearFit> {
    if xs.len() < min_samples {
        return Err(Error::Statistics(format!(
            "need at least {min_samples} samples, got {}",
            xs.len()
        )));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0)) {
        return Err(Error::Statistics(
            "log-log fit needs positive samples".into(),
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    fit_line(&lx, &ly)
}

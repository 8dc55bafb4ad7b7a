//! Power-law fits in log-log coordinates.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Least-squares fit of `log y = log_level + exponent * log t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub exponent: f64,
    pub log_level: f64,
    /// RMS residual in log-log space.
    pub residual: f64,
    pub window: (f64, f64),
    pub count: usize,
}

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("need at least {needed} points in the fit window, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("non-positive value {value} at t = {t}")]
    NonPositive { t: f64, value: f64 },
    #[error("degenerate window: all abscissae equal")]
    Degenerate,
}

pub const MIN_FIT_POINTS: usize = 5;

/// Fits a power law to `(t, value)` pairs whose `t` lies in `window`
/// (inclusive; `None` keeps everything).
pub fn fit_power_law(
    series: &[(f64, f64)],
    window: Option<(f64, f64)>,
) -> Result<DecayFit, FitError> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .copied()
        .filter(|(t, _)| match window {
            Some((lo, hi)) => *t >= lo && *t <= hi,
            None => true,
        })
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(FitError::TooFewPoints {
            needed: MIN_FIT_POINTS,
            got: pts.len(),
        });
    }
    for &(t, v) in &pts {
        if !(t > 0.0) || !(v > 0.0) {
            return Err(FitError::NonPositive { t, value: v });
        }
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= f64::EPSILON * k * (1.0 + mx * mx) {
        return Err(FitError::Degenerate);
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let log_level = my - exponent * mx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (log_level + exponent * x);
            r * r
        })
        .sum();
    let tmin = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let tmax = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(DecayFit {
        exponent,
        log_level,
        residual: (rss / k).sqrt(),
        window: (tmin, tmax),
        count: pts.len(),
    })
}

/// `count` log-uniform points from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > 0.0 && count >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            if i == 0 {
                lo
            } else if i + 1 == count {
                hi
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

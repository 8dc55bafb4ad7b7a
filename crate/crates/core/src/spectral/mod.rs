//! Exact-in-Fourier propagation of `∂ₜₜu + P(D)u = 0` on a periodic box.

mod diag;
mod fft;
mod io;
mod propagate;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use diag::{
    clearance_ratio, select_grid, spectral_tail_fraction, CLEARANCE_THRESHOLD, TAIL_TOLERANCE,
};
pub use fft::NdFft;
pub use io::{read_field, write_field, write_norms_csv, FieldHeader, NormRow, NORMS_HEADER};
pub use propagate::{energy, propagate, q_multiplier, Propagator, WaveState};

pub type Complex = num_complex::Complex64;
pub type Field = Vec<Complex>;

/// Default cap on the total number of grid points.
pub const DEFAULT_MEMORY_CAP: usize = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid of {points} points exceeds the memory cap of {cap}")]
    MemoryCap { points: u128, cap: usize },
    #[error("field has {got} entries, grid expects {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("non-finite field entry at index {0}")]
    NonFinite(usize),
    #[error("P = {value} <= 0 at lattice frequency {xi:?}")]
    NonPositiveSymbol { xi: Vec<f64>, value: f64 },
    #[error("symbol dimension {symbol} does not match grid dimension {grid}")]
    DimensionMismatch { symbol: usize, grid: usize },
    #[error("field file: {0}")]
    Format(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for SpectralError {
    fn from(e: std::io::Error) -> Self {
        SpectralError::Io(e.to_string())
    }
}

/// Periodic box `[-L, L)^n` with `N` points per axis.
///
/// Points are stored row-major with the last axis fastest. Position index
/// `j` maps to `x_j = -L + j·2L/N`; the frequency index `j` maps to the
/// signed wavenumber `k = j` for `j < N/2` and `j - N` otherwise, with
/// `ξ = (π/L)·k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    pub points: usize,
    pub half_length: f64,
}

pub fn make_grid(dim: usize, points: usize, half_length: f64) -> Result<GridSpec, SpectralError> {
    make_grid_capped(dim, points, half_length, DEFAULT_MEMORY_CAP)
}

pub fn make_grid_capped(
    dim: usize,
    points: usize,
    half_length: f64,
    cap: usize,
) -> Result<GridSpec, SpectralError> {
    if dim == 0 {
        return Err(SpectralError::InvalidGrid("dimension must be at least 1".into()));
    }
    if points < 2 || !points.is_power_of_two() {
        return Err(SpectralError::InvalidGrid(format!(
            "points per axis {points} is not a power of two >= 2"
        )));
    }
    if !(half_length > 0.0) || !half_length.is_finite() {
        return Err(SpectralError::InvalidGrid(format!("half-length {half_length} must be positive")));
    }
    let total = (points as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(SpectralError::MemoryCap { points: total, cap });
    }
    Ok(GridSpec {
        dim,
        points,
        half_length,
    })
}

impl GridSpec {
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_length / self.points as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.dim as i32)
    }

    /// Spacing of the frequency lattice, `π/L`.
    pub fn dxi(&self) -> f64 {
        std::f64::consts::PI / self.half_length
    }

    /// Largest positive per-axis frequency, `π N / (2L)`.
    pub fn xi_max(&self) -> f64 {
        self.dxi() * (self.points / 2) as f64
    }

    pub fn coordinate(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.dx()
    }

    pub fn wavenumber(&self, j: usize) -> i64 {
        if j < self.points / 2 {
            j as i64
        } else {
            j as i64 - self.points as i64
        }
    }

    /// Per-axis indices of flat index `idx`.
    pub fn unflatten(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim];
        for a in (0..self.dim).rev() {
            out[a] = idx % self.points;
            idx /= self.points;
        }
        out
    }

    pub fn position(&self, idx: usize) -> Vec<f64> {
        self.unflatten(idx).into_iter().map(|j| self.coordinate(j)).collect()
    }

    pub fn frequency(&self, idx: usize) -> Vec<f64> {
        self.unflatten(idx)
            .into_iter()
            .map(|j| self.wavenumber(j) as f64 * self.dxi())
            .collect()
    }

    /// Samples `f` at every grid position.
    pub fn sample<F>(&self, f: F) -> Field
    where
        F: Fn(&[f64]) -> Complex + Sync,
    {
        use rayon::prelude::*;
        (0..self.len())
            .into_par_iter()
            .map(|i| f(&self.position(i)))
            .collect()
    }

    pub(crate) fn check_field(&self, f: &[Complex]) -> Result<(), SpectralError> {
        if f.len() != self.len() {
            return Err(SpectralError::ShapeMismatch {
                expected: self.len(),
                got: f.len(),
            });
        }
        if let Some(i) = f.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SpectralError::NonFinite(i));
        }
        Ok(())
    }
}

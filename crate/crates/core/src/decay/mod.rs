//! Decay-rate measurements and their comparison with the `L^p → L^q`
//! exponents of the sine and cosine parts of the solution.

mod exponent;
mod norms;
mod verify;

use thiserror::Error;

use crate::fit::FitError;
use crate::regions::RegionError;
use crate::spectral::SpectralError;

pub use crate::fit::{fit_power_law, DecayFit};
pub use exponent::{theoretical_exponent, Estimate, ExponentQuery, Part, TheoreticalExponent};
pub use norms::{lq_norm, weak_lq_norm};
pub use verify::{
    default_times, verify_lp_lq, DataFamily, DatumFit, SeriesRow, Verdict, VerifyConfig, VerifyReport,
    LARGE_WINDOW, SLOPE_TOLERANCE, SMALL_WINDOW, WINDOW_POINTS,
};

#[derive(Debug, Error)]
pub enum DecayError {
    #[error("invalid norm request: {0}")]
    InvalidNorm(String),
    #[error("{point} lies outside region {regions}")]
    Outside { point: String, regions: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Fit(#[from] FitError),
}

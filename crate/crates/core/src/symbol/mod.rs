//! Polynomial symbols `P(ξ)` and the structural hypotheses placed on them.

mod hypotheses;
mod literal;
mod poly;
mod radial;
mod sqrt;

use thiserror::Error;

pub use hypotheses::{
    check_h1, check_h2, determinant, hessian_det, HypothesisReport, SampledQuantity,
    SamplingConfig, Witness, ELLIPTICITY_FLOOR, NONDEGENERACY_FLOOR,
};
pub use literal::parse_symbol;
pub use poly::{MultiIndex, SymbolPoly};
pub use radial::{
    radial_inverse, radial_inverse_above, radial_threshold, sigma_derivative_decay, RadialInverse,
    SigmaDecay, NEWTON_MAX_ITER, NEWTON_TOL,
};
pub use sqrt::{
    hessian_growth_sqrt, probe_grid, sqrt_hessian, surface_type, surface_type_scan,
    SqrtHessianFit, SurfaceScan, SurfaceType, SQRT_R_MIN, VANISHING_TOL,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymbolError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("s = {s} is below the radial-inverse threshold a = {a}")]
    BelowThreshold { s: f64, a: f64 },
    #[error("radial inverse did not converge for s = {s} along omega = {omega:?}")]
    NoConvergence { s: f64, omega: Vec<f64> },
}

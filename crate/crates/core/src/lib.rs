//! Verification toolkit for higher-order wave-type equations
//! `∂ₜₜu + P(D)u = 0` with an elliptic polynomial symbol `P`.

pub mod decay;
pub mod exact;
pub mod fit;
pub mod kernel;
pub mod par;
pub mod regions;
pub mod spectral;
pub mod sphere;
pub mod symbol;

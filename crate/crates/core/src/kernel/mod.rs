//! Fundamental-solution kernels
//!
//! ```text
//! I1(t, x) = ∫ e^{i x·ξ ± i t √P(ξ)} dξ
//! I2(t, x) = ∫ e^{i x·ξ ± i t √P(ξ)} P(ξ)^{-1/2} dξ
//! ```
//!
//! evaluated as the `ε → 0` limit of the damped integrals
//! `J_ε = ∫ e^{-ε√P} e^{i(x·ξ ± t√P)} W dξ`, either by trapezoidal summation
//! on a lattice (any symbol) or by one-dimensional quadrature after exact
//! angular reduction (radial symbols, `n <= 6`).

mod bessel;
mod bounds;
mod lattice;
mod quad;
mod radial;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectral::Complex;
use crate::symbol::SymbolPoly;

pub use bessel::{bessel_j, sphere_average};
pub use bounds::{
    check_bound, envelope, envelope_exponents, mu, nu, scaling_check, BoundExponents,
    KernelBoundReport, Regime, ScalingReport, ScalingRow, DRIFT_LIMIT,
    scaling_exponent,
};
pub use lattice::{lattice_batch, LatticeInfo};
pub use quad::{extrapolate_to_zero, integrate};
pub use radial::{quartic_closed_form, radial_value, RadialSymbol};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("invalid quadrature config: {0}")]
    Config(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("P^(-1/2) is singular at xi = 0 (P(0) = 0); I2 is undefined on this path")]
    SingularWeight,
    #[error("lattice of {points} points exceeds the cap of {cap}")]
    LatticeCap { points: u128, cap: usize },
    #[error("P = {value} < 0 at xi = {xi:?}")]
    NegativeSymbol { xi: Vec<f64>, value: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    I1,
    I2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Kind::I1 => "I1",
            Kind::I2 => "I2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalPath {
    /// Radial quadrature when the symbol is radial, lattice otherwise.
    Auto,
    Lattice,
    Radial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    /// Damping values, strictly decreasing.
    pub eps: Vec<f64>,
    /// Polynomial order of the `ε → 0` extrapolation; uses the `order + 1`
    /// smallest damping values.
    pub order: usize,
    /// Rescale `eps` by `min(1, |t|, 1/s*)`, where `s*` is the value of
    /// `√P` at the stationary point of the homogeneous phase.
    pub scale_eps: bool,
    pub path: EvalPath,
    /// Lattice: periodic-image clearance added to `|x| + |t| v_max`.
    pub margin: f64,
    /// Lattice: truncate where `e^{-ε_min √P}` falls below this.
    pub tail: f64,
    /// Lattice: cap on the number of lattice points.
    pub lattice_cap: usize,
    /// Radial: relative quadrature tolerance per panel.
    pub quad_tol: f64,
    /// Samples whose error estimate exceeds `abs + rel·|value|` are flagged.
    pub flag_abs: f64,
    pub flag_rel: f64,
    /// Compare against the closed form when the symbol is `c|ξ|^4`.
    pub oracle: bool,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            eps: vec![0.2, 0.1, 0.05, 0.025],
            order: 3,
            scale_eps: true,
            path: EvalPath::Auto,
            margin: 10.0,
            tail: 1e-14,
            lattice_cap: 1 << 25,
            quad_tol: 1e-12,
            flag_abs: 1e-10,
            flag_rel: 0.25,
            oracle: true,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<(), KernelError> {
        if self.eps.is_empty() {
            return Err(KernelError::Config("eps list is empty".into()));
        }
        if self.eps.iter().any(|&e| !(e > 0.0) || !e.is_finite()) {
            return Err(KernelError::Config("eps values must be positive".into()));
        }
        if self.eps.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(KernelError::Config("eps list must be strictly decreasing".into()));
        }
        if self.order + 1 > self.eps.len() {
            return Err(KernelError::Config(format!(
                "extrapolation order {} needs {} eps values, got {}",
                self.order,
                self.order + 1,
                self.eps.len()
            )));
        }
        if !(self.margin > 0.0) || !(self.tail > 0.0 && self.tail < 1.0) || !(self.quad_tol > 0.0) {
            return Err(KernelError::Config("margin, tail and quad_tol must be positive".into()));
        }
        Ok(())
    }

    /// Damping schedule for time `t` and largest spatial norm `x_max`.
    pub fn schedule(&self, p: &SymbolPoly, t: f64, x_max: f64) -> Vec<f64> {
        if !self.scale_eps {
            return self.eps.clone();
        }
        let m1 = p.order() as f64 / 2.0;
        let mut tau = t.abs().min(1.0);
        if m1 > 1.0 && x_max > 0.0 {
            let s_star = (x_max / (m1 * t.abs())).powf(m1 / (m1 - 1.0));
            if s_star > 1.0 {
                tau = tau.min(1.0 / s_star);
            }
        }
        self.eps.iter().map(|e| e * tau).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSample {
    pub kind: Kind,
    pub sign: Sign,
    pub t: f64,
    pub x: Vec<f64>,
    pub value: Complex,
    /// `|finest-ε value - extrapolated| + discretisation delta`.
    pub error: f64,
    pub flagged: bool,
    pub path: EvalPath,
    pub eps: Vec<f64>,
    /// Distance to the closed form, when one exists.
    pub oracle_delta: Option<f64>,
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn resolve_path(p: &SymbolPoly, cfg: &QuadConfig) -> Result<(EvalPath, Option<RadialSymbol>), KernelError> {
    let radial = RadialSymbol::new(p);
    match cfg.path {
        EvalPath::Lattice => Ok((EvalPath::Lattice, None)),
        EvalPath::Radial => match radial {
            Some(r) => Ok((EvalPath::Radial, Some(r))),
            None => Err(KernelError::Precondition(
                "radial path requested for a non-radial symbol or n > 6".into(),
            )),
        },
        EvalPath::Auto => Ok(match radial {
            Some(r) => (EvalPath::Radial, Some(r)),
            None => (EvalPath::Lattice, None),
        }),
    }
}

/// Raw damped values `J_ε` for each damping value, plus a per-value
/// discretisation error. Layout: `[eps][x]`.
pub fn damped_values(
    p: &SymbolPoly,
    kind: Kind,
    sign: Sign,
    t: f64,
    xs: &[Vec<f64>],
    eps: &[f64],
    cfg: &QuadConfig,
) -> Result<(EvalPath, Vec<Vec<Complex>>, Vec<Vec<f64>>), KernelError> {
    if xs.iter().any(|x| x.len() != p.dim()) {
        return Err(KernelError::Precondition("x dimension does not match the symbol".into()));
    }
    let (path, radial) = resolve_path(p, cfg)?;
    match (path, radial) {
        (EvalPath::Radial, Some(r)) => {
            let mut vals = Vec::with_capacity(eps.len());
            let mut errs = Vec::with_capacity(eps.len());
            for &e in eps {
                let (v, er): (Vec<Complex>, Vec<f64>) = xs
                    .iter()
                    .map(|x| r.value(kind, sign, t, norm(x), e, cfg.quad_tol))
                    .collect::<Result<Vec<_>, _>>()?
                    .into_iter()
                    .unzip();
                vals.push(v);
                errs.push(er);
            }
            Ok((path, vals, errs))
        }
        _ => {
            let out = lattice_batch(p, kind, sign, t, xs, eps, cfg)?;
            let errs = out
                .fine
                .iter()
                .zip(&out.coarse)
                .map(|(f, c)| f.iter().zip(c).map(|(a, b)| (a - b).norm()).collect())
                .collect();
            Ok((EvalPath::Lattice, out.fine, errs))
        }
    }
}

/// Evaluates `kind` at time `t` for every point in `xs`, sharing the
/// discretisation across points.
pub fn eval_kernel_batch(
    p: &SymbolPoly,
    kind: Kind,
    sign: Sign,
    t: f64,
    xs: &[Vec<f64>],
    cfg: &QuadConfig,
) -> Result<Vec<KernelSample>, KernelError> {
    cfg.validate()?;
    if t == 0.0 || !t.is_finite() {
        return Err(KernelError::Precondition("t must be finite and nonzero".into()));
    }
    let x_max = xs.iter().map(|x| norm(x)).fold(0.0, f64::max);
    let schedule = cfg.schedule(p, t, x_max);
    let used = &schedule[schedule.len() - cfg.order - 1..];
    let (path, vals, errs) = damped_values(p, kind, sign, t, xs, used, cfg)?;
    let closed = if cfg.oracle && kind == Kind::I1 {
        RadialSymbol::new(p).and_then(|r| r.quartic_scale())
    } else {
        None
    };
    let finest = used.len() - 1;
    Ok(xs
        .iter()
        .enumerate()
        .map(|(j, x)| {
            let ys: Vec<Complex> = vals.iter().map(|v| v[j]).collect();
            let value = extrapolate_to_zero(used, &ys);
            let error = (ys[finest] - value).norm() + errs[finest][j];
            let flagged = !(error <= cfg.flag_abs + cfg.flag_rel * value.norm());
            let oracle_delta = closed.map(|c| (quartic_closed_form(c, p.dim(), sign, t, norm(x), 0.0) - value).norm());
            KernelSample {
                kind,
                sign,
                t,
                x: x.clone(),
                value,
                error,
                flagged,
                path,
                eps: used.to_vec(),
                oracle_delta,
            }
        })
        .collect())
}

pub fn eval_kernel(
    p: &SymbolPoly,
    kind: Kind,
    sign: Sign,
    t: f64,
    x: &[f64],
    cfg: &QuadConfig,
) -> Result<KernelSample, KernelError> {
    Ok(eval_kernel_batch(p, kind, sign, t, &[x.to_vec()], cfg)?.remove(0))
}

/// `J_ε` at one fixed damping value, on the path chosen by `cfg`.
pub fn eval_damped(
    p: &SymbolPoly,
    kind: Kind,
    sign: Sign,
    t: f64,
    xs: &[Vec<f64>],
    eps: f64,
    cfg: &QuadConfig,
) -> Result<Vec<(Complex, f64)>, KernelError> {
    if !(eps > 0.0) {
        return Err(KernelError::Config("eps must be positive".into()));
    }
    let (_, vals, errs) = damped_values(p, kind, sign, t, xs, &[eps], cfg)?;
    Ok(vals[0].iter().copied().zip(errs[0].iter().copied()).collect())
}

//! Geometry of the graph of `√P`: Hessian growth and hypersurface type.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hypotheses::determinant;
use super::poly::{MultiIndex, SymbolPoly};
use super::SymbolError;
use crate::fit::{fit_power_law, DecayFit};

/// Smallest radius accepted for Hessian growth fits.
pub const SQRT_R_MIN: f64 = 10.0;
/// Relative tolerance below which a derivative tensor counts as zero.
pub const VANISHING_TOL: f64 = 1e-9;

/// Hessian of `√P` at `xi` from the derivatives of `P`:
/// `H_ij = P_ij / (2√P) - P_i P_j / (4 P^{3/2})`. Row-major.
pub fn sqrt_hessian(grad: &[SymbolPoly], hess: &[SymbolPoly], p: &SymbolPoly, xi: &[f64]) -> Vec<f64> {
    let n = xi.len();
    let v = p.eval(xi);
    let root = v.sqrt();
    let g: Vec<f64> = grad.iter().map(|d| d.eval(xi)).collect();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = hess[i * n + j].eval(xi) / (2.0 * root) - g[i] * g[j] / (4.0 * v * root);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqrtHessianFit {
    pub direction: Vec<f64>,
    /// `n(m/2 - 2)`.
    pub expected_exponent: f64,
    /// `None` when the fit was rejected.
    pub fit: Option<DecayFit>,
    /// `|det|` at the largest radius divided by `R_max^{expected}`.
    pub level: f64,
    pub rejected: Option<String>,
}

/// Fits `log |det Hess √P(Rω)|` against `log R` along each direction.
pub fn hessian_growth_sqrt(
    p: &SymbolPoly,
    radii: &[f64],
    dirs: &[Vec<f64>],
) -> Result<Vec<SqrtHessianFit>, SymbolError> {
    let n = p.dim();
    if radii.is_empty() {
        return Err(SymbolError::InvalidInput("empty radius list".into()));
    }
    let r_lo = radii.iter().copied().fold(f64::INFINITY, f64::min);
    let r_hi = radii.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if r_lo < SQRT_R_MIN {
        return Err(SymbolError::InvalidInput(format!(
            "smallest radius {r_lo} is below {SQRT_R_MIN}"
        )));
    }
    if r_hi < 10.0 * r_lo * (1.0 - 1e-12) {
        return Err(SymbolError::InvalidInput(format!(
            "radii [{r_lo}, {r_hi}] span less than one decade"
        )));
    }
    if dirs.iter().any(|w| w.len() != n) {
        return Err(SymbolError::InvalidInput("direction dimension mismatch".into()));
    }
    let grad = p.gradient();
    let hess = p.hessian();
    let expected = n as f64 * (p.order() as f64 / 2.0 - 2.0);
    let fits = dirs
        .par_iter()
        .map(|w| {
            let dets: Vec<(f64, f64)> = radii
                .iter()
                .map(|&r| {
                    let xi: Vec<f64> = w.iter().map(|c| c * r).collect();
                    (r, determinant(n, &sqrt_hessian(&grad, &hess, p, &xi)))
                })
                .collect();
            let pos = dets.iter().any(|d| d.1 > 0.0);
            let neg = dets.iter().any(|d| d.1 < 0.0);
            let last = dets.iter().max_by(|a, b| a.0.total_cmp(&b.0)).unwrap();
            let level = last.1.abs() / last.0.powf(expected);
            if pos && neg {
                return SqrtHessianFit {
                    direction: w.clone(),
                    expected_exponent: expected,
                    fit: None,
                    level,
                    rejected: Some("determinant changes sign in the window".into()),
                };
            }
            let series: Vec<(f64, f64)> = dets.iter().map(|&(r, d)| (r, d.abs())).collect();
            match fit_power_law(&series, None) {
                Ok(fit) => SqrtHessianFit {
                    direction: w.clone(),
                    expected_exponent: expected,
                    fit: Some(fit),
                    level,
                    rejected: None,
                },
                Err(e) => SqrtHessianFit {
                    direction: w.clone(),
                    expected_exponent: expected,
                    fit: None,
                    level,
                    rejected: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(fits)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurfaceType {
    Order(u32),
    ExceedsMax(u32),
}

/// Hypersurface type of `z = √P(ξ)` at `xi0`: the smallest `k in [2, k_max]`
/// whose `k`-th derivative tensor does not vanish.
///
/// `√P` is expanded about `xi0` by homogeneous degree from `(√P)^2 = P`:
/// with `P(ξ0 + h) = Σ_j p_j(h)`, `f_0 = √p_0` and
/// `f_j = (p_j - Σ_{i=1}^{j-1} f_i f_{j-i}) / (2 f_0)`.
pub fn surface_type(p: &SymbolPoly, xi0: &[f64], k_max: u32) -> Result<SurfaceType, SymbolError> {
    if xi0.len() != p.dim() {
        return Err(SymbolError::InvalidInput("point dimension mismatch".into()));
    }
    if k_max < 2 {
        return Err(SymbolError::InvalidInput("k_max must be at least 2".into()));
    }
    let p0 = p.eval(xi0);
    if !(p0 > 0.0) {
        return Err(SymbolError::InvalidInput(format!("P(xi0) = {p0} is not positive")));
    }
    let t = p.shifted(xi0);
    let dim = p.dim();
    let f0 = t.coeff(&MultiIndex::zeros(dim)).sqrt();
    let tol = VANISHING_TOL * (1.0 + p0.abs());
    let mut f: Vec<SymbolPoly> = vec![SymbolPoly::constant(dim, f0)];
    for j in 1..=k_max as usize {
        let mut rhs = t.homogeneous_part(j as u32);
        for i in 1..j {
            rhs = &rhs - &(&f[i] * &f[j - i]);
        }
        let fj = rhs.scale(1.0 / (2.0 * f0));
        if j >= 2 {
            let max_entry = fj
                .terms()
                .map(|(a, c)| (a.factorial() * c).abs())
                .fold(0.0_f64, f64::max);
            if max_entry > tol {
                return Ok(SurfaceType::Order(j as u32));
            }
        }
        f.push(fj);
    }
    Ok(SurfaceType::ExceedsMax(k_max))
}

/// Cartesian grid with `per_axis` points per axis on `[-half_width, half_width]^dim`.
pub fn probe_grid(dim: usize, half_width: f64, per_axis: usize) -> Vec<Vec<f64>> {
    assert!(per_axis >= 2);
    let axis: Vec<f64> = (0..per_axis)
        .map(|i| -half_width + 2.0 * half_width * i as f64 / (per_axis - 1) as f64)
        .collect();
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|pt| {
                axis.iter().map(move |&a| {
                    let mut q = pt.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceScan {
    pub points: usize,
    /// Largest type found; `None` if some point exceeded `k_max`.
    pub max_type: Option<u32>,
    pub argmax: Vec<f64>,
    pub min_type: Option<u32>,
    pub exceeded: usize,
}

/// Runs [`surface_type`] over `points` and summarises the result.
pub fn surface_type_scan(
    p: &SymbolPoly,
    points: &[Vec<f64>],
    k_max: u32,
) -> Result<SurfaceScan, SymbolError> {
    let types: Vec<SurfaceType> = points
        .par_iter()
        .map(|x| surface_type(p, x, k_max))
        .collect::<Result<_, _>>()?;
    let mut max_type = 0;
    let mut min_type = u32::MAX;
    let mut argmax = Vec::new();
    let mut exceeded = 0;
    for (x, ty) in points.iter().zip(&types) {
        match *ty {
            SurfaceType::Order(k) => {
                if k > max_type {
                    max_type = k;
                    argmax = x.clone();
                }
                min_type = min_type.min(k);
            }
            SurfaceType::ExceedsMax(_) => exceeded += 1,
        }
    }
    Ok(SurfaceScan {
        points: points.len(),
        max_type: (exceeded == 0 && max_type > 0).then_some(max_type),
        argmax,
        min_type: (min_type != u32::MAX).then_some(min_type),
        exceeded,
    })
}

//! Radial inverse `ρ(s, ω)`: the large root of `P(ρω) = s`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hypotheses::SamplingConfig;
use super::poly::SymbolPoly;
use super::SymbolError;
use crate::fit::{fit_power_law, log_space, DecayFit};

pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 60;
const BISECT_MAX_ITER: usize = 400;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialInverse {
    pub omega: Vec<f64>,
    pub s: Vec<f64>,
    pub rho: Vec<f64>,
    /// `ρ - s^{1/m} P_m(ω)^{-1/m}`.
    pub sigma: Vec<f64>,
    /// `|P(ρω) - s| / (1 + s)` per node.
    pub residual: Vec<f64>,
    pub threshold: f64,
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

fn derivative_coeffs(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(j, &v)| j as f64 * v).collect()
}

/// Largest `ρ >= 0` with `∂_ρ P(ρω) <= 0`, or 0 if the ray is increasing.
fn last_nonincreasing(ray: &[f64]) -> f64 {
    let d = derivative_coeffs(ray);
    let lead = *d.last().unwrap();
    let bound = 1.0 + d[..d.len() - 1].iter().map(|v| (v / lead).abs()).fold(0.0, f64::max);
    let steps = 4096;
    let mut last = None;
    for k in 0..=steps {
        let r = bound * k as f64 / steps as f64;
        if horner(&d, r) <= 0.0 {
            last = Some(k);
        }
    }
    match last {
        None => 0.0,
        Some(k) if k == steps => bound,
        Some(k) => {
            let (mut lo, mut hi) = (bound * k as f64 / steps as f64, bound * (k + 1) as f64 / steps as f64);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if horner(&d, mid) <= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            hi
        }
    }
}

/// Per-direction threshold: the largest value of `P(ρω)` on the segment
/// where the ray is not yet strictly increasing.
fn ray_threshold(ray: &[f64]) -> f64 {
    let rho_star = last_nonincreasing(ray);
    let samples = 512;
    (0..=samples)
        .map(|k| horner(ray, rho_star * k as f64 / samples as f64))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Threshold `a`: twice the maximum over `dirs` of the per-direction value
/// above which `ρ ↦ P(ρω)` is strictly increasing.
pub fn radial_threshold(p: &SymbolPoly, dirs: &[Vec<f64>]) -> Result<f64, SymbolError> {
    validate(p)?;
    let vals: Vec<f64> = dirs
        .par_iter()
        .map(|w| {
            let ray = p.ray_coefficients(w);
            if *ray.last().unwrap() <= 0.0 {
                Err(SymbolError::InvalidInput(format!(
                    "P_m(omega) <= 0 along omega = {w:?}"
                )))
            } else {
                Ok(ray_threshold(&ray))
            }
        })
        .collect::<Result<_, _>>()?;
    Ok(2.0 * vals.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

fn validate(p: &SymbolPoly) -> Result<(), SymbolError> {
    if p.is_zero() || p.order() == 0 {
        return Err(SymbolError::InvalidInput("symbol must be non-constant".into()));
    }
    Ok(())
}

fn check_unit(p: &SymbolPoly, omega: &[f64]) -> Result<(), SymbolError> {
    if omega.len() != p.dim() {
        return Err(SymbolError::InvalidInput("direction dimension mismatch".into()));
    }
    let norm = omega.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(SymbolError::InvalidInput(format!("|omega| = {norm}, expected 1")));
    }
    Ok(())
}

/// Solves `P(ρω) = s` by Newton from `ρ_0 = (s / P_m(ω))^{1/m}`, falling
/// back to bisection on a bracket grown from `[ρ_0/4, 4ρ_0]`.
fn solve_ray(ray: &[f64], floor: f64, s: f64, omega: &[f64]) -> Result<f64, SymbolError> {
    let m = (ray.len() - 1) as f64;
    let lead = *ray.last().unwrap();
    let d = derivative_coeffs(ray);
    let tol = NEWTON_TOL * (1.0 + s);
    let rho0 = (s / lead).powf(1.0 / m);
    let (lo0, hi0) = (rho0 / 4.0, 4.0 * rho0);
    let mut rho = rho0;
    for _ in 0..NEWTON_MAX_ITER {
        let f = horner(ray, rho) - s;
        if f.abs() <= tol {
            return Ok(rho);
        }
        let fp = horner(&d, rho);
        let next = rho - f / fp;
        if !(fp > 0.0) || !(next >= lo0 && next <= hi0) || !next.is_finite() {
            break;
        }
        rho = next;
    }
    let (mut lo, mut hi) = (lo0.max(floor), hi0);
    while horner(ray, lo) > s && lo > floor {
        lo = (lo / 2.0).max(floor);
    }
    let mut grow = 0;
    while horner(ray, hi) < s && grow < 200 {
        hi *= 2.0;
        grow += 1;
    }
    let nc = || SymbolError::NoConvergence {
        s,
        omega: omega.to_vec(),
    };
    if horner(ray, lo) > s || horner(ray, hi) < s {
        return Err(nc());
    }
    for _ in 0..BISECT_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let f = horner(ray, mid) - s;
        if f.abs() <= tol {
            return Ok(mid);
        }
        if f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    Err(nc())
}

/// Radial inverse along `omega` with an explicitly supplied threshold.
pub fn radial_inverse_above(
    p: &SymbolPoly,
    omega: &[f64],
    s_grid: &[f64],
    threshold: f64,
) -> Result<RadialInverse, SymbolError> {
    validate(p)?;
    check_unit(p, omega)?;
    if let Some(&s) = s_grid.iter().find(|&&s| !(s >= threshold)) {
        return Err(SymbolError::BelowThreshold { s, a: threshold });
    }
    let ray = p.ray_coefficients(omega);
    let pm = *ray.last().unwrap();
    if pm <= 0.0 {
        return Err(SymbolError::InvalidInput(format!("P_m(omega) = {pm} <= 0")));
    }
    let m = p.order() as f64;
    let floor = last_nonincreasing(&ray);
    let mut rho = Vec::with_capacity(s_grid.len());
    let mut sigma = Vec::with_capacity(s_grid.len());
    let mut residual = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let r = solve_ray(&ray, floor, s, omega)?;
        rho.push(r);
        sigma.push(r - (s / pm).powf(1.0 / m));
        residual.push((horner(&ray, r) - s).abs() / (1.0 + s));
    }
    Ok(RadialInverse {
        omega: omega.to_vec(),
        s: s_grid.to_vec(),
        rho,
        sigma,
        residual,
        threshold,
    })
}

/// Radial inverse along `omega`, with the threshold computed over the
/// sampled sphere of `cfg` together with `omega` itself.
pub fn radial_inverse(
    p: &SymbolPoly,
    omega: &[f64],
    s_grid: &[f64],
    cfg: &SamplingConfig,
) -> Result<RadialInverse, SymbolError> {
    check_unit(p, omega)?;
    let mut dirs = cfg.sphere(p.dim());
    dirs.push(omega.to_vec());
    let a = radial_threshold(p, &dirs)?;
    radial_inverse_above(p, omega, s_grid, a)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaDecay {
    pub omega: Vec<f64>,
    /// `(s, |∂_s σ|)` by central differences.
    pub series: Vec<(f64, f64)>,
    pub fit: DecayFit,
    pub max_residual: f64,
}

/// Fits the decay of `|∂_s σ(s, ω)|` over `count` log-spaced `s` in
/// `[s_lo, s_hi]`, using central differences with step `1e-3 s`.
pub fn sigma_derivative_decay(
    p: &SymbolPoly,
    omega: &[f64],
    s_lo: f64,
    s_hi: f64,
    count: usize,
    threshold: f64,
) -> Result<SigmaDecay, SymbolError> {
    let centres = log_space(s_lo, s_hi, count);
    let mut grid = Vec::with_capacity(3 * count);
    for &s in &centres {
        let h = 1e-3 * s;
        grid.extend([s - h, s, s + h]);
    }
    let inv = radial_inverse_above(p, omega, &grid, threshold)?;
    let series: Vec<(f64, f64)> = centres
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            let h = 1e-3 * s;
            (s, ((inv.sigma[3 * k + 2] - inv.sigma[3 * k]) / (2.0 * h)).abs())
        })
        .collect();
    let fit = fit_power_law(&series, None)
        .map_err(|e| SymbolError::InvalidInput(format!("sigma-derivative fit: {e}")))?;
    let max_residual = inv.residual.iter().copied().fold(0.0, f64::max);
    Ok(SigmaDecay {
        omega: omega.to_vec(),
        series,
        fit,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::parse_symbol;
    use proptest::prelude::*;

    #[test]
    fn beam_symbol_closed_form() {
        let p = parse_symbol("1 + |x|^4", 2).unwrap();
        let a = radial_threshold(&p, &crate::sphere::directions(2, 64, 0)).unwrap();
        assert!((a - 2.0).abs() < 1e-12);
        let w = [0.6, 0.8];
        let s = log_space(2.0, 1e6, 25);
        let inv = radial_inverse(&p, &w, &s, &SamplingConfig::default()).unwrap();
        for (k, &sv) in s.iter().enumerate() {
            let exact = (sv - 1.0).powf(0.25);
            assert!((inv.rho[k] - exact).abs() < 1e-11 * exact);
            assert!((inv.sigma[k] - (exact - sv.powf(0.25))).abs() < 1e-10);
            assert!(inv.residual[k] <= 1e-10);
        }
    }

    #[test]
    fn homogeneous_symbol_has_zero_sigma() {
        let p = parse_symbol("|x|^4", 3).unwrap();
        let w = [0.0, 0.6, 0.8];
        let inv = radial_inverse_above(&p, &w, &[1.0, 16.0, 81.0, 1e4], 0.0).unwrap();
        for (r, s) in inv.rho.iter().zip(&inv.s) {
            assert!((r - s.powf(0.25)).abs() < 1e-12 * r);
        }
        assert!(inv.sigma.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn threshold_covers_nonmonotone_rays() {
        // ρ^4 - 4ρ^2 + 5 dips to 1 at ρ = √2 and returns to 5 at ρ = 2.
        let p = parse_symbol("5 - 4*|x|^2 + |x|^4", 2).unwrap();
        let a = radial_threshold(&p, &crate::sphere::axes(2)).unwrap();
        assert!((a - 10.0).abs() < 1e-9, "{a}");
        let err = radial_inverse_above(&p, &[1.0, 0.0], &[9.0], a).unwrap_err();
        assert!(matches!(err, SymbolError::BelowThreshold { .. }));
        let inv = radial_inverse_above(&p, &[1.0, 0.0], &[10.0, 50.0], a).unwrap();
        assert!(inv.rho.iter().all(|&r| r > 2f64.sqrt()));
    }

    #[test]
    fn rejects_non_unit_direction() {
        let p = parse_symbol("1 + |x|^4", 2).unwrap();
        assert!(radial_inverse_above(&p, &[1.0, 1.0], &[10.0], 2.0).is_err());
    }

    /// `σ ≈ -(ω1²/4) s^{-1/4}` so `∂_s σ ≈ (ω1²/16) s^{-5/4}`; the fitted
    /// slope must follow the closed-form inverse and respect the `-1` bound.
    #[test]
    fn sigma_derivative_tracks_closed_form() {
        let p = parse_symbol("1 + |x|^4 + x1^2", 2).unwrap();
        for w1 in [1.0f64, 0.6] {
            let w = [w1, (1.0 - w1 * w1).sqrt()];
            let c = w1 * w1;
            let exact_sigma_prime = |s: f64| {
                let disc = (c * c - 4.0 + 4.0 * s).sqrt();
                let rho2 = 0.5 * (-c + disc);
                let rho_prime = 1.0 / (2.0 * rho2.sqrt() * disc);
                rho_prime - 0.25 * s.powf(-0.75)
            };
            let oracle: Vec<(f64, f64)> = log_space(1e2, 1e4, 21)
                .into_iter()
                .map(|s| (s, exact_sigma_prime(s).abs()))
                .collect();
            let expect = fit_power_law(&oracle, None).unwrap().exponent;
            let got = sigma_derivative_decay(&p, &w, 1e2, 1e4, 21, 4.0).unwrap();
            assert!((got.fit.exponent - expect).abs() < 1e-3, "{} vs {expect}", got.fit.exponent);
            assert!(got.fit.exponent <= -1.0 + 0.15);
            assert!(got.max_residual <= 1e-10);
        }
    }

    proptest! {
        #[test]
        fn residuals_small_for_elliptic_symbols(
            c2 in -3.0..3.0f64,
            c1 in -1.0..1.0f64,
            c0 in 0.5..4.0f64,
            th in 0.0..std::f64::consts::TAU,
            s in 1.0..1e8f64,
        ) {
            let p = &(&parse_symbol("|x|^4 + 0.3*x1^3*x2", 2).unwrap()
                + &parse_symbol("x1^2", 2).unwrap().scale(c2))
                + &(&parse_symbol("x2", 2).unwrap().scale(c1)
                + &SymbolPoly::constant(2, c0));
            let w = [th.cos(), th.sin()];
            let a = radial_threshold(&p, &crate::sphere::directions(2, 256, 0)).unwrap().max(0.0);
            let s = a + s;
            let inv = radial_inverse_above(&p, &w, &[s], a).unwrap();
            prop_assert!(inv.residual[0] <= 1e-10);
            prop_assert!(inv.rho[0] > 0.0);
        }
    }
}

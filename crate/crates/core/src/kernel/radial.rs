//! Angular reduction for radial symbols `P(ξ) = Σ_k c_k |ξ|^{2k}`.

use std::f64::consts::TAU;

use super::bessel::sphere_average;
use super::quad::integrate;
use super::{KernelError, Kind, Sign};
use crate::spectral::Complex;
use crate::symbol::SymbolPoly;

/// Damping exponent at which the radial integral is truncated.
const RADIAL_CUTOFF: f64 = 50.0;

/// Relative roundoff floor per radian of phase.
const PHASE_ROUNDOFF: f64 = 64.0 * f64::EPSILON;

#[derive(Clone, Debug, PartialEq)]
pub struct RadialSymbol {
    pub dim: usize,
    /// `c_k` in `P = Σ c_k r^{2k}`.
    pub profile: Vec<f64>,
}

impl RadialSymbol {
    /// `None` unless `p` is radial and `1 <= n <= 6`.
    pub fn new(p: &SymbolPoly) -> Option<Self> {
        if !(1..=6).contains(&p.dim()) {
            return None;
        }
        p.radial_profile().map(|profile| RadialSymbol {
            dim: p.dim(),
            profile,
        })
    }

    pub fn order(&self) -> usize {
        2 * (self.profile.len() - 1)
    }

    pub fn eval(&self, r: f64) -> f64 {
        let r2 = r * r;
        self.profile.iter().rev().fold(0.0, |acc, &c| acc * r2 + c)
    }

    /// `dP/dr`.
    fn deriv(&self, r: f64) -> f64 {
        let r2 = r * r;
        let mut acc = 0.0;
        for (k, &c) in self.profile.iter().enumerate().skip(1).rev() {
            acc = acc * r2 + 2.0 * k as f64 * c;
        }
        acc * r
    }

    fn sqrt_rate(&self, r: f64) -> f64 {
        let v = self.eval(r);
        if v > 0.0 {
            (self.deriv(r) / (2.0 * v.sqrt())).abs()
        } else {
            0.0
        }
    }

    /// `Some(√c)` when `P = c|ξ|^4` with `c > 0`.
    pub fn quartic_scale(&self) -> Option<f64> {
        match self.profile.as_slice() {
            [a, b, c] if *a == 0.0 && *b == 0.0 && *c > 0.0 => Some(c.sqrt()),
            _ => None,
        }
    }

    fn cutoff_radius(&self, level: f64) -> f64 {
        let target = level * level;
        let mut hi = 1.0;
        while self.eval(hi) < target {
            hi *= 2.0;
            if hi > 1e12 {
                break;
            }
        }
        let mut lo = 0.0;
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    /// Damped kernel `J_ε(t, x)` with `|x| = x_norm`. Returns the value and
    /// the accumulated quadrature error estimate.
    pub fn value(
        &self,
        kind: Kind,
        sign: Sign,
        t: f64,
        x_norm: f64,
        eps: f64,
        tol: f64,
    ) -> Result<(Complex, f64), KernelError> {
        let p0 = self.profile[0];
        if p0 < 0.0 {
            return Err(KernelError::NegativeSymbol {
                xi: vec![0.0; self.dim],
                value: p0,
            });
        }
        if kind == Kind::I2 && p0 == 0.0 && self.dim <= self.order() / 2 {
            return Err(KernelError::SingularWeight);
        }
        if *self.profile.last().unwrap() <= 0.0 {
            return Err(KernelError::Precondition("leading radial coefficient must be positive".into()));
        }
        let n = self.dim;
        let phase = Complex::new(-eps, sign.factor() * t);
        let f = |r: f64| {
            let v = self.eval(r).max(0.0);
            let s = v.sqrt();
            let w = match kind {
                Kind::I1 => 1.0,
                Kind::I2 => 1.0 / s,
            };
            (phase * s).exp() * (w * sphere_average(n, r * x_norm) * r.powi(n as i32 - 1))
        };
        let r_max = self.cutoff_radius(RADIAL_CUTOFF / eps);
        let rate = |r: f64| (t.abs() + eps) * self.sqrt_rate(r) + x_norm + 1e-3;
        let mut r = 0.0;
        let mut total = Complex::default();
        let mut err = 0.0;
        while r < r_max {
            let mut w = TAU / rate(r);
            w = TAU / rate(r).max(rate(r + w));
            w = w.min(r_max / 16.0).min(r_max - r);
            // exp(i·phase) carries an absolute error of ~phase·ULP.
            let phase_max = t.abs() * self.eval(r + w).max(0.0).sqrt() + x_norm * (r + w);
            let rel = tol.max(PHASE_ROUNDOFF * phase_max);
            let (v, e) = integrate(&f, r, r + w, rel, 1e-300);
            total += v;
            err += e;
            r += w;
        }
        Ok((total, err))
    }
}

/// Radial-path damped kernel for a radial symbol.
pub fn radial_value(
    p: &SymbolPoly,
    kind: Kind,
    sign: Sign,
    t: f64,
    x_norm: f64,
    eps: f64,
    tol: f64,
) -> Result<(Complex, f64), KernelError> {
    RadialSymbol::new(p)
        .ok_or_else(|| KernelError::Precondition("symbol is not radial or n > 6".into()))?
        .value(kind, sign, t, x_norm, eps, tol)
}

/// `∫_{R^n} e^{(-ε ± it) c |ξ|^2 + i x·ξ} dξ = (π/z)^{n/2} e^{-|x|^2/(4z)}`
/// with `z = c(ε ∓ it)`: the damped `I1` of `P = c^2 |ξ|^4`.
pub fn quartic_closed_form(c: f64, n: usize, sign: Sign, t: f64, x_norm: f64, eps: f64) -> Complex {
    let z = Complex::new(c * eps, -sign.factor() * c * t);
    let base = (Complex::new(std::f64::consts::PI, 0.0) / z).sqrt().powi(n as i32);
    base * (-(x_norm * x_norm) / (4.0 * z)).exp()
}

//! Trapezoidal summation of the damped kernels on a frequency lattice.
//!
//! The lattice step `h` fixes the period `2π/h` of the aliased kernel; it is
//! chosen so that half a period still exceeds `|x| + |t| v_max + margin`,
//! where `v_max` bounds `|∇√P|` on the truncation box. The even-index
//! sub-lattice (step `2h`) is then also alias-free, and its deviation is
//! reported as the discretisation error.

use rayon::prelude::*;

use super::{KernelError, Kind, QuadConfig, Sign};
use crate::spectral::Complex;
use crate::sphere;
use crate::symbol::SymbolPoly;

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeInfo {
    pub step: f64,
    pub half_width: f64,
    pub per_axis: usize,
    pub v_max: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeOut {
    /// `[eps][x]` sums with step `h`.
    pub fine: Vec<Vec<Complex>>,
    /// Same on the even sub-lattice (step `2h`).
    pub coarse: Vec<Vec<Complex>>,
    pub info: LatticeInfo,
}

fn probe_dirs(dim: usize) -> Vec<Vec<f64>> {
    let mut d = sphere::axes(dim);
    d.extend(sphere::directions(dim, 256, sphere::DEFAULT_SEED));
    d
}

/// Radius along `omega` beyond which `P(ρω) >= level^2`.
fn ray_radius(p: &SymbolPoly, omega: &[f64], level: f64) -> f64 {
    let ray = p.ray_coefficients(omega);
    let eval = |r: f64| ray.iter().rev().fold(0.0, |a, &c| a * r + c);
    let target = level * level;
    let mut hi = 1.0;
    while eval(hi) < target && hi < 1e12 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if eval(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn sqrt_gradient_norm(grad: &[SymbolPoly], p: &SymbolPoly, xi: &[f64]) -> f64 {
    let v = p.eval(xi);
    if v <= 0.0 {
        return 0.0;
    }
    let g2: f64 = grad.iter().map(|d| d.eval(xi).powi(2)).sum();
    g2.sqrt() / (2.0 * v.sqrt())
}

/// Damped sums for every `(eps, x)` pair on one shared lattice.
pub fn lattice_batch(
    p: &SymbolPoly,
    kind: Kind,
    sign: Sign,
    t: f64,
    xs: &[Vec<f64>],
    eps: &[f64],
    cfg: &QuadConfig,
) -> Result<LatticeOut, KernelError> {
    let n = p.dim();
    let eps_min = eps.iter().copied().fold(f64::INFINITY, f64::min);
    if !(eps_min > 0.0) {
        return Err(KernelError::Config("eps values must be positive".into()));
    }
    let p0 = p.eval(&vec![0.0; n]);
    if kind == Kind::I2 && p0 <= 0.0 {
        return Err(KernelError::SingularWeight);
    }
    let dirs = probe_dirs(n);
    let level = -cfg.tail.ln() / eps_min;
    let half_width = dirs.iter().map(|w| ray_radius(p, w, level)).fold(0.0, f64::max);
    let grad = p.gradient();
    let corner = half_width * (n as f64).sqrt();
    let v_max = dirs
        .iter()
        .map(|w| {
            let xi: Vec<f64> = w.iter().map(|c| c * corner).collect();
            sqrt_gradient_norm(&grad, p, &xi)
        })
        .fold(0.0, f64::max);
    let x_max = xs
        .iter()
        .map(|x| x.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let step = std::f64::consts::PI / (x_max + t.abs() * v_max + cfg.margin);
    let k_max = (half_width / step).ceil() as i64;
    let per_axis = (2 * k_max + 1) as usize;
    let total = (per_axis as u128).pow(n as u32);
    if total > cfg.lattice_cap as u128 {
        return Err(KernelError::LatticeCap {
            points: total,
            cap: cfg.lattice_cap,
        });
    }

    // phase[x][axis][k + k_max] = e^{i x_a h k}
    let phase: Vec<Vec<Vec<Complex>>> = xs
        .iter()
        .map(|x| {
            x.iter()
                .map(|&xa| {
                    (-k_max..=k_max)
                        .map(|k| Complex::from_polar(1.0, xa * step * k as f64))
                        .collect()
                })
                .collect()
        })
        .collect();
    let ne = eps.len();
    let nx = xs.len();
    let rot = Complex::new(0.0, sign.factor() * t);
    let rows = per_axis;
    let inner = per_axis.pow(n as u32 - 1);

    let partial: Vec<Result<Vec<Complex>, KernelError>> = (0..rows)
        .into_par_iter()
        .map(|row| {
            let mut acc = vec![Complex::default(); 2 * ne * nx];
            let mut idx = vec![0usize; n];
            idx[0] = row;
            let mut xi = vec![0.0; n];
            let mut base = vec![Complex::default(); ne];
            for flat in 0..inner {
                let mut rem = flat;
                for a in (1..n).rev() {
                    idx[a] = rem % per_axis;
                    rem /= per_axis;
                }
                for a in 0..n {
                    xi[a] = step * (idx[a] as i64 - k_max) as f64;
                }
                let v = p.eval(&xi);
                if v < 0.0 {
                    return Err(KernelError::NegativeSymbol { xi: xi.clone(), value: v });
                }
                let s = v.sqrt();
                let w = match kind {
                    Kind::I1 => 1.0,
                    Kind::I2 => 1.0 / s,
                };
                let osc = (rot * s).exp() * w;
                for (e, b) in eps.iter().zip(base.iter_mut()) {
                    *b = osc * (-e * s).exp();
                }
                let even = idx.iter().all(|&j| (j as i64 - k_max) % 2 == 0);
                for (xj, ph) in phase.iter().enumerate() {
                    let mut f = ph[0][idx[0]];
                    for a in 1..n {
                        f *= ph[a][idx[a]];
                    }
                    for e in 0..ne {
                        let term = base[e] * f;
                        acc[e * nx + xj] += term;
                        if even {
                            acc[ne * nx + e * nx + xj] += term;
                        }
                    }
                }
            }
            Ok(acc)
        })
        .collect();
    let mut sums = vec![Complex::default(); 2 * ne * nx];
    for part in partial {
        for (s, v) in sums.iter_mut().zip(part?) {
            *s += v;
        }
    }
    let wf = step.powi(n as i32);
    let wc = (2.0 * step).powi(n as i32);
    let fine = (0..ne).map(|e| (0..nx).map(|j| sums[e * nx + j] * wf).collect()).collect();
    let coarse = (0..ne)
        .map(|e| (0..nx).map(|j| sums[ne * nx + e * nx + j] * wc).collect())
        .collect();
    Ok(LatticeOut {
        fine,
        coarse,
        info: LatticeInfo {
            step,
            half_width,
            per_axis,
            v_max,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{quartic_closed_form, radial_value};
    use crate::symbol::parse_symbol;

    #[test]
    fn quartic_lattice_matches_closed_form() {
        let p = parse_symbol("|x|^4", 2).unwrap();
        let xs = vec![vec![0.0, 0.0], vec![1.0, -0.5]];
        let out = lattice_batch(&p, Kind::I1, Sign::Plus, 1.0, &xs, &[0.2], &QuadConfig::default()).unwrap();
        for (j, x) in xs.iter().enumerate() {
            let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
            let exact = quartic_closed_form(1.0, 2, Sign::Plus, 1.0, r, 0.2);
            assert!((out.fine[0][j] - exact).norm() < 1e-10 * exact.norm());
            assert!((out.coarse[0][j] - exact).norm() < 1e-8 * exact.norm());
        }
    }

    #[test]
    fn three_dimensional_lattice_matches_radial_path() {
        let p = parse_symbol("1 + |x|^4", 3).unwrap();
        let xs = vec![vec![0.5, 0.0, 0.0]];
        let out = lattice_batch(&p, Kind::I2, Sign::Minus, 0.5, &xs, &[0.4], &QuadConfig::default()).unwrap();
        let (oracle, _) = radial_value(&p, Kind::I2, Sign::Minus, 0.5, 0.5, 0.4, 1e-13).unwrap();
        assert!((out.fine[0][0] - oracle).norm() < 1e-8 * oracle.norm());
    }

    #[test]
    fn parity_in_x() {
        let p = parse_symbol("1 + |x|^4 + 0.5*x1^2", 2).unwrap();
        let xs = vec![vec![0.7, 0.2], vec![-0.7, -0.2]];
        let out = lattice_batch(&p, Kind::I1, Sign::Plus, 1.0, &xs, &[0.2], &QuadConfig::default()).unwrap();
        assert!((out.fine[0][0] - out.fine[0][1]).norm() < 1e-12 * out.fine[0][0].norm());
    }

    #[test]
    fn cap_and_weight_guards() {
        let p = parse_symbol("|x|^4", 2).unwrap();
        let cfg = QuadConfig::default();
        assert_eq!(
            lattice_batch(&p, Kind::I2, Sign::Plus, 1.0, &[vec![0.0, 0.0]], &[0.2], &cfg),
            Err(KernelError::SingularWeight)
        );
        let tight = QuadConfig {
            lattice_cap: 100,
            ..QuadConfig::default()
        };
        assert!(matches!(
            lattice_batch(&p, Kind::I1, Sign::Plus, 1.0, &[vec![0.0, 0.0]], &[0.2], &tight),
            Err(KernelError::LatticeCap { .. })
        ));
    }
}

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::poly::SymbolPoly;
use super::SymbolError;
use crate::sphere;

/// Relative floor for `min |det Hess P_m|` against the sampled maximum.
pub const NONDEGENERACY_FLOOR: f64 = 1e-8;
/// Relative floor for `min P_m(ω)` against the sampled maximum.
pub const ELLIPTICITY_FLOOR: f64 = 1e-10;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SamplingConfig {
    /// Sphere probe count; `None` uses the per-dimension default.
    pub directions: Option<usize>,
    pub seed: u64,
    /// Radial probes per direction for the ball positivity check.
    pub radial_probes: usize,
    /// Cap on the directions used for ball probing.
    pub ball_directions: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            directions: None,
            seed: sphere::DEFAULT_SEED,
            radial_probes: 64,
            ball_directions: 256,
        }
    }
}

impl SamplingConfig {
    pub fn sphere(&self, dim: usize) -> Vec<Vec<f64>> {
        let count = self.directions.unwrap_or_else(|| sphere::default_count(dim));
        sphere::directions(dim, count, self.seed)
    }

    fn describe(&self, dim: usize, what: &str) -> String {
        let count = self.directions.unwrap_or_else(|| sphere::default_count(dim));
        let scheme = match dim {
            2 => "uniform angles",
            3 => "Fibonacci lattice",
            _ => "seeded Gaussian directions",
        };
        format!("{count} sphere directions ({scheme}, seed {}); {what}", self.seed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub quantity: String,
    /// Probe point; empty for structural (non-pointwise) violations.
    pub point: Vec<f64>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledQuantity {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub argmin: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub hypothesis: String,
    pub passed: bool,
    /// Sampled minimum of the decisive quantity: `min P` on the probe ball for
    /// H1, `min |det Hess P_m|` on the sphere for H2.
    pub sampled_min: f64,
    pub quantities: Vec<SampledQuantity>,
    pub witnesses: Vec<Witness>,
    pub flags: Vec<String>,
    pub sampling: String,
}

fn validate(p: &SymbolPoly) -> Result<(), SymbolError> {
    if p.dim() < 1 {
        return Err(SymbolError::InvalidInput("dimension must be at least 1".into()));
    }
    if p.is_zero() {
        return Err(SymbolError::InvalidInput("zero polynomial".into()));
    }
    Ok(())
}

fn min_max_arg(values: &[f64], points: &[Vec<f64>]) -> (f64, f64, usize) {
    let mut lo = (f64::INFINITY, 0);
    let mut hi = f64::NEG_INFINITY;
    for (i, &v) in values.iter().enumerate() {
        if v < lo.0 {
            lo = (v, i);
        }
        hi = hi.max(v);
    }
    debug_assert!(lo.1 < points.len());
    (lo.0, hi, lo.1)
}

/// Checks structure (even order `m >= 4`, `n >= 2`), ellipticity of `P_m` on
/// sampled sphere directions, and positivity of `P` on a probe ball.
///
/// The ball radius is `max(1, Σ_{|α|<m} |c_α| / min_ω P_m(ω))`, beyond which
/// `P_m` dominates the lower-order terms, so a positive sampled minimum on the
/// ball covers all of `R^n` up to sampling density.
pub fn check_h1(p: &SymbolPoly, cfg: &SamplingConfig) -> Result<HypothesisReport, SymbolError> {
    validate(p)?;
    let n = p.dim();
    let m = p.order();
    let mut witnesses = Vec::new();
    let mut flags = Vec::new();
    let mut structural_ok = true;
    if m % 2 != 0 || m < 4 {
        structural_ok = false;
        flags.push(format!("order m = {m} is not even and >= 4"));
        witnesses.push(Witness {
            quantity: "order m".into(),
            point: Vec::new(),
            value: f64::from(m),
        });
    }
    if n < 2 {
        structural_ok = false;
        flags.push(format!("dimension n = {n} < 2"));
        witnesses.push(Witness {
            quantity: "dimension n".into(),
            point: Vec::new(),
            value: n as f64,
        });
    }

    let pm = p.principal_part();
    let dirs = cfg.sphere(n);
    let pm_vals: Vec<f64> = dirs.par_iter().map(|w| pm.eval(w)).collect();
    let (pm_min, pm_max, pm_arg) = min_max_arg(&pm_vals, &dirs);
    let scale = pm_vals.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let elliptic = pm_min > ELLIPTICITY_FLOOR * scale;
    if !elliptic {
        witnesses.push(Witness {
            quantity: "P_m(omega)".into(),
            point: dirs[pm_arg].clone(),
            value: pm_min,
        });
        // closest sampled approach to the zero set of P_m
        let near_zero = pm_vals
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .unwrap_or(pm_arg);
        if near_zero != pm_arg {
            witnesses.push(Witness {
                quantity: "P_m(omega)".into(),
                point: dirs[near_zero].clone(),
                value: pm_vals[near_zero],
            });
        }
    }

    let lower: f64 = p
        .terms()
        .filter(|(k, _)| k.degree() < m)
        .map(|(_, c)| c.abs())
        .sum();
    let radius = if elliptic {
        (lower / pm_min).max(1.0) * 1.05
    } else {
        1.0
    };
    let stride = (dirs.len() / cfg.ball_directions.max(1)).max(1);
    let ball_dirs: Vec<&Vec<f64>> = dirs.iter().step_by(stride).collect();
    let probes = cfg.radial_probes.max(2);
    let mut ball_pts: Vec<Vec<f64>> = vec![vec![0.0; n]];
    for j in 1..probes {
        let r = radius * j as f64 / (probes - 1) as f64;
        for w in &ball_dirs {
            ball_pts.push(w.iter().map(|x| r * x).collect());
        }
    }
    let ball_vals: Vec<f64> = ball_pts.par_iter().map(|x| p.eval(x)).collect();
    let (ball_min, ball_max, ball_arg) = min_max_arg(&ball_vals, &ball_pts);
    let positive = ball_min > 0.0;
    if !positive {
        witnesses.push(Witness {
            quantity: "P(xi)".into(),
            point: ball_pts[ball_arg].clone(),
            value: ball_min,
        });
    }

    Ok(HypothesisReport {
        hypothesis: "H1".into(),
        passed: structural_ok && elliptic && positive,
        sampled_min: ball_min,
        quantities: vec![
            SampledQuantity {
                name: "P_m on sphere".into(),
                min: pm_min,
                max: pm_max,
                argmin: dirs[pm_arg].clone(),
            },
            SampledQuantity {
                name: "P on ball".into(),
                min: ball_min,
                max: ball_max,
                argmin: ball_pts[ball_arg].clone(),
            },
        ],
        witnesses,
        flags,
        sampling: cfg.describe(
            n,
            &format!(
                "ball radius {radius:.6} with {probes} radial probes on {} directions",
                ball_dirs.len()
            ),
        ),
    })
}

/// Numeric determinant of a row-major `n × n` matrix.
pub fn determinant(n: usize, entries: &[f64]) -> f64 {
    DMatrix::from_row_slice(n, n, entries).determinant()
}

/// Evaluates `det Hess Q(ξ)` given the precomputed second-derivative polynomials.
pub fn hessian_det(hess: &[SymbolPoly], n: usize, xi: &[f64]) -> f64 {
    let vals: Vec<f64> = hess.iter().map(|h| h.eval(xi)).collect();
    determinant(n, &vals)
}

/// Non-degeneracy of the principal part: `det Hess P_m(ω) != 0` on sampled
/// sphere directions, which by homogeneity (degree `n(m-2)`) covers every
/// `ξ != 0`. Passes iff `min |det| >= NONDEGENERACY_FLOOR * max |det|` and the
/// determinant keeps one sign.
pub fn check_h2(p: &SymbolPoly, cfg: &SamplingConfig) -> Result<HypothesisReport, SymbolError> {
    validate(p)?;
    let n = p.dim();
    let pm = p.principal_part();
    let hess = pm.hessian();
    let dirs = cfg.sphere(n);
    let dets: Vec<f64> = dirs.par_iter().map(|w| hessian_det(&hess, n, w)).collect();
    let abs: Vec<f64> = dets.iter().map(|d| d.abs()).collect();
    let (min_abs, max_abs, arg) = min_max_arg(&abs, &dirs);
    let has_pos = dets.iter().any(|&d| d > 0.0);
    let has_neg = dets.iter().any(|&d| d < 0.0);
    let mut flags = Vec::new();
    if pm.order() < 4 {
        flags.push("m<4".to_string());
    }
    if has_pos && has_neg {
        flags.push("determinant changes sign on the sphere".to_string());
    }
    let passed = max_abs > 0.0 && min_abs >= NONDEGENERACY_FLOOR * max_abs && !(has_pos && has_neg);
    let witnesses = if passed {
        Vec::new()
    } else {
        vec![Witness {
            quantity: "det Hess P_m(omega)".into(),
            point: dirs[arg].clone(),
            value: dets[arg],
        }]
    };
    Ok(HypothesisReport {
        hypothesis: "H2".into(),
        passed,
        sampled_min: min_abs,
        quantities: vec![SampledQuantity {
            name: "|det Hess P_m| on sphere".into(),
            min: min_abs,
            max: max_abs,
            argmin: dirs[arg].clone(),
        }],
        witnesses,
        flags,
        sampling: cfg.describe(n, &format!("relative floor {NONDEGENERACY_FLOOR:e}")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::parse_symbol;

    fn cfg() -> SamplingConfig {
        SamplingConfig::default()
    }

    #[test]
    fn beam_symbol_passes_h1() {
        for n in [2, 3] {
            let p = parse_symbol("1+|x|^4", n).unwrap();
            let r = check_h1(&p, &cfg()).unwrap();
            assert!(r.passed, "{r:?}");
            assert!(r.witnesses.is_empty());
            assert!((r.sampled_min - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn homogeneous_symbol_fails_positivity_at_origin() {
        let p = parse_symbol("|x|^4", 2).unwrap();
        let r = check_h1(&p, &cfg()).unwrap();
        assert!(!r.passed);
        let w = r.witnesses.iter().find(|w| w.quantity == "P(xi)").unwrap();
        assert_eq!(w.point, vec![0.0, 0.0]);
        assert_eq!(w.value, 0.0);
        assert_eq!(p.eval(&w.point), w.value);
    }

    #[test]
    fn indefinite_principal_part_fails_ellipticity() {
        let p = parse_symbol("1 + x1^4 - x2^4", 2).unwrap();
        let r = check_h1(&p, &cfg()).unwrap();
        assert!(!r.passed);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let diag = r
            .witnesses
            .iter()
            .find(|w| (w.point[0].abs() - s).abs() < 1e-12 && (w.point[1].abs() - s).abs() < 1e-12)
            .expect("a witness on a diagonal direction");
        assert!(diag.value.abs() < 1e-12);
        // witnesses reproduce on re-evaluation
        let pm = p.principal_part();
        for w in r.witnesses.iter().filter(|w| !w.point.is_empty()) {
            assert_eq!(pm.eval(&w.point), w.value);
        }
    }

    #[test]
    fn structural_failures_carry_witnesses() {
        let p = parse_symbol("1 + |x|^2", 2).unwrap();
        let r = check_h1(&p, &cfg()).unwrap();
        assert!(!r.passed);
        assert!(r.witnesses.iter().any(|w| w.quantity == "order m"));
        assert!(check_h1(&SymbolPoly::zero(2), &cfg()).is_err());
    }

    #[test]
    fn h2_sphere_minimum_for_biharmonic() {
        let p = parse_symbol("1+|x|^4", 2).unwrap();
        let r = check_h2(&p, &cfg()).unwrap();
        assert!(r.passed);
        // (4r^2+8x^2)(4r^2+8y^2) - 64x^2y^2 = 48 r^4
        assert!((r.sampled_min - 48.0).abs() < 1e-9, "{}", r.sampled_min);
        assert!((r.quantities[0].max - 48.0).abs() < 1e-9);
    }

    #[test]
    fn h2_fails_for_sum_of_fourth_powers() {
        let p = parse_symbol("x1^4 + x2^4", 2).unwrap();
        let r = check_h2(&p, &cfg()).unwrap();
        assert!(!r.passed);
        let w = &r.witnesses[0];
        assert!(w.point.iter().filter(|x| x.abs() < 1e-12).count() == 1, "{w:?}");
        // 144 x^2 y^2 vanishes on the axes
        assert!(w.value.abs() < 1e-12);
    }

    #[test]
    fn h2_quadratic_smoke_case() {
        for n in [2, 3] {
            let p = parse_symbol("|x|^2", n).unwrap();
            let r = check_h2(&p, &cfg()).unwrap();
            assert!(r.passed);
            assert!(r.flags.contains(&"m<4".to_string()));
            assert!((r.sampled_min - 2f64.powi(n as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn h2_is_scale_invariant() {
        for lit in ["1+|x|^4", "x1^4 + x2^4", "1 + x1^4 + 3*x2^4 + x1^2*x2^2"] {
            let p = parse_symbol(lit, 2).unwrap();
            let a = check_h2(&p, &cfg()).unwrap();
            for c in [1e-6, 0.3, 250.0] {
                let b = check_h2(&p.scale(c), &cfg()).unwrap();
                assert_eq!(a.passed, b.passed, "{lit} scaled by {c}");
            }
        }
    }

    #[test]
    fn hessian_det_homogeneity() {
        let p = parse_symbol("x1^4 + 3*x2^4 + x1^2*x2^2 + x3^4 + x1*x2*x3^2", 3).unwrap();
        let hess = p.principal_part().hessian();
        let n = 3;
        let m = p.order() as i32;
        for w in sphere::directions(3, 20, 1) {
            let base = hessian_det(&hess, n, &w);
            for r in [0.5, 2.0, 7.0] {
                let x: Vec<f64> = w.iter().map(|v| v * r).collect();
                let scaled = hessian_det(&hess, n, &x);
                let expect = base * r.powi(n as i32 * (m - 2));
                assert!((scaled - expect).abs() <= 1e-10 * expect.abs().max(1e-300));
            }
        }
    }
}

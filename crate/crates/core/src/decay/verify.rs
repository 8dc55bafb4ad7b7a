//! Empirical `L^p → L^q` decay runs against the theoretical exponents.

use rayon::prelude::*;
use serde::Serialize;

use super::exponent::{theoretical_exponent, Estimate, ExponentQuery, Part};
use super::norms::{lq_norm, weak_lq_norm};
use super::DecayError;
use crate::exact::{fmt_q, to_f64};
use crate::fit::{fit_power_law, log_space, MIN_FIT_POINTS};
use crate::kernel::Regime;
use crate::regions::{Location, NormPair};
use crate::spectral::{clearance_ratio, make_grid, Complex, GridSpec, Propagator, CLEARANCE_THRESHOLD};
use crate::symbol::SymbolPoly;

pub const SMALL_WINDOW: (f64, f64) = (0.01, 0.5);
pub const LARGE_WINDOW: (f64, f64) = (2.0, 50.0);
pub const WINDOW_POINTS: usize = 9;
pub const SLOPE_TOLERANCE: f64 = 0.1;

pub fn default_times(regime: Regime) -> Vec<f64> {
    let (lo, hi) = match regime {
        Regime::SmallTime => SMALL_WINDOW,
        Regime::LargeTime => LARGE_WINDOW,
    };
    log_space(lo, hi, WINDOW_POINTS)
}

/// Centred Gaussians `e^{-|x|^2/(2w^2)}` and a smoothed indicator of a ball.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DataFamily {
    pub widths: Vec<f64>,
    pub ball_radius: f64,
    pub ball_edge: f64,
}

impl Default for DataFamily {
    fn default() -> Self {
        DataFamily {
            widths: vec![0.5, 1.0, 2.0],
            ball_radius: 1.5,
            ball_edge: 0.3,
        }
    }
}

impl DataFamily {
    pub fn members(&self, g: &GridSpec) -> Vec<(String, Vec<Complex>)> {
        let r2 = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let mut out: Vec<(String, Vec<Complex>)> = self
            .widths
            .iter()
            .map(|&w| {
                let f = g.sample(|x| Complex::new((-r2(x) / (2.0 * w * w)).exp(), 0.0));
                (format!("gaussian w={w}"), f)
            })
            .collect();
        let (r, e) = (self.ball_radius, self.ball_edge);
        out.push((
            format!("ball r={r}"),
            g.sample(|x| Complex::new(0.5 * (1.0 - ((r2(x).sqrt() - r) / e).tanh()), 0.0)),
        ));
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub grid: GridSpec,
    /// Empty selects the default window of the query's regime.
    pub times: Vec<f64>,
    pub data: DataFamily,
    pub tolerance: f64,
    pub clearance_threshold: f64,
}

impl VerifyConfig {
    /// `2^k` points per axis with at most `2^16` points in total, half-length 16.
    pub fn for_dim(n: usize) -> Result<Self, DecayError> {
        let mut points = 8usize;
        while (2 * points).pow(n as u32) <= 1 << 16 && points < 256 {
            points *= 2;
        }
        Ok(VerifyConfig {
            grid: make_grid(n, points, 16.0)?,
            times: Vec::new(),
            data: DataFamily::default(),
            tolerance: SLOPE_TOLERANCE,
            clearance_threshold: CLEARANCE_THRESHOLD,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Inconclusive,
    Contradicted,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesRow {
    pub t: f64,
    /// `max over data of ||part(t)||_q / ||datum||_p`.
    pub ratio: f64,
    pub clearance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DatumFit {
    pub datum: String,
    pub exponent: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub query: String,
    pub estimate: Estimate,
    pub region: String,
    pub location: Location,
    pub norms: String,
    pub theoretical_exponent: String,
    pub fitted_exponent: Option<f64>,
    pub residual: Option<f64>,
    #[serde(rename = "C_emp")]
    pub c_emp: Option<f64>,
    /// Smallest clearance ratio over the fitted window.
    pub clearance: f64,
    pub status: String,
    pub proxy: bool,
    pub verdict: Verdict,
    pub series: Vec<SeriesRow>,
    pub per_datum: Vec<DatumFit>,
    pub notes: Vec<String>,
}

fn measure(field: &[Complex], inv_q: f64, weak: bool, g: &GridSpec) -> Result<f64, DecayError> {
    if inv_q == 0.0 {
        return lq_norm(field, f64::INFINITY, g);
    }
    if weak {
        weak_lq_norm(field, 1.0 / inv_q, g)
    } else {
        lq_norm(field, 1.0 / inv_q, g)
    }
}

pub fn verify_lp_lq(p: &SymbolPoly, qr: &ExponentQuery, cfg: &VerifyConfig) -> Result<VerifyReport, DecayError> {
    if p.dim() != qr.n || p.order() != qr.m {
        return Err(DecayError::Precondition(format!(
            "symbol has (m, n) = ({}, {}), query has ({}, {})",
            p.order(),
            p.dim(),
            qr.m,
            qr.n
        )));
    }
    if cfg.grid.dim != qr.n {
        return Err(DecayError::Precondition("grid dimension does not match n".into()));
    }
    let theory = theoretical_exponent(qr)?;
    let times = if cfg.times.is_empty() {
        default_times(qr.regime)
    } else {
        cfg.times.clone()
    };
    if let Some(t) = times.iter().find(|t| !qr.regime.contains(**t) || **t <= 0.0) {
        return Err(DecayError::Precondition(format!("t = {t} is outside the requested regime")));
    }
    let g = &cfg.grid;
    let inv_p = to_f64(&qr.inv_p);
    let inv_q = to_f64(&qr.inv_q);
    let weak = matches!(theory.norms, NormPair::WeakTarget | NormPair::WeakEdge);
    let proxy = theory.norms == NormPair::LorentzSource;

    let members = cfg.data.members(g);
    let zero = vec![Complex::default(); g.len()];
    // rows[datum][time] = (ratio, clearance)
    let rows: Vec<Vec<(f64, f64)>> = members
        .par_iter()
        .map(|(_, datum)| -> Result<Vec<(f64, f64)>, DecayError> {
            let source = lq_norm(datum, 1.0 / inv_p, g)?;
            let scaled: Vec<Complex> = datum.iter().map(|z| z / source).collect();
            let prop = match qr.part {
                Part::U => Propagator::new(p, g, &scaled, &zero)?,
                Part::V => Propagator::new(p, g, &zero, &scaled)?,
            };
            times
                .iter()
                .map(|&t| {
                    let field = match qr.part {
                        Part::U => prop.cos_part(t),
                        Part::V => prop.sin_part(t),
                    };
                    Ok((measure(&field, inv_q, weak, g)?, clearance_ratio(&field, g)?))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;

    let series: Vec<SeriesRow> = times
        .iter()
        .enumerate()
        .map(|(k, &t)| SeriesRow {
            t,
            ratio: rows.iter().map(|r| r[k].0).fold(0.0, f64::max),
            clearance: rows.iter().map(|r| r[k].1).fold(f64::INFINITY, f64::min),
        })
        .collect();
    let clear: Vec<&SeriesRow> = series.iter().filter(|r| r.clearance >= cfg.clearance_threshold).collect();
    let mut notes = Vec::new();
    if proxy {
        notes.push("Lorentz source norm L^{q',1} replaced by the strong L^{q'} norm".into());
    }
    if weak {
        notes.push("target measured in the weak L^{q,inf} norm".into());
    }
    let theory_val = to_f64(&theory.exponent);
    let clearance = clear.iter().map(|r| r.clearance).fold(f64::INFINITY, f64::min);
    let mut report = VerifyReport {
        query: qr.describe(),
        estimate: theory.estimate,
        region: theory.region.kind.tag(),
        location: theory.location,
        norms: theory.norms.to_string(),
        theoretical_exponent: fmt_q(&theory.exponent),
        fitted_exponent: None,
        residual: None,
        c_emp: None,
        clearance: if clear.is_empty() {
            series.iter().map(|r| r.clearance).fold(f64::INFINITY, f64::min)
        } else {
            clearance
        },
        status: "ok".into(),
        proxy,
        verdict: Verdict::Inconclusive,
        series: series.clone(),
        per_datum: Vec::new(),
        notes,
    };
    if clear.len() < MIN_FIT_POINTS {
        report.status = "box-contaminated".into();
        return Ok(report);
    }
    if clear.len() < series.len() {
        report.notes.push(format!(
            "{} of {} times dropped for clearance below {}",
            series.len() - clear.len(),
            series.len(),
            cfg.clearance_threshold
        ));
    }
    finish(report, &clear, &rows, &members, &times, qr.regime, theory_val, cfg.tolerance)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    mut report: VerifyReport,
    clear: &[&SeriesRow],
    rows: &[Vec<(f64, f64)>],
    members: &[(String, Vec<Complex>)],
    times: &[f64],
    regime: Regime,
    theory: f64,
    tol: f64,
) -> Result<VerifyReport, DecayError> {
    let pts: Vec<(f64, f64)> = clear.iter().map(|r| (r.t, r.ratio)).collect();
    let fit = fit_power_law(&pts, None)?;
    let c_emp = pts.iter().map(|(t, v)| v / t.powf(theory)).fold(0.0, f64::max);
    let delta = fit.exponent - theory;
    // A bound C t^α is violated by faster growth as t → 0 (small slope)
    // or as t → ∞ (large slope).
    let violated = match regime {
        Regime::SmallTime => delta < -tol,
        Regime::LargeTime => delta > tol,
    };
    report.verdict = if delta.abs() <= tol {
        Verdict::Consistent
    } else if violated {
        Verdict::Contradicted
    } else {
        Verdict::Inconclusive
    };
    report.fitted_exponent = Some(fit.exponent);
    report.residual = Some(fit.residual);
    report.c_emp = Some(c_emp);
    let kept: Vec<f64> = clear.iter().map(|r| r.t).collect();
    report.per_datum = members
        .iter()
        .zip(rows)
        .map(|((name, _), r)| {
            let s: Vec<(f64, f64)> = times
                .iter()
                .zip(r)
                .filter(|(t, _)| kept.contains(t))
                .map(|(&t, &(v, _))| (t, v))
                .collect();
            DatumFit {
                datum: name.clone(),
                exponent: fit_power_law(&s, None).ok().map(|f| f.exponent),
            }
        })
        .collect();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::symbol::parse_symbol;

    fn query(part: Part, regime: Regime) -> ExponentQuery {
        ExponentQuery {
            part,
            regime,
            inv_p: q(1, 2),
            inv_q: q(1, 2),
            m: 4,
            n: 2,
        }
    }

    #[test]
    fn sine_part_grows_linearly_for_small_time() {
        let p = parse_symbol("1 + |x|^4", 2).unwrap();
        let r = verify_lp_lq(&p, &query(Part::V, Regime::SmallTime), &VerifyConfig::for_dim(2).unwrap()).unwrap();
        assert_eq!(r.theoretical_exponent, "1");
        assert!((r.fitted_exponent.unwrap() - 1.0).abs() < 0.05, "{:?}", r.fitted_exponent);
        assert_eq!(r.verdict, Verdict::Consistent);
        assert_eq!(r.series.len(), WINDOW_POINTS);
    }

    #[test]
    fn cosine_part_is_bounded() {
        let p = parse_symbol("1 + |x|^4", 2).unwrap();
        let r = verify_lp_lq(&p, &query(Part::U, Regime::SmallTime), &VerifyConfig::for_dim(2).unwrap()).unwrap();
        assert!(r.fitted_exponent.unwrap().abs() < 0.05);
        assert!(r.series.iter().all(|s| s.ratio <= 1.0 + 1e-9));
    }

    #[test]
    fn mismatched_symbol_is_rejected() {
        let p = parse_symbol("1 + |x|^4", 3).unwrap();
        let e = verify_lp_lq(&p, &query(Part::V, Regime::SmallTime), &VerifyConfig::for_dim(2).unwrap());
        assert!(matches!(e, Err(DecayError::Precondition(_))));
    }

    #[test]
    fn small_box_is_contaminated() {
        let p = parse_symbol("1 + |x|^4", 2).unwrap();
        let cfg = VerifyConfig {
            grid: make_grid(2, 32, 3.0).unwrap(),
            ..VerifyConfig::for_dim(2).unwrap()
        };
        let r = verify_lp_lq(&p, &query(Part::V, Regime::LargeTime), &cfg).unwrap();
        assert_eq!(r.status, "box-contaminated");
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.fitted_exponent.is_none());
    }
}

//! Subcommand pipelines. Each writes its artifacts under `out` and returns
//! whether every verdict passed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use ddlab_core::decay::{self, lq_norm, DecayError, ExponentQuery, Part, VerifyConfig, VerifyReport};
use ddlab_core::exact::parse_q;
use ddlab_core::fit::{fit_power_law, log_space, DecayFit, MIN_FIT_POINTS};
use ddlab_core::kernel::{
    check_bound, envelope_exponents, eval_kernel_batch, EvalPath, KernelBoundReport, KernelError, KernelSample,
    Kind, QuadConfig, Regime, Sign,
};
use ddlab_core::regions::{build_region, render_svg, RegionError, RegionJson, RegionKind, Stroke};
use ddlab_core::spectral::{
    clearance_ratio, energy, make_grid_capped, spectral_tail_fraction, write_norms_csv, Complex, GridSpec,
    NormRow, Propagator, SpectralError, DEFAULT_MEMORY_CAP,
};
use ddlab_core::sphere::{self, DEFAULT_SEED};
use ddlab_core::symbol::{
    check_h1, check_h2, hessian_growth_sqrt, parse_symbol, probe_grid, surface_type_scan, HypothesisReport,
    SamplingConfig, SqrtHessianFit, SurfaceScan, SymbolPoly,
};

use crate::config::{ExperimentConfig, QueryEntry};
use crate::output::{report, write_json, write_text, Check};
use crate::{Common, UsageError};

const DEFAULT_POLY: &str = "1+|x|^4";
const DEFAULT_DIM: usize = 2;
const DEFAULT_HALF_LENGTH: f64 = 16.0;
const DEFAULT_SOLVE_TIMES: [f64; 4] = [0.1, 1.0, 10.0, 100.0];
const DEFAULT_OFFSETS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
const ENERGY_TOLERANCE: f64 = 1e-10;
const SLOPE_TOLERANCE: f64 = 0.1;

pub struct Context {
    pub common: Common,
    pub file: ExperimentConfig,
    pub seed: u64,
    pub out: PathBuf,
}

fn usage(field: &str, e: impl std::fmt::Display) -> UsageError {
    UsageError(format!("{field}: {e}"))
}

fn check_finite(field: &str, v: &[f64]) -> Result<(), UsageError> {
    if v.is_empty() {
        return Err(UsageError(format!("{field}: list is empty")));
    }
    match v.iter().find(|x| !x.is_finite()) {
        Some(x) => Err(UsageError(format!("{field}: {x} is not finite"))),
        None => Ok(()),
    }
}

impl Context {
    pub fn new(common: &Common, file: ExperimentConfig) -> Result<Self, UsageError> {
        if let Some(t) = &common.t_list {
            check_finite("--t-list", t)?;
        }
        if let Some(e) = &common.eps_list {
            check_finite("--eps-list", e)?;
        }
        let seed = common.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
        let out = common
            .out
            .clone()
            .or_else(|| file.out.clone())
            .unwrap_or_else(|| PathBuf::from("ddlab-out"));
        Ok(Context {
            common: common.clone(),
            file,
            seed,
            out,
        })
    }

    fn poly_literal(&self) -> String {
        self.common
            .poly
            .clone()
            .or_else(|| self.file.symbol.poly.clone())
            .unwrap_or_else(|| DEFAULT_POLY.to_string())
    }

    fn dim(&self) -> usize {
        self.common.n.or(self.file.symbol.n).unwrap_or(DEFAULT_DIM)
    }

    fn symbol(&self) -> Result<SymbolPoly, UsageError> {
        let n = self.dim();
        if n == 0 {
            return Err(UsageError("n: must be at least 1".into()));
        }
        let lit = self.poly_literal();
        parse_symbol(&lit, n).map_err(|e| usage("poly", e))
    }

    fn sampling(&self) -> SamplingConfig {
        SamplingConfig {
            directions: self.file.symbol.directions,
            seed: self.seed,
            ..SamplingConfig::default()
        }
    }

    fn grid_override(&self) -> (Option<usize>, Option<f64>) {
        (
            self.common.grid_n.or(self.file.grid.points),
            self.common.grid_l.or(self.file.grid.half_length),
        )
    }

    fn grid(&self, n: usize) -> Result<GridSpec, UsageError> {
        let (points, half) = self.grid_override();
        let points = points.unwrap_or_else(|| default_points(n));
        let half = half.unwrap_or(DEFAULT_HALF_LENGTH);
        make_grid_capped(n, points, half, DEFAULT_MEMORY_CAP).map_err(|e| usage("grid", e))
    }
}

/// Largest power of two up to 256 with at most `2^16` points in total.
fn default_points(n: usize) -> usize {
    let mut points = 8usize;
    while (2 * points).pow(n as u32) <= 1 << 16 && points < 256 {
        points *= 2;
    }
    points
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::SmallTime => "small",
        Regime::LargeTime => "large",
    }
}

/// Slope verdict for an upper bound `C t^α`: faster growth toward the
/// regime's limit contradicts it.
fn slope_verdict(regime: Regime, fitted: f64, expected: f64, tol: f64) -> &'static str {
    let delta = fitted - expected;
    let violated = match regime {
        Regime::SmallTime => delta < -tol,
        Regime::LargeTime => delta > tol,
    };
    if delta.abs() <= tol {
        "consistent"
    } else if violated {
        "contradicted"
    } else {
        "inconclusive"
    }
}

#[derive(Serialize)]
struct SymbolReport {
    command: &'static str,
    symbol: String,
    n: usize,
    m: u32,
    seed: u64,
    h1: HypothesisReport,
    h2: HypothesisReport,
    surface_scan: Option<SurfaceScan>,
    sqrt_hessian: Vec<SqrtHessianFit>,
    notes: Vec<String>,
    checks: Vec<Check>,
}

pub fn check_symbol(ctx: &Context, out: &Path) -> Result<bool> {
    let p = ctx.symbol()?;
    let (n, m) = (p.dim(), p.order());
    let cfg = ctx.sampling();
    let h1 = check_h1(&p, &cfg).map_err(|e| usage("poly", e))?;
    let h2 = check_h2(&p, &cfg).map_err(|e| usage("poly", e))?;
    let mut checks = Vec::new();
    if let Some(expect) = ctx.common.m_expect.or(ctx.file.symbol.m_expect) {
        checks.push(Check::new(
            "order",
            if expect == m { "pass" } else { "fail" },
            format!("m = {m}, expected {expect}"),
        ));
    }
    let describe = |r: &HypothesisReport, what: &str| {
        let mut d = format!("{what} = {}", r.sampled_min);
        if let Some(w) = r.witnesses.first() {
            let _ = write!(d, "; witness {} at {:?} = {}", w.quantity, w.point, w.value);
        }
        d
    };
    checks.push(Check::new(
        "H1",
        if h1.passed { "pass" } else { "fail" },
        describe(&h1, "min P on probe ball"),
    ));
    checks.push(Check::new(
        "H2",
        if h2.passed { "pass" } else { "fail" },
        describe(&h2, "sphere min |det Hess P_m|"),
    ));

    let mut notes = Vec::new();
    let surface_scan = match n {
        1..=3 => {
            let per_axis = [0, 65, 33, 11][n];
            let pts = probe_grid(n, 2.0, per_axis);
            match surface_type_scan(&p, &pts, m.max(2) + 2) {
                Ok(s) => Some(s),
                Err(e) => {
                    notes.push(format!("surface type scan skipped: {e}"));
                    None
                }
            }
        }
        _ => {
            notes.push("surface type scan runs for n <= 3 only".into());
            None
        }
    };
    let radii = log_space(10.0, 1000.0, 9);
    let sqrt_hessian = if h1.passed && m >= 4 {
        let mut dirs = sphere::axes(n);
        dirs.extend(sphere::directions(n, 8, ctx.seed));
        hessian_growth_sqrt(&p, &radii, &dirs).unwrap_or_else(|e| {
            notes.push(format!("sqrt-Hessian growth skipped: {e}"));
            Vec::new()
        })
    } else {
        notes.push("sqrt-Hessian growth needs H1 and m >= 4".into());
        Vec::new()
    };
    let ok = report(&checks);
    write_json(
        out,
        "report.json",
        &SymbolReport {
            command: "check-symbol",
            symbol: p.to_string(),
            n,
            m,
            seed: ctx.seed,
            h1,
            h2,
            surface_scan,
            sqrt_hessian,
            notes,
            checks,
        },
    )?;
    Ok(ok)
}

#[derive(Serialize)]
struct SolveRow {
    t: f64,
    energy: f64,
    drift: f64,
    clearance: f64,
}

#[derive(Serialize)]
struct SolveReport {
    command: &'static str,
    symbol: String,
    n: usize,
    grid_points: usize,
    half_length: f64,
    seed: u64,
    q: f64,
    initial_energy: f64,
    spectral_tail: f64,
    rows: Vec<SolveRow>,
    checks: Vec<Check>,
}

/// Four Gaussian bumps with seeded centres, widths and amplitudes.
fn random_bumps(g: &GridSpec, seed: u64) -> Vec<Complex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quarter = g.half_length / 4.0;
    let bumps: Vec<(Vec<f64>, f64, f64)> = (0..4)
        .map(|_| {
            let c: Vec<f64> = (0..g.dim).map(|_| rng.random_range(-quarter..quarter)).collect();
            (c, rng.random_range(0.6..1.5), rng.random_range(-1.0..1.0))
        })
        .collect();
    g.sample(|x| {
        let v: f64 = bumps
            .iter()
            .map(|(c, w, a)| {
                let r2: f64 = x.iter().zip(c).map(|(xi, ci)| (xi - ci) * (xi - ci)).sum();
                a * (-r2 / (2.0 * w * w)).exp()
            })
            .sum();
        Complex::new(v, 0.0)
    })
}

pub fn solve(ctx: &Context, out: &Path) -> Result<bool> {
    let p = ctx.symbol()?;
    let n = p.dim();
    let g = ctx.grid(n)?;
    let times = ctx
        .common
        .t_list
        .clone()
        .or_else(|| ctx.file.solve.t_list.clone())
        .unwrap_or_else(|| DEFAULT_SOLVE_TIMES.to_vec());
    check_finite("solve.t_list", &times)?;
    let q = ctx.file.solve.q.unwrap_or(4.0);
    if !(q >= 1.0) {
        return Err(usage("solve.q", format!("{q} is below 1")).into());
    }
    let u0 = g.sample(|x| Complex::new((-x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0));
    let u1 = random_bumps(&g, ctx.seed);
    let prop = Propagator::new(&p, &g, &u0, &u1).map_err(|e| match e {
        SpectralError::NonPositiveSymbol { .. } => anyhow::Error::from(usage("poly", e)),
        other => other.into(),
    })?;
    let e0 = energy(&prop.state(0.0), &p, &g)?;
    let tail = spectral_tail_fraction(&u0, &g)?.max(spectral_tail_fraction(&u1, &g)?);
    let mut rows = Vec::new();
    let mut norms = Vec::new();
    for &t in &times {
        let s = prop.state(t);
        let e = energy(&s, &p, &g)?;
        rows.push(SolveRow {
            t,
            energy: e,
            drift: (e - e0).abs() / e0,
            clearance: clearance_ratio(&s.u, &g)?,
        });
        norms.push(NormRow {
            t,
            l2: lq_norm(&s.u, 2.0, &g)?,
            lq: lq_norm(&s.u, q, &g)?,
            linf: lq_norm(&s.u, f64::INFINITY, &g)?,
        });
    }
    let max_drift = rows.iter().map(|r| r.drift).fold(0.0, f64::max);
    let min_clear = rows.iter().map(|r| r.clearance).fold(f64::INFINITY, f64::min);
    let checks = vec![Check::new(
        "energy",
        if max_drift <= ENERGY_TOLERANCE { "pass" } else { "fail" },
        format!("max relative drift {max_drift:e} over {} times; min clearance {min_clear}", times.len()),
    )];
    let mut csv = Vec::new();
    write_norms_csv(&mut csv, &norms)?;
    write_text(out, "norms.csv", &String::from_utf8(csv)?)?;
    let ok = report(&checks);
    write_json(
        out,
        "report.json",
        &SolveReport {
            command: "solve",
            symbol: p.to_string(),
            n,
            grid_points: g.points,
            half_length: g.half_length,
            seed: ctx.seed,
            q,
            initial_energy: e0,
            spectral_tail: tail,
            rows,
            checks,
        },
    )?;
    Ok(ok)
}

#[derive(Serialize)]
struct SlopeFit {
    regime: Regime,
    expected: f64,
    fit: Option<DecayFit>,
}

#[derive(Serialize)]
struct KernelReport {
    command: &'static str,
    symbol: String,
    kind: Kind,
    sign: Sign,
    path: EvalPath,
    eps: Vec<f64>,
    samples: usize,
    flagged: usize,
    bounds: Vec<KernelBoundReport>,
    sup_norm_fits: Vec<SlopeFit>,
    checks: Vec<Check>,
}

fn kernel_usage(e: KernelError) -> anyhow::Error {
    match e {
        KernelError::Config(_) | KernelError::Precondition(_) | KernelError::SingularWeight => {
            usage("kernel", e).into()
        }
        other => other.into(),
    }
}

fn samples_csv(samples: &[KernelSample], n: usize) -> String {
    let mut s = String::from("kind,sign,t");
    for a in 1..=n {
        let _ = write!(s, ",x{a}");
    }
    s.push_str(",re,im,abs,error,flagged,path\n");
    for k in samples {
        let _ = write!(s, "{},{},{}", k.kind, k.sign.symbol(), k.t);
        for v in &k.x {
            let _ = write!(s, ",{v}");
        }
        let path = match k.path {
            EvalPath::Auto => "auto",
            EvalPath::Lattice => "lattice",
            EvalPath::Radial => "radial",
        };
        let _ = writeln!(
            s,
            ",{},{},{},{},{},{path}",
            k.value.re,
            k.value.im,
            k.value.norm(),
            k.error,
            k.flagged
        );
    }
    s
}

pub fn kernel_scan(ctx: &Context, out: &Path, kind_flag: Option<&str>) -> Result<bool> {
    let p = ctx.symbol()?;
    let n = p.dim();
    let kind = match kind_flag.or(ctx.file.kernel.kind.as_deref()).unwrap_or("I1") {
        "I1" | "i1" => Kind::I1,
        "I2" | "i2" => Kind::I2,
        other => return Err(usage("kind", format!("'{other}' is not I1 or I2")).into()),
    };
    let sign = match ctx.file.kernel.sign.as_deref().unwrap_or("+") {
        "+" => Sign::Plus,
        "-" => Sign::Minus,
        other => return Err(usage("kernel.sign", format!("'{other}' is not + or -")).into()),
    };
    let path = match ctx.file.kernel.path.as_deref().unwrap_or("auto") {
        "auto" => EvalPath::Auto,
        "lattice" => EvalPath::Lattice,
        "radial" => EvalPath::Radial,
        other => return Err(usage("kernel.path", format!("'{other}' is not auto, lattice or radial")).into()),
    };
    let times = ctx
        .common
        .t_list
        .clone()
        .or_else(|| ctx.file.kernel.t_list.clone())
        .unwrap_or_else(|| log_space(0.01, 0.5, 9));
    check_finite("kernel.t_list", &times)?;
    let eps = ctx
        .common
        .eps_list
        .clone()
        .or_else(|| ctx.file.kernel.eps_list.clone())
        .unwrap_or_else(|| QuadConfig::default().eps);
    check_finite("eps-list", &eps)?;
    let offsets = ctx.file.kernel.offsets.clone().unwrap_or_else(|| DEFAULT_OFFSETS.to_vec());
    check_finite("kernel.offsets", &offsets)?;
    let cfg = QuadConfig {
        order: 3.min(eps.len() - 1),
        eps,
        path,
        ..QuadConfig::default()
    };
    cfg.validate().map_err(|e| usage("eps-list", e))?;
    let m = p.order();
    for regime in [Regime::SmallTime, Regime::LargeTime] {
        envelope_exponents(kind, regime, m, n).map_err(kernel_usage)?;
    }
    let m1 = m as f64 / 2.0;
    let mut samples = Vec::new();
    for &t in &times {
        let scale = if t.abs() <= 1.0 { t.abs().powf(1.0 / m1) } else { t.abs() };
        let xs: Vec<Vec<f64>> = offsets
            .iter()
            .map(|c| {
                let mut x = vec![0.0; n];
                x[0] = c * scale;
                x
            })
            .collect();
        samples.extend(eval_kernel_batch(&p, kind, sign, t, &xs, &cfg).map_err(kernel_usage)?);
    }
    let bounds = check_bound(&samples, &p, kind).map_err(kernel_usage)?;
    let mut checks = Vec::new();
    let mut fits = Vec::new();
    for b in &bounds {
        let name = format!("envelope {}-time", regime_name(b.regime));
        match (b.samples, b.saturated) {
            (0, _) => continue,
            (_, Some(sat)) => checks.push(Check::new(
                name,
                if sat { "pass" } else { "fail" },
                format!(
                    "C_emp = {}, drift = {} over the last decade of reach",
                    b.c_emp.unwrap_or(f64::NAN),
                    b.drift.unwrap_or(f64::NAN)
                ),
            )),
            (_, None) => checks.push(Check::new(name, "inconclusive", "samples span less than a decade of reach")),
        }
        let e = envelope_exponents(kind, b.regime, m, n).map_err(kernel_usage)?;
        let expected = -ddlab_core::exact::to_f64(&e.time_decay);
        let mut ts: Vec<f64> = samples.iter().filter(|s| b.regime.contains(s.t)).map(|s| s.t).collect();
        ts.dedup();
        let series: Vec<(f64, f64)> = ts
            .iter()
            .map(|&t| {
                let sup = samples.iter().filter(|s| s.t == t).map(|s| s.value.norm()).fold(0.0, f64::max);
                (t.abs(), sup)
            })
            .collect();
        let fit = if series.len() >= MIN_FIT_POINTS {
            fit_power_law(&series, None).ok()
        } else {
            None
        };
        if let Some(f) = &fit {
            checks.push(Check::new(
                format!("sup-norm slope {}-time", regime_name(b.regime)),
                slope_verdict(b.regime, f.exponent, expected, SLOPE_TOLERANCE),
                format!("fitted {:.4} vs {expected:.4}", f.exponent),
            ));
        }
        fits.push(SlopeFit {
            regime: b.regime,
            expected,
            fit,
        });
    }
    write_text(out, "samples.csv", &samples_csv(&samples, n))?;
    let ok = report(&checks);
    write_json(
        out,
        "report.json",
        &KernelReport {
            command: "kernel-scan",
            symbol: p.to_string(),
            kind,
            sign,
            path,
            eps: cfg.eps.clone(),
            samples: samples.len(),
            flagged: samples.iter().filter(|s| s.flagged).count(),
            bounds,
            sup_norm_fits: fits,
            checks,
        },
    )?;
    Ok(ok)
}

fn parse_query(e: &QueryEntry, i: usize, m: u32, n: usize) -> Result<ExponentQuery, UsageError> {
    let field = |f: &str| format!("decay.queries[{i}].{f}");
    let part = match e.part.as_str() {
        "U" | "u" => Part::U,
        "V" | "v" => Part::V,
        other => return Err(usage(&field("part"), format!("'{other}' is not U or V"))),
    };
    let regime = match e.regime.as_str() {
        "small" => Regime::SmallTime,
        "large" => Regime::LargeTime,
        other => return Err(usage(&field("regime"), format!("'{other}' is not small or large"))),
    };
    let inv_p = parse_q(&e.inv_p).ok_or_else(|| usage(&field("inv_p"), "not a rational"))?;
    let inv_q = parse_q(&e.inv_q).ok_or_else(|| usage(&field("inv_q"), "not a rational"))?;
    Ok(ExponentQuery {
        part,
        regime,
        inv_p,
        inv_q,
        m,
        n,
    })
}

#[derive(Serialize)]
struct DecayReport {
    command: &'static str,
    symbol: String,
    reports: Vec<VerifyReport>,
    checks: Vec<Check>,
}

pub fn decay_verify(ctx: &Context, out: &Path) -> Result<bool> {
    let p = ctx.symbol()?;
    let (m, n) = (p.order(), p.dim());
    let entries = ctx.file.decay.queries.clone().unwrap_or_else(|| {
        ["V", "U"]
            .iter()
            .map(|part| QueryEntry {
                part: part.to_string(),
                regime: "small".into(),
                inv_p: "1/2".into(),
                inv_q: "1/2".into(),
            })
            .collect()
    });
    let queries: Vec<ExponentQuery> = entries
        .iter()
        .enumerate()
        .map(|(i, e)| parse_query(e, i, m, n))
        .collect::<Result<_, _>>()?;
    let mut vcfg = VerifyConfig::for_dim(n)?;
    let (points, half) = ctx.grid_override();
    if points.is_some() || half.is_some() {
        vcfg.grid = ctx.grid(n)?;
    }
    if let Some(t) = &ctx.file.decay.t_list {
        check_finite("decay.t_list", t)?;
        vcfg.times = t.clone();
    }
    if let Some(tol) = ctx.file.decay.tolerance {
        vcfg.tolerance = tol;
    }
    let mut reports = Vec::new();
    let mut checks = Vec::new();
    for (i, q) in queries.iter().enumerate() {
        let r = decay::verify_lp_lq(&p, q, &vcfg).map_err(|e| match e {
            DecayError::Outside { .. } | DecayError::Precondition(_) | DecayError::Region(_) => {
                anyhow::Error::from(usage(&format!("decay.queries[{i}]"), e))
            }
            other => other.into(),
        })?;
        let detail = match r.fitted_exponent {
            Some(f) => format!("fitted {f:.4} vs {}; clearance {:.3}", r.theoretical_exponent, r.clearance),
            None => format!("{}; exponent not asserted", r.status),
        };
        checks.push(Check::new(
            format!("decay {}", q.describe()),
            serde_json::to_value(r.verdict)?.as_str().unwrap_or("inconclusive"),
            detail,
        ));
        reports.push(r);
    }
    let ok = report(&checks);
    write_json(
        out,
        "report.json",
        &DecayReport {
            command: "decay-verify",
            symbol: p.to_string(),
            reports,
            checks,
        },
    )?;
    Ok(ok)
}

#[derive(Serialize)]
struct RegionsReport {
    command: &'static str,
    m: u32,
    n: usize,
    regions: Vec<RegionJson>,
    checks: Vec<Check>,
}

fn region_usage(e: RegionError) -> UsageError {
    usage("regions", e)
}

/// `(m, n)` from the flags, then the manifest, then `(4, 6)`.
pub fn regions(ctx: &Context, out: &Path, m_flag: Option<u32>, kind_flag: Option<&str>) -> Result<bool> {
    let m = m_flag.or(ctx.file.regions.m).unwrap_or(4);
    let n = ctx.common.n.or(ctx.file.regions.n).unwrap_or(6);
    regions_for(ctx, out, m, n, kind_flag)
}

fn regions_for(ctx: &Context, out: &Path, m: u32, n: usize, kind_flag: Option<&str>) -> Result<bool> {
    let kind = kind_flag.or(ctx.file.regions.kind.as_deref()).unwrap_or("figure");
    let layers: Vec<(RegionKind, Stroke)> = if kind == "figure" {
        if n >= m as usize {
            vec![
                (RegionKind::Delta(ddlab_core::exact::Q::from_integer(m as i64)), Stroke::Solid),
                (RegionKind::Aef, Stroke::Dashed),
                (RegionKind::Hexagon, Stroke::Dotted),
            ]
        } else {
            vec![(RegionKind::Pentagon, Stroke::Solid)]
        }
    } else {
        vec![(RegionKind::parse(kind, m).map_err(region_usage)?, Stroke::Solid)]
    };
    let built: Vec<_> = layers
        .iter()
        .map(|(k, s)| build_region(*k, m, n).map(|r| (r, *s)))
        .collect::<Result<_, _>>()
        .map_err(region_usage)?;
    let checks: Vec<Check> = built
        .iter()
        .map(|(r, _)| {
            let mut detail = format!("{} vertices", r.vertices.len());
            for f in &r.flags {
                let _ = write!(detail, "; {f}");
            }
            Check::new(format!("region {}", r.kind.tag()), "pass", detail)
        })
        .collect();
    let refs: Vec<_> = built.iter().map(|(r, s)| (r, *s)).collect();
    write_text(out, "regions.svg", &render_svg(&refs))?;
    let ok = report(&checks);
    write_json(
        out,
        "report.json",
        &RegionsReport {
            command: "regions",
            m,
            n,
            regions: built.iter().map(|(r, _)| r.export()).collect(),
            checks,
        },
    )?;
    Ok(ok)
}

pub fn all(ctx: &Context) -> Result<bool> {
    let p = ctx.symbol()?;
    let mut ok = true;
    println!("== check-symbol");
    ok &= check_symbol(ctx, &ctx.out.join("check-symbol"))?;
    println!("== solve");
    ok &= solve(ctx, &ctx.out.join("solve"))?;
    println!("== kernel-scan");
    ok &= kernel_scan(ctx, &ctx.out.join("kernel-scan"), None)?;
    println!("== decay-verify");
    ok &= decay_verify(ctx, &ctx.out.join("decay-verify"))?;
    println!("== regions");
    let m = ctx.file.regions.m.unwrap_or(p.order());
    let n = ctx.file.regions.n.unwrap_or(p.dim());
    ok &= regions_for(ctx, &ctx.out.join("regions"), m, n, None)?;
    Ok(ok)
}

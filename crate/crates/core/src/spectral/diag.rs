//! Resolution and periodisation diagnostics.

use super::fft::NdFft;
use super::{make_grid_capped, Complex, GridSpec, SpectralError, DEFAULT_MEMORY_CAP};
use crate::par::ordered_sum;

/// Admissible spectral mass outside `|ξ| <= ξ_max/2`.
pub const TAIL_TOLERANCE: f64 = 1e-10;
/// Clearance below which a run counts as box-contaminated.
pub const CLEARANCE_THRESHOLD: f64 = 0.25;
/// Mass fraction ignored when locating the support radius.
const MASS_CUTOFF: f64 = 1e-10;

/// Fraction of `Σ|û|²` carried by frequencies with `|ξ| > ξ_max/2`.
pub fn spectral_tail_fraction(f: &[Complex], g: &GridSpec) -> Result<f64, SpectralError> {
    g.check_field(f)?;
    let mut h = f.to_vec();
    NdFft::new(g).forward(&mut h);
    let cut2 = (0.5 * g.xi_max()).powi(2);
    let total = ordered_sum(g.len(), |i| h[i].norm_sqr());
    if total == 0.0 {
        return Ok(0.0);
    }
    let tail = ordered_sum(g.len(), |i| {
        let r2: f64 = g.frequency(i).iter().map(|x| x * x).sum();
        if r2 > cut2 {
            h[i].norm_sqr()
        } else {
            0.0
        }
    });
    Ok(tail / total)
}

/// Smallest power-of-two `N >= start` on `[-L, L)^dim` whose sampled `f`
/// has spectral tail below [`TAIL_TOLERANCE`]. Returns the grid and its tail.
pub fn select_grid<F>(
    dim: usize,
    half_length: f64,
    start: usize,
    f: F,
) -> Result<(GridSpec, f64), SpectralError>
where
    F: Fn(&[f64]) -> Complex + Sync,
{
    let mut points = start.max(2).next_power_of_two();
    loop {
        let g = make_grid_capped(dim, points, half_length, DEFAULT_MEMORY_CAP)?;
        let tail = spectral_tail_fraction(&g.sample(&f), &g)?;
        if tail <= TAIL_TOLERANCE {
            return Ok((g, tail));
        }
        points *= 2;
    }
}

/// `(L - r)/L`, where `r` is the smallest sup-norm radius outside which at
/// most a `1e-10` fraction of `Σ|f|²` lies. 1 means the field sits at the
/// centre; values near 0 mean it has reached the box edge.
pub fn clearance_ratio(f: &[Complex], g: &GridSpec) -> Result<f64, SpectralError> {
    g.check_field(f)?;
    let total = ordered_sum(g.len(), |i| f[i].norm_sqr());
    if total == 0.0 {
        return Ok(1.0);
    }
    let mut by_radius: Vec<(f64, f64)> = (0..g.len())
        .map(|i| {
            let r = g.position(i).iter().fold(0.0_f64, |a, x| a.max(x.abs()));
            (r, f[i].norm_sqr())
        })
        .collect();
    by_radius.sort_by(|a, b| b.0.total_cmp(&a.0));
    let budget = MASS_CUTOFF * total;
    let mut outside = 0.0;
    let mut radius = 0.0;
    for (r, m) in by_radius {
        if outside + m > budget {
            radius = r;
            break;
        }
        outside += m;
    }
    let l = g.half_length;
    Ok(((l - radius) / l).max(0.0))
}

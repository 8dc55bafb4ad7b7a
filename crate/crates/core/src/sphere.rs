//! Deterministic direction sets on the unit sphere `S^{n-1}`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub const DEFAULT_SEED: u64 = 0x5eed_dd1a;

/// Default probe count for a dimension.
pub fn default_count(dim: usize) -> usize {
    match dim {
        0 | 1 => 2,
        2 => 4096,
        3 => 8192,
        _ => 1 << 16,
    }
}

/// `count` unit vectors in `R^dim`.
///
/// Uniform angles for `dim == 2` (starting at angle 0, so the axes are hit
/// whenever `count` is a multiple of 4), a Fibonacci lattice for `dim == 3`,
/// normalised Gaussian draws from `seed` otherwise.
pub fn directions(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    match dim {
        0 => Vec::new(),
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..count)
            .map(|k| {
                let th = std::f64::consts::TAU * k as f64 / count as f64;
                vec![th.cos(), th.sin()]
            })
            .collect(),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - (2 * k + 1) as f64 / count as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = golden * k as f64;
                    vec![r * phi.cos(), r * phi.sin(), z]
                })
                .collect()
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::with_capacity(count);
            while out.len() < count {
                let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm > 1e-12 {
                    out.push(v.into_iter().map(|x| x / norm).collect());
                }
            }
            out
        }
    }
}

/// Coordinate axes `±e_i`, useful as extra probes.
pub fn axes(dim: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * dim);
    for i in 0..dim {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; dim];
            e[i] = s;
            out.push(e);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_norm_and_counts() {
        for (dim, count) in [(2, 64), (3, 100), (5, 50)] {
            let d = directions(dim, count, 3);
            assert_eq!(d.len(), count);
            for v in &d {
                let n: f64 = v.iter().map(|x| x * x).sum();
                assert!((n - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn planar_grid_contains_axes() {
        let d = directions(2, 4096, 0);
        assert_eq!(d[0], vec![1.0, 0.0]);
        assert!((d[1024][0]).abs() < 1e-15 && (d[1024][1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn seeded_draws_are_reproducible() {
        assert_eq!(directions(4, 10, 11), directions(4, 10, 11));
        assert_ne!(directions(4, 10, 11), directions(4, 10, 12));
    }
}

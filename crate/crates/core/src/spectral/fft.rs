use std::sync::Arc;

use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::{Complex, GridSpec};

/// Separable n-dimensional DFT on a [`GridSpec`] layout.
///
/// `forward` is unnormalised; `inverse` divides by `N^n`, so
/// `inverse(forward(f)) = f`.
pub struct NdFft {
    dim: usize,
    points: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl NdFft {
    pub fn new(g: &GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        NdFft {
            dim: g.dim,
            points: g.points,
            fwd: planner.plan_fft_forward(g.points),
            inv: planner.plan_fft_inverse(g.points),
        }
    }

    pub fn forward(&self, data: &mut [Complex]) {
        self.run(data, &self.fwd);
    }

    pub fn inverse(&self, data: &mut [Complex]) {
        self.run(data, &self.inv);
        let scale = 1.0 / data.len() as f64;
        data.par_iter_mut().for_each(|z| *z *= scale);
    }

    fn run(&self, data: &mut [Complex], plan: &Arc<dyn Fft<f64>>) {
        let n = self.points;
        assert_eq!(data.len(), n.pow(self.dim as u32));
        // last axis: contiguous lines
        data.par_chunks_mut(n).for_each(|line| {
            let mut scratch = vec![Complex::default(); plan.get_inplace_scratch_len()];
            plan.process_with_scratch(line, &mut scratch);
        });
        for axis in (0..self.dim.saturating_sub(1)).rev() {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            let block = stride * n;
            data.par_chunks_mut(block).for_each(|blk| {
                let mut line = vec![Complex::default(); n];
                let mut scratch = vec![Complex::default(); plan.get_inplace_scratch_len()];
                for inner in 0..stride {
                    for (j, z) in line.iter_mut().enumerate() {
                        *z = blk[inner + j * stride];
                    }
                    plan.process_with_scratch(&mut line, &mut scratch);
                    for (j, z) in line.iter().enumerate() {
                        blk[inner + j * stride] = *z;
                    }
                }
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_dft(g: &GridSpec, f: &[Complex]) -> Vec<Complex> {
        let n = g.points as f64;
        (0..g.len())
            .map(|k| {
                let kk = g.unflatten(k);
                (0..g.len())
                    .map(|j| {
                        let jj = g.unflatten(j);
                        let phase: f64 = kk.iter().zip(&jj).map(|(a, b)| (a * b) as f64).sum();
                        f[j] * Complex::from_polar(1.0, -std::f64::consts::TAU * phase / n)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft_in_3d() {
        let g = make_grid(3, 4, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f: Vec<Complex> = (0..g.len())
            .map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let mut got = f.clone();
        NdFft::new(&g).forward(&mut got);
        for (a, b) in got.iter().zip(naive_dft(&g, &f)) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn round_trip() {
        let g = make_grid(2, 64, 3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f: Vec<Complex> = (0..g.len())
            .map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let mut h = f.clone();
        let fft = NdFft::new(&g);
        fft.forward(&mut h);
        fft.inverse(&mut h);
        let err = f.iter().zip(&h).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let scale = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err <= 1e-12 * scale);
    }
}

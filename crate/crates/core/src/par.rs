//! Thread-count independent reductions.

use rayon::prelude::*;

const CHUNK: usize = 4096;

/// Sum of `f(i)` over `0..len`, reduced in fixed chunks and then in order,
/// so the result does not depend on the thread pool size.
pub fn ordered_sum<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let chunks = len.div_ceil(CHUNK);
    let partial: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| (c * CHUNK..((c + 1) * CHUNK).min(len)).map(&f).sum())
        .collect();
    partial.into_iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_pool_sizes() {
        let f = |i: usize| ((i as f64) * 0.37).sin() * 1e-3 + 1.0 / (1.0 + i as f64);
        let reference = ordered_sum(100_003, f);
        for threads in [1, 3, 8] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let got = pool.install(|| ordered_sum(100_003, f));
            assert_eq!(got.to_bits(), reference.to_bits());
        }
    }
}

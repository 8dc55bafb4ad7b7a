use rayon::prelude::*;

use super::fft::NdFft;
use super::{Complex, Field, GridSpec, SpectralError};
use crate::par::ordered_sum;
use crate::symbol::SymbolPoly;

#[derive(Clone, Debug, PartialEq)]
pub struct WaveState {
    pub t: f64,
    pub u: Field,
    pub ut: Field,
}

/// `sin(wt)/w`, with a series branch for `|wt| < 1e-4`.
pub fn q_multiplier(w: f64, t: f64) -> f64 {
    let z = w * t;
    if z.abs() < 1e-4 {
        let z2 = z * z;
        t * (1.0 - z2 / 6.0 + z2 * z2 / 120.0)
    } else {
        (z).sin() / w
    }
}

/// `P` on the frequency lattice of `g`; fails on the first non-positive value.
fn lattice_symbol(p: &SymbolPoly, g: &GridSpec) -> Result<Vec<f64>, SpectralError> {
    if p.dim() != g.dim {
        return Err(SpectralError::DimensionMismatch {
            symbol: p.dim(),
            grid: g.dim,
        });
    }
    let vals: Vec<f64> = (0..g.len()).into_par_iter().map(|i| p.eval(&g.frequency(i))).collect();
    if let Some(i) = vals.iter().position(|&v| !(v > 0.0)) {
        return Err(SpectralError::NonPositiveSymbol {
            xi: g.frequency(i),
            value: vals[i],
        });
    }
    Ok(vals)
}

/// Spectral data for one pair of initial fields; evaluating at any `t`
/// costs one pointwise multiply and inverse transform per output field.
pub struct Propagator {
    grid: GridSpec,
    fft: NdFft,
    root: Vec<f64>,
    u0_hat: Field,
    u1_hat: Field,
}

impl Propagator {
    pub fn new(p: &SymbolPoly, g: &GridSpec, u0: &[Complex], u1: &[Complex]) -> Result<Self, SpectralError> {
        g.check_field(u0)?;
        g.check_field(u1)?;
        let root: Vec<f64> = lattice_symbol(p, g)?.into_iter().map(f64::sqrt).collect();
        let fft = NdFft::new(g);
        let mut u0_hat = u0.to_vec();
        let mut u1_hat = u1.to_vec();
        fft.forward(&mut u0_hat);
        fft.forward(&mut u1_hat);
        Ok(Propagator {
            grid: g.clone(),
            fft,
            root,
            u0_hat,
            u1_hat,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    fn apply<F>(&self, f: F) -> Field
    where
        F: Fn(usize) -> Complex + Sync + Send,
    {
        let mut out: Field = (0..self.grid.len()).into_par_iter().map(f).collect();
        self.fft.inverse(&mut out);
        out
    }

    /// `U(t) = F⁻¹[cos(√P t) F u0]`.
    pub fn cos_part(&self, t: f64) -> Field {
        self.apply(|i| self.u0_hat[i] * (self.root[i] * t).cos())
    }

    /// `V(t) = F⁻¹[Q(t, ξ) F u1]`.
    pub fn sin_part(&self, t: f64) -> Field {
        self.apply(|i| self.u1_hat[i] * q_multiplier(self.root[i], t))
    }

    pub fn state(&self, t: f64) -> WaveState {
        let u = self.apply(|i| {
            let w = self.root[i];
            self.u0_hat[i] * (w * t).cos() + self.u1_hat[i] * q_multiplier(w, t)
        });
        let ut = self.apply(|i| {
            let w = self.root[i];
            let (s, c) = (w * t).sin_cos();
            self.u0_hat[i] * (-w * s) + self.u1_hat[i] * c
        });
        WaveState { t, u, ut }
    }
}

/// One-shot solution of the Cauchy problem at time `t`.
pub fn propagate(
    u0: &[Complex],
    u1: &[Complex],
    t: f64,
    p: &SymbolPoly,
    g: &GridSpec,
) -> Result<WaveState, SpectralError> {
    Ok(Propagator::new(p, g, u0, u1)?.state(t))
}

/// `‖ut‖² + ‖√P û‖²` with Plancherel-consistent weights:
/// `Δx^n [Σ|ut|² + N^{-n} Σ P |DFT u|²]`.
pub fn energy(s: &WaveState, p: &SymbolPoly, g: &GridSpec) -> Result<f64, SpectralError> {
    g.check_field(&s.u)?;
    g.check_field(&s.ut)?;
    let sym = lattice_symbol(p, g)?;
    let mut uh = s.u.clone();
    NdFft::new(g).forward(&mut uh);
    let kinetic = ordered_sum(g.len(), |i| s.ut[i].norm_sqr());
    let potential = ordered_sum(g.len(), |i| sym[i] * uh[i].norm_sqr());
    Ok(g.cell_volume() * (kinetic + potential / g.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use crate::symbol::parse_symbol;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(g: &GridSpec, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..g.len())
            .map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect()
    }

    fn max_diff(a: &[Complex], b: &[Complex]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn time_zero_returns_data() {
        let g = make_grid(2, 32, 4.0).unwrap();
        let p = parse_symbol("1 + |x|^4", 2).unwrap();
        let (u0, u1) = (random_field(&g, 1), random_field(&g, 2));
        let s = propagate(&u0, &u1, 0.0, &p, &g).unwrap();
        assert!(max_diff(&s.u, &u0) < 1e-13);
        assert!(max_diff(&s.ut, &u1) < 1e-13);
    }

    #[test]
    fn cosine_part_is_even_in_time() {
        let g = make_grid(2, 32, 4.0).unwrap();
        let p = parse_symbol("1 + |x|^4", 2).unwrap();
        let u0 = random_field(&g, 3);
        let zero = vec![Complex::default(); g.len()];
        let prop = Propagator::new(&p, &g, &u0, &zero).unwrap();
        assert!(max_diff(&prop.state(0.7).u, &prop.state(-0.7).u) < 1e-13);
    }

    #[test]
    fn single_mode_closed_form() {
        let g = make_grid(2, 32, std::f64::consts::PI).unwrap();
        let p = parse_symbol("1 + |x|^4", 2).unwrap();
        let k = [2.0, -3.0];
        let mode = g.sample(|x| Complex::from_polar(1.0, k[0] * x[0] + k[1] * x[1]));
        let zero = vec![Complex::default(); g.len()];
        let w = p.eval(&k).sqrt();
        for t in [0.3, 1.0, 10.0] {
            let s = propagate(&mode, &zero, t, &p, &g).unwrap();
            let expect: Vec<Complex> = mode.iter().map(|z| z * (w * t).cos()).collect();
            assert!(max_diff(&s.u, &expect) < 1e-12);
            let e = energy(&s, &p, &g).unwrap();
            let exact = p.eval(&k) * (2.0 * std::f64::consts::PI).powi(2);
            assert!((e - exact).abs() < 1e-10 * exact);
        }
    }

    #[test]
    fn rejects_nonpositive_symbol() {
        let g = make_grid(2, 8, 1.0).unwrap();
        let p = parse_symbol("|x|^4", 2).unwrap();
        let f = random_field(&g, 4);
        match propagate(&f, &f, 1.0, &p, &g) {
            Err(SpectralError::NonPositiveSymbol { xi, value }) => {
                assert_eq!(xi, vec![0.0, 0.0]);
                assert_eq!(value, 0.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn small_argument_branch_is_continuous() {
        for w in [1e-9, 1e-6, 1e-3] {
            for t in [0.05, 0.1] {
                let z = w * t;
                let below = q_multiplier(w, t);
                assert!((below - z.sin() / w).abs() <= 1e-15 * t.max(1.0));
            }
        }
        assert_eq!(q_multiplier(0.0, 2.0), 2.0);
    }

    #[test]
    fn energy_of_zero_state() {
        let g = make_grid(2, 16, 1.0).unwrap();
        let p = parse_symbol("1 + |x|^4", 2).unwrap();
        let z = vec![Complex::default(); g.len()];
        let s = WaveState { t: 0.0, u: z.clone(), ut: z };
        assert_eq!(energy(&s, &p, &g).unwrap(), 0.0);
    }
}

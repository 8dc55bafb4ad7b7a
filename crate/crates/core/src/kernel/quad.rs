//! Adaptive Gauss–Kronrod quadrature and polynomial extrapolation.

use crate::spectral::Complex;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
/// Bisection depth at which a panel is accepted regardless of its estimate.
const MAX_DEPTH: u32 = 24;

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod rule on `[a, b]`: `(kronrod, |kronrod - gauss|, ∫|f|)`.
fn gk15<F: Fn(f64) -> Complex>(f: &F, a: f64, b: f64) -> (Complex, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx), f(c + dx));
        k += (f1 + f2) * WGK[j];
        abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            g += (f1 + f2) * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm(), abs * h.abs())
}

/// Adaptive bisection of `[a, b]` until each piece meets
/// `err <= rel * ∫|f| + abs`. Returns `(value, error estimate)`.
pub fn integrate<F: Fn(f64) -> Complex>(f: &F, a: f64, b: f64, rel: f64, abs: f64) -> (Complex, f64) {
    let mut stack = vec![(a, b, 0u32)];
    let mut total = Complex::default();
    let mut err = 0.0;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, e, mass) = gk15(f, lo, hi);
        if e <= rel * mass + abs || depth >= MAX_DEPTH {
            total += v;
            err += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    (total, err)
}

/// Neville evaluation at 0 of the interpolating polynomial through `(x_i, y_i)`.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[Complex]) -> Complex {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty());
    let mut p = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            p[i] = (p[i + 1] * xi - p[i] * xj) / (xi - xj);
        }
    }
    p[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_oscillatory_exponential() {
        // ∫_0^{10} e^{i 7 r} dr = (e^{70 i} - 1) / (7 i)
        let f = |r: f64| Complex::from_polar(1.0, 7.0 * r);
        let (v, e) = integrate(&f, 0.0, 10.0, 1e-13, 0.0);
        let exact = (Complex::from_polar(1.0, 70.0) - 1.0) / Complex::new(0.0, 7.0);
        assert!((v - exact).norm() < 1e-13);
        assert!(e < 1e-11);
    }

    #[test]
    fn integrates_gaussian() {
        let f = |r: f64| Complex::new((-r * r).exp(), 0.0);
        let (v, _) = integrate(&f, 0.0, 12.0, 1e-14, 0.0);
        assert!((v.re - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn neville_reproduces_polynomials() {
        let xs = [0.2, 0.1, 0.05, 0.025];
        let poly = |x: f64| Complex::new(1.0 - 2.0 * x + 3.0 * x * x - x * x * x, 0.5 * x);
        let ys: Vec<Complex> = xs.iter().map(|&x| poly(x)).collect();
        let v = extrapolate_to_zero(&xs, &ys);
        assert!((v - Complex::new(1.0, 0.0)).norm() < 1e-12);
    }
}

//! Bessel functions `J_0, J_1, J_2` and the spherical averages
//! `Λ_n(z) = ∫_{S^{n-1}} e^{i z ω_1} dω` for `n <= 6`.

use std::f64::consts::{PI, TAU};

const SERIES_LIMIT: f64 = 4.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

/// `J_ν(z) / z^ν` by its power series; accurate for `|z| <= 4`.
fn series_scaled(nu: u32, z: f64) -> f64 {
    let q = -0.25 * z * z;
    let mut term = 1.0 / (1..=nu).map(f64::from).product::<f64>() / 2f64.powi(nu as i32);
    let mut sum = term;
    for k in 1..60 {
        term *= q / (k as f64 * (k + nu) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `J_ν(z) = (1/2π) ∫_0^{2π} cos(νθ - z sin θ) dθ`, periodic trapezoid.
fn integral(nu: u32, z: f64) -> f64 {
    let m = 96;
    (0..m)
        .map(|k| {
            let th = TAU * k as f64 / m as f64;
            (nu as f64 * th - z * th.sin()).cos()
        })
        .sum::<f64>()
        / m as f64
}

/// Hankel asymptotic expansion, for `z > 25`.
fn asymptotic(nu: u32, z: f64) -> f64 {
    let mu = 4.0 * (nu * nu) as f64;
    let chi = z - (nu as f64 * 0.5 + 0.25) * PI;
    let (mut p, mut q) = (0.0, 0.0);
    let mut a = 1.0;
    for k in 0..24 {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            a *= (mu - odd * odd) / (k as f64 * 8.0 * z);
        }
        let contrib = match k % 4 {
            0 => (a, 0.0),
            1 => (0.0, a),
            2 => (-a, 0.0),
            _ => (0.0, -a),
        };
        p += contrib.0;
        q += contrib.1;
        if a.abs() < 1e-17 {
            break;
        }
    }
    (2.0 / (PI * z)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// `J_ν(z)` for `ν in {0, 1, 2}` and real `z`.
pub fn bessel_j(nu: u32, z: f64) -> f64 {
    let sign = if z < 0.0 && nu % 2 == 1 { -1.0 } else { 1.0 };
    let a = z.abs();
    sign * if a <= SERIES_LIMIT {
        series_scaled(nu, a) * a.powi(nu as i32)
    } else if a <= ASYMPTOTIC_LIMIT {
        integral(nu, a)
    } else {
        asymptotic(nu, a)
    }
}

/// `J_ν(z) / z^ν`, finite at `z = 0`.
fn bessel_scaled(nu: u32, z: f64) -> f64 {
    let a = z.abs();
    if a <= SERIES_LIMIT {
        series_scaled(nu, a)
    } else {
        bessel_j(nu, a) / a.powi(nu as i32)
    }
}

/// `Λ_n(z) = ∫_{S^{n-1}} e^{i z ω_1} dω`, so `∫_{R^n} f(|ξ|) e^{i x·ξ} dξ =
/// ∫_0^∞ f(r) Λ_n(r|x|) r^{n-1} dr`.
pub fn sphere_average(n: usize, z: f64) -> f64 {
    let z = z.abs();
    match n {
        1 => 2.0 * z.cos(),
        2 => TAU * bessel_j(0, z),
        3 => {
            if z < 1e-4 {
                4.0 * PI * (1.0 - z * z / 6.0)
            } else {
                4.0 * PI * z.sin() / z
            }
        }
        4 => 4.0 * PI * PI * bessel_scaled(1, z),
        5 => {
            let s = if z < 0.05 {
                let z2 = z * z;
                1.0 / 3.0 - z2 / 30.0 + z2 * z2 / 840.0 - z2 * z2 * z2 / 45360.0
            } else {
                (z.sin() - z * z.cos()) / (z * z * z)
            };
            8.0 * PI * PI * s
        }
        6 => 8.0 * PI * PI * PI * bessel_scaled(2, z),
        _ => panic!("sphere_average supports 1 <= n <= 6, got {n}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from standard tables.
    const TABLE: &[(u32, f64, f64)] = &[
        (0, 1.0, 0.765_197_686_557_966_6),
        (0, 5.0, -0.177_596_771_314_338_3),
        (0, 30.0, -0.086_367_983_581_040_2),
        (1, 2.5, 0.497_094_102_464_274_4),
        (1, 10.0, 0.043_472_746_168_861_6),
        (1, 50.0, -0.097_511_828_125_175_14),
        (2, 3.0, 0.486_091_260_585_891_2),
        (2, 20.0, -0.160_341_351_922_998_23),
        (2, 100.0, -0.021_528_757_344_505_36),
    ];

    #[test]
    fn matches_tables() {
        for &(nu, z, want) in TABLE {
            let got = bessel_j(nu, z);
            assert!((got - want).abs() < 1e-13, "J{nu}({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn branches_agree_at_switch_points() {
        for nu in 0..3 {
            for z in [SERIES_LIMIT, ASYMPTOTIC_LIMIT] {
                let a = integral(nu, z);
                let b = if z == SERIES_LIMIT {
                    series_scaled(nu, z) * z.powi(nu as i32)
                } else {
                    asymptotic(nu, z)
                };
                assert!((a - b).abs() < 1e-13, "nu={nu} z={z}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn sphere_average_at_origin_is_surface_area() {
        let areas = [2.0, TAU, 4.0 * PI, 2.0 * PI * PI, 8.0 * PI * PI / 3.0, PI.powi(3)];
        for (n, a) in (1..=6).zip(areas) {
            assert!((sphere_average(n, 0.0) - a).abs() < 1e-13 * a);
        }
    }

    #[test]
    fn odd_dimension_branches_are_continuous() {
        for (n, z) in [(3, 1e-4), (5, 0.05)] {
            let below = sphere_average(n, z * (1.0 - 1e-9));
            let above = sphere_average(n, z * (1.0 + 1e-9));
            assert!((below - above).abs() < 1e-9 * below.abs());
        }
    }

    #[test]
    fn recurrence_holds_across_branches() {
        // J_0 + J_2 = (2/z) J_1
        for z in [0.3, 3.9, 4.1, 12.0, 24.9, 25.1, 80.0] {
            let lhs = bessel_j(0, z) + bessel_j(2, z);
            let rhs = 2.0 / z * bessel_j(1, z);
            assert!((lhs - rhs).abs() < 1e-13, "z={z}");
        }
    }
}

//! Reference computations shared by the integration tests. Nothing here goes
//! through the library's operator or its quadrature.

#![allow(dead_code)]

use statrs::function::gamma::gamma;

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(order);
    for i in 0..order {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=order {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = order as f64 * (z * p1 - p0) / (z * z - 1.0);
            let step = p1 / dp;
            z -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.push((0.5 * (1.0 - z), 0.5 * w));
    }
    rule
}

/// Composite Gauss–Legendre on `[a, b]` with `panels` equal panels.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let rule = gauss_legendre(20);
    let width = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let left = a + k as f64 * width;
            rule.iter()
                .map(|(t, w)| w * f(left + t * width))
                .sum::<f64>()
                * width
        })
        .sum()
}

/// Riemann–Liouville integral of order `q` of `u` at `x`, after the
/// substitution `x - ξ = x t^{1/q}` removes the kernel singularity.
pub fn riemann_liouville(q: f64, u: impl Fn(f64) -> f64, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let inner = integrate(|t| u(x * (1.0 - t.powf(1.0 / q))), 0.0, 1.0, 16);
    x.powf(q) / gamma(q + 1.0) * inner
}

pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

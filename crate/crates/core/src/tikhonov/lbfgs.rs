//! Limited-memory BFGS with a weak Wolfe bracketing line search.

use std::collections::VecDeque;

const ARMIJO: f64 = 1e-4;
const CURVATURE: f64 = 0.9;
const LINE_SEARCH_STEPS: usize = 60;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Settings {
    pub memory: usize,
    pub max_iterations: usize,
    /// Stop once an iteration lowers `f` by less than this fraction of `max(|f|, 1)`.
    pub rel_decrease: f64,
}

#[derive(Clone, Debug)]
pub(crate) struct Outcome {
    pub x: Vec<f64>,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimizes `f`, which returns the value and writes the gradient. A
/// non-finite value marks a point outside the domain.
pub(crate) fn minimize<F>(mut f: F, x0: Vec<f64>, settings: Settings) -> Outcome
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let n = x0.len();
    let mut x = x0;
    let mut g = vec![0.0; n];
    let mut fx = f(&x, &mut g);
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut iterations = 0;
    if !fx.is_finite() {
        return Outcome { x, iterations };
    }

    let mut trial = vec![0.0; n];
    let mut g_trial = vec![0.0; n];
    while iterations < settings.max_iterations {
        let gmax = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if gmax == 0.0 {
            break;
        }
        let mut d = direction(&g, &history);
        let mut gd = dot(&g, &d);
        if gd.is_nan() || gd >= 0.0 {
            history.clear();
            d = g.iter().map(|v| -v).collect();
            gd = dot(&g, &d);
        }
        let t0 = if history.is_empty() {
            (1.0 / gmax).min(1.0)
        } else {
            1.0
        };

        let mut lo = 0.0;
        let mut hi = f64::INFINITY;
        let mut t = t0;
        let mut accepted: Option<(f64, f64)> = None;
        let mut fallback: Option<(f64, f64, Vec<f64>)> = None;
        for _ in 0..LINE_SEARCH_STEPS {
            trial
                .iter_mut()
                .zip(x.iter().zip(&d))
                .for_each(|(y, (xi, di))| *y = xi + t * di);
            let ft = f(&trial, &mut g_trial);
            if ft.is_nan() || ft > fx + ARMIJO * t * gd {
                hi = t;
            } else if dot(&g_trial, &d) < CURVATURE * gd {
                lo = t;
                fallback = Some((t, ft, g_trial.clone()));
            } else {
                accepted = Some((t, ft));
                break;
            }
            t = if hi.is_finite() {
                0.5 * (lo + hi)
            } else {
                2.0 * lo
            };
            if hi.is_finite() && hi - lo <= 1e-16 * hi {
                break;
            }
        }
        let (t, ft) = match (accepted, fallback) {
            (Some(a), _) => a,
            (None, Some((t, ft, gt))) => {
                g_trial = gt;
                (t, ft)
            }
            (None, None) => break,
        };
        iterations += 1;

        let s: Vec<f64> = d.iter().map(|di| t * di).collect();
        let y: Vec<f64> = g_trial.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        x.iter_mut().zip(&s).for_each(|(xi, si)| *xi += si);
        std::mem::swap(&mut g, &mut g_trial);
        let decrease = fx - ft;
        fx = ft;
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if history.len() == settings.memory {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }
        if decrease <= settings.rel_decrease * fx.abs().max(1.0) {
            break;
        }
    }
    Outcome { x, iterations }
}

/// Two-loop recursion for `-H g`.
fn direction(g: &[f64], history: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q: Vec<f64> = g.iter().map(|v| -v).collect();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, rho) in history.iter().rev() {
        let a = rho * dot(s, &q);
        q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
        alphas.push(a);
    }
    if let Some((s, y, _)) = history.back() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|qi| *qi *= gamma);
    }
    for ((s, y, rho), a) in history.iter().zip(alphas.iter().rev()) {
        let b = rho * dot(y, &q);
        q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64], g: &mut [f64]| {
            let (a, b) = (x[0], x[1]);
            g[0] = -2.0 * (1.0 - a) - 400.0 * a * (b - a * a);
            g[1] = 200.0 * (b - a * a);
            (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2)
        };
        let out = minimize(
            f,
            vec![-1.2, 1.0],
            Settings {
                memory: 10,
                max_iterations: 500,
                rel_decrease: 0.0,
            },
        );
        assert!((out.x[0] - 1.0).abs() < 1e-6 && (out.x[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn stops_at_stationary_start() {
        let out = minimize(
            |x: &[f64], g: &mut [f64]| {
                g[0] = 2.0 * x[0];
                x[0] * x[0]
            },
            vec![0.0],
            Settings {
                memory: 5,
                max_iterations: 100,
                rel_decrease: 0.0,
            },
        );
        assert_eq!(out.iterations, 0);
        assert_eq!(out.x, vec![0.0]);
    }
}

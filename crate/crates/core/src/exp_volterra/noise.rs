use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::banach_scale::{sup_norm, GridFunction};
use crate::error::{domain, Result};

/// Shape of the data perturbation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseKind {
    /// Independent signs `±1` at every grid point.
    #[default]
    RandomSign,
    /// Gaussian bump `exp(-(x-c)²/(2 width²))` with a seeded centre `c ∈ [0.3, 0.7]`.
    SmoothBump { width: f64 },
}

/// A deterministic perturbation of sup norm `delta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub delta: f64,
    pub kind: NoiseKind,
    pub seed: u64,
}

impl NoiseSpec {
    /// The perturbation `η = δ ζ / ‖ζ‖`; its sup norm is exactly `δ`.
    pub fn perturbation(&self, n: usize) -> Result<GridFunction> {
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(domain(
                "delta",
                self.delta,
                "noise level must be non-negative",
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let h = 1.0 / (n.max(2) - 1) as f64;
        let shape: Vec<f64> = match self.kind {
            NoiseKind::RandomSign => (0..n)
                .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
                .collect(),
            NoiseKind::SmoothBump { width } => {
                if !(width > 0.0 && width.is_finite()) {
                    return Err(domain("width", width, "bump width must be positive"));
                }
                let centre = rng.gen_range(0.3..=0.7);
                (0..n)
                    .map(|i| {
                        let d = i as f64 * h - centre;
                        (-d * d / (2.0 * width * width)).exp()
                    })
                    .collect()
            }
        };
        let peak = sup_norm(&shape);
        GridFunction::new(shape.iter().map(|z| self.delta * (z / peak)).collect())
    }
}

/// `f^δ = f† + η`. Where rounding would push `|f^δ - f†|` above `δ`, the
/// sample is moved one ulp back toward `f†`, so `‖f^δ - f†‖ ≤ δ` always holds.
pub fn add_noise(f_true: &GridFunction, spec: &NoiseSpec) -> Result<GridFunction> {
    let eta = spec.perturbation(f_true.len())?;
    if spec.delta == 0.0 {
        return Ok(f_true.clone());
    }
    f_true.zip_with(&eta, |f, e| {
        let g = f + e;
        if (g - f).abs() <= spec.delta {
            g
        } else if g > f {
            g.next_down()
        } else {
            g.next_up()
        }
    })
}

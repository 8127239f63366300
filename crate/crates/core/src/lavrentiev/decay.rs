use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::banach_scale::{sup_norm, GridFunction, QuadratureConfig};
use crate::error::{domain, Result};
use crate::fit::fit_slope_above_floor;
use crate::lavrentiev::RegularizerFamily;

/// Probe functions used to estimate sup-norm operator norms from below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProbeConfig {
    /// Number of seeded random probes, uniform in `[-1, 1]` and scaled to unit norm.
    pub random: usize,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            random: 100,
            seed: 0,
        }
    }
}

/// Unit-norm probes: `1`, `x`, sign changes at `1/4, 1/2, 3/4`, the
/// alternating function, then `cfg.random` seeded random functions.
pub fn probe_functions(n: usize, cfg: &ProbeConfig) -> Result<Vec<GridFunction>> {
    let mut probes = vec![
        GridFunction::constant(n, 1.0)?,
        GridFunction::from_fn(n, |x| x)?,
    ];
    for c in [0.25, 0.5, 0.75] {
        probes.push(GridFunction::from_fn(
            n,
            |x| if x < c { 1.0 } else { -1.0 },
        )?);
    }
    probes.push(GridFunction::new(
        (0..n)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect(),
    )?);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.random {
        let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let norm = sup_norm(&raw);
        probes.push(GridFunction::new(raw.iter().map(|v| v / norm).collect())?);
    }
    Ok(probes)
}

/// One row of a [`DecayReport`]; serializes as `beta,norm,ratio`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub beta: f64,
    pub norm: f64,
    pub ratio: f64,
}

/// Sampled `‖S_β G^p‖` over a list of `β`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub p: f64,
    pub rows: Vec<DecayRow>,
    /// Largest `norm / β^p`.
    pub max_ratio: f64,
    /// Log-log slope of `norm` against `β`, if at least three norms clear the noise floor.
    pub fitted_slope: Option<f64>,
}

impl DecayReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn check_betas(betas: &[f64]) -> Result<()> {
    if betas.is_empty() {
        return Err(domain("betas", 0.0, "need at least one value"));
    }
    for (i, &b) in betas.iter().enumerate() {
        if !(b > 0.0 && b.is_finite()) {
            return Err(domain("beta", b, "must be positive and finite"));
        }
        if i > 0 && b >= betas[i - 1] {
            return Err(domain("beta", b, "values must be strictly decreasing"));
        }
    }
    Ok(())
}

/// Estimates `‖S_β G^p‖` for each `β` as the largest `‖S_β G^p u‖` over the probes.
pub fn decay_check(
    fam: &RegularizerFamily,
    p: f64,
    betas: &[f64],
    probes: &ProbeConfig,
    cfg: &QuadratureConfig,
) -> Result<DecayReport> {
    if !(p >= 0.0 && p <= fam.saturation()) {
        return Err(domain("p", p, "must lie in [0, m] (saturation)"));
    }
    check_betas(betas)?;
    let op = fam.operator();
    let n = op.len();
    let mut norms = vec![0.0f64; betas.len()];
    let mut out = vec![0.0; n];
    for u in probe_functions(n, probes)? {
        let z = op.fractional_power(p, &u, cfg)?;
        for (norm, &beta) in norms.iter_mut().zip(betas) {
            fam.s_slice(beta, z.values(), &mut out);
            *norm = norm.max(sup_norm(&out));
        }
    }
    let rows: Vec<DecayRow> = betas
        .iter()
        .zip(&norms)
        .map(|(&beta, &norm)| DecayRow {
            beta,
            norm,
            ratio: norm / beta.powf(p),
        })
        .collect();
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.beta, r.norm)).collect();
    Ok(DecayReport {
        p,
        rows,
        max_ratio,
        fitted_slope: fit_slope_above_floor(&points).map(|f| f.slope),
    })
}

//! The iterated Lavrentiev family `R_β`, its companion `S_β = I - R_β G`,
//! operator-norm sampling and auxiliary elements.

mod auxiliary;
mod decay;

pub use auxiliary::{eval_g, make_aux, AuxiliaryElement, GRow, GTable};
pub use decay::{decay_check, probe_functions, DecayReport, DecayRow, ProbeConfig};

use crate::banach_scale::{check_beta, GridFunction, ScaleOperator};
use crate::error::{domain, Result};

/// Lavrentiev's `m`-times iterated method on a [`ScaleOperator`]:
/// `(G + βI) v_k = β v_{k-1} + f`, `v_0 = 0`, `R_β f = v_m`,
/// with companion `S_β = β^m (G + βI)^{-m}`. Its saturation is `m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegularizerFamily {
    op: ScaleOperator,
    m: usize,
}

impl RegularizerFamily {
    pub fn new(op: ScaleOperator, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(domain("m", 0.0, "iteration count must be at least 1"));
        }
        Ok(Self { op, m })
    }

    pub fn operator(&self) -> &ScaleOperator {
        &self.op
    }

    pub fn iterations(&self) -> usize {
        self.m
    }

    /// Qualification `p_0 = m`.
    pub fn saturation(&self) -> f64 {
        self.m as f64
    }

    /// `c*` in `‖R_β‖ ≤ c*/β`, equal to `m κ*`.
    pub fn regularizer_bound(&self) -> f64 {
        self.m as f64 * self.op.kappa_star()
    }

    /// `c_p` in `‖S_β G^p‖ ≤ c_p β^p`: `(κ*+1)^m` for integer `p`, otherwise
    /// `2 (κ*+1)^{m+1}`.
    pub fn decay_constant(&self, p: f64) -> f64 {
        let base = self.op.kappa_star() + 1.0;
        if p.fract() == 0.0 {
            base.powi(self.m as i32)
        } else {
            2.0 * base.powi(self.m as i32 + 1)
        }
    }

    pub fn apply_r(&self, beta: f64, f: &GridFunction) -> Result<GridFunction> {
        check_beta(beta)?;
        f.check_len(self.op.len())?;
        let mut out = vec![0.0; f.len()];
        self.r_slice(beta, f.values(), &mut out);
        Ok(GridFunction::from_raw(out))
    }

    pub fn apply_s(&self, beta: f64, f: &GridFunction) -> Result<GridFunction> {
        check_beta(beta)?;
        f.check_len(self.op.len())?;
        let mut out = vec![0.0; f.len()];
        self.s_slice(beta, f.values(), &mut out);
        Ok(GridFunction::from_raw(out))
    }

    pub(crate) fn r_slice(&self, beta: f64, f: &[f64], out: &mut [f64]) {
        let mut rhs = vec![0.0; f.len()];
        out.fill(0.0);
        for _ in 0..self.m {
            rhs.iter_mut()
                .zip(out.iter().zip(f))
                .for_each(|(r, (v, f))| *r = beta * v + f);
            self.op.resolvent_slice(beta, &rhs, out);
        }
    }

    pub(crate) fn s_slice(&self, beta: f64, f: &[f64], out: &mut [f64]) {
        let mut rhs = f.to_vec();
        for k in 0..self.m {
            if k > 0 {
                rhs.copy_from_slice(out);
            }
            out.fill(0.0);
            self.op.resolvent_accumulate(beta, &rhs, beta, out);
        }
    }
}

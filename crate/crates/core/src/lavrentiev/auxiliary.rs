use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::banach_scale::{check_beta, GridFunction, QuadratureConfig};
use crate::error::{domain, Error, Result};
use crate::fit::fit_slope_above_floor;
use crate::lavrentiev::RegularizerFamily;

/// `u_aux = ū + R_β G (u† - ū) = u† - S_β (u† - ū)` with its gap measures.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuxiliaryElement {
    pub beta: f64,
    pub u_aux: GridFunction,
    /// `R_β (u† - ū)`, so that `u_aux = ū + G · witness`.
    pub witness: GridFunction,
    /// `‖u_aux - u†‖ = ‖S_β (u† - ū)‖`.
    pub residual_to_truth: f64,
    /// `‖G^a S_β (u† - ū)‖`.
    pub a_norm_gap: f64,
    /// `‖u_aux - ū‖_1 = ‖R_β (u† - ū)‖`.
    pub one_norm: f64,
}

/// Builds the auxiliary element for the initial guess `ū = G · u_bar_witness`.
///
/// Both representations are computed and must agree to `1e-9` relative to the
/// data scale, otherwise [`Error::Inconsistent`] is returned.
pub fn make_aux(
    fam: &RegularizerFamily,
    beta: f64,
    u_true: &GridFunction,
    u_bar_witness: &GridFunction,
    a: f64,
    cfg: &QuadratureConfig,
) -> Result<AuxiliaryElement> {
    check_beta(beta)?;
    check_a(a)?;
    let op = fam.operator();
    let u_bar = op.apply(u_bar_witness)?;
    let gap = u_true.zip_with(&u_bar, |t, b| t - b)?;

    let defect = fam.apply_s(beta, &gap)?;
    let witness = fam.apply_r(beta, &gap)?;
    let u_aux = &u_bar + &op.apply(&witness)?;
    let via_rg = &u_bar + &fam.apply_r(beta, &op.apply(&gap)?)?;
    let via_s = u_true - &defect;

    let scale = 1f64.max(u_true.sup_norm()).max(u_bar.sup_norm());
    let mismatch = via_rg.distance(&via_s)?.max(u_aux.distance(&via_rg)?);
    if mismatch > 1e-9 * scale {
        return Err(Error::Inconsistent(format!(
            "auxiliary element representations differ by {mismatch:e} at beta = {beta}"
        )));
    }

    Ok(AuxiliaryElement {
        beta,
        residual_to_truth: defect.sup_norm(),
        a_norm_gap: op.fractional_power(a, &defect, cfg)?.sup_norm(),
        one_norm: witness.sup_norm(),
        u_aux,
        witness,
    })
}

fn check_a(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(domain("a", a, "degree of ill-posedness must be positive"))
    }
}

/// One row of a [`GTable`]; serializes as `beta,g1,g2,g3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GRow {
    pub beta: f64,
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
}

/// The decay functions `g1 = ‖S_β d‖`, `g2 = β^{-a} ‖G^a S_β d‖`, `g3 = β ‖R_β d‖`
/// with `d = u† - ū`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GTable {
    pub rows: Vec<GRow>,
}

impl GTable {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Log-log slopes of `g1`, `g2`, `g3` against `β`.
    pub fn slopes(&self) -> [Option<f64>; 3] {
        let column = |f: fn(&GRow) -> f64| {
            let pts: Vec<(f64, f64)> = self.rows.iter().map(|r| (r.beta, f(r))).collect();
            fit_slope_above_floor(&pts).map(|fit| fit.slope)
        };
        [column(|r| r.g1), column(|r| r.g2), column(|r| r.g3)]
    }
}

/// Evaluates `g1, g2, g3` at each `β`. Needs saturation `m ≥ 1 + a`.
pub fn eval_g(
    fam: &RegularizerFamily,
    betas: &[f64],
    u_true: &GridFunction,
    u_bar_witness: &GridFunction,
    a: f64,
    cfg: &QuadratureConfig,
) -> Result<GTable> {
    check_a(a)?;
    if fam.saturation() < 1.0 + a {
        return Err(domain(
            "m",
            fam.saturation(),
            "saturation must be at least 1 + a",
        ));
    }
    let op = fam.operator();
    let gap = u_true.zip_with(&op.apply(u_bar_witness)?, |t, b| t - b)?;
    let rows = betas
        .iter()
        .map(|&beta| {
            check_beta(beta)?;
            let defect = fam.apply_s(beta, &gap)?;
            let smoothed = op.fractional_power(a, &defect, cfg)?;
            Ok(GRow {
                beta,
                g1: defect.sup_norm(),
                g2: smoothed.sup_norm() / beta.powf(a),
                g3: beta * fam.apply_r(beta, &gap)?.sup_norm(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banach_scale::ScaleOperator;

    #[test]
    fn truth_equal_to_guess_gives_zero_gaps() {
        let op = ScaleOperator::new(64).unwrap();
        let fam = RegularizerFamily::new(op, 2).unwrap();
        let w = op.sample(|x| 1.0 - x).unwrap();
        let truth = op.apply(&w).unwrap();
        let cfg = QuadratureConfig::default();
        let aux = make_aux(&fam, 0.01, &truth, &w, 1.0, &cfg).unwrap();
        assert_eq!(aux.residual_to_truth, 0.0);
        assert_eq!(aux.a_norm_gap, 0.0);
        assert_eq!(aux.one_norm, 0.0);
        let table = eval_g(&fam, &[0.1, 0.01], &truth, &w, 1.0, &cfg).unwrap();
        assert!(table
            .rows
            .iter()
            .all(|r| r.g1 == 0.0 && r.g2 == 0.0 && r.g3 == 0.0));
    }

    #[test]
    fn saturation_is_enforced() {
        let op = ScaleOperator::new(16).unwrap();
        let fam = RegularizerFamily::new(op, 1).unwrap();
        let u = op.sample(|x| x).unwrap();
        let zero = GridFunction::zeros(16).unwrap();
        let cfg = QuadratureConfig::default();
        assert!(eval_g(&fam, &[0.1], &u, &zero, 1.0, &cfg).is_err());
    }

    #[test]
    fn csv_header() {
        let table = GTable {
            rows: vec![GRow {
                beta: 0.5,
                g1: 1.0,
                g2: 2.0,
                g3: 3.0,
            }],
        };
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .starts_with("beta,g1,g2,g3\n"));
    }
}

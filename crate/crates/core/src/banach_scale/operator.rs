use crate::banach_scale::GridFunction;
use crate::error::{domain, Error, Result};

const B1: f64 = 4.0 / 3.0;
const B2: f64 = -1.0 / 3.0;

/// The running-integral operator `(Gu)(x) = ∫_0^x u` on a uniform grid of `[0, 1]`.
///
/// The quadrature is the two-step backward differentiation rule with a
/// trapezoid first step:
///
/// ```text
/// y_0 = 0,   y_1 = h/2 (u_0 + u_1),
/// 3/2 y_i - 2 y_{i-1} + 1/2 y_{i-2} = h u_i     (i >= 2)
/// ```
///
/// It is lower triangular, integrates linear functions exactly and vanishes at
/// `x = 0`. Every operation here is `O(n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaleOperator {
    n: usize,
    h: f64,
}

impl ScaleOperator {
    /// Positive-type constant: `‖(G + βI)⁻¹‖ ≤ KAPPA_STAR / β` for all `β > 0`.
    pub const KAPPA_STAR: f64 = 2.0;

    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 grid points, got {n}"
            )));
        }
        Ok(Self {
            n,
            h: 1.0 / (n - 1) as f64,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false; the grid has at least two points.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mesh_width(&self) -> f64 {
        self.h
    }

    pub fn kappa_star(&self) -> f64 {
        Self::KAPPA_STAR
    }

    /// Samples `f` on this operator's grid.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Result<GridFunction> {
        GridFunction::from_fn(self.n, f)
    }

    pub fn apply(&self, u: &GridFunction) -> Result<GridFunction> {
        u.check_len(self.n)?;
        let mut out = vec![0.0; self.n];
        self.apply_slice(u.values(), &mut out);
        Ok(GridFunction::from_raw(out))
    }

    /// Transpose of [`ScaleOperator::apply`], used for gradients.
    pub fn apply_adjoint(&self, w: &GridFunction) -> Result<GridFunction> {
        w.check_len(self.n)?;
        let mut out = vec![0.0; self.n];
        self.adjoint_slice(w.values(), &mut out);
        Ok(GridFunction::from_raw(out))
    }

    /// Solves `(G + βI) v = f` by forward substitution.
    pub fn resolvent_solve(&self, beta: f64, f: &GridFunction) -> Result<GridFunction> {
        check_beta(beta)?;
        f.check_len(self.n)?;
        let mut out = vec![0.0; self.n];
        self.resolvent_slice(beta, f.values(), &mut out);
        Ok(GridFunction::from_raw(out))
    }

    pub(crate) fn apply_slice(&self, u: &[f64], out: &mut [f64]) {
        let h = self.h;
        let c = 2.0 * h / 3.0;
        out[0] = 0.0;
        out[1] = 0.5 * h * (u[0] + u[1]);
        for i in 2..self.n {
            out[i] = B1 * out[i - 1] + B2 * out[i - 2] + c * u[i];
        }
    }

    pub(crate) fn adjoint_slice(&self, w: &[f64], out: &mut [f64]) {
        let h = self.h;
        let c = 2.0 * h / 3.0;
        // Reverse sweep; `next1`/`next2` carry adjoint mass into y_{i-1}, y_{i-2}.
        let (mut next1, mut next2) = (0.0, 0.0);
        for i in (2..self.n).rev() {
            let ybar = w[i] + next1;
            out[i] = c * ybar;
            next1 = next2 + B1 * ybar;
            next2 = B2 * ybar;
        }
        let y1 = w[1] + next1;
        out[1] = 0.5 * h * y1;
        out[0] = 0.5 * h * y1;
    }

    pub(crate) fn resolvent_slice(&self, beta: f64, f: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        self.resolvent_accumulate(beta, f, 1.0, out);
    }

    /// `acc += weight · (G + βI)⁻¹ f` without allocating.
    pub(crate) fn resolvent_accumulate(&self, beta: f64, f: &[f64], weight: f64, acc: &mut [f64]) {
        let h = self.h;
        let c = 2.0 * h / 3.0;
        let inv_first = 1.0 / (beta + 0.5 * h);
        let inv = 1.0 / (beta + c);

        let v0 = f[0] / beta;
        let v1 = (f[1] - 0.5 * h * v0) * inv_first;
        acc[0] += weight * v0;
        acc[1] += weight * v1;
        let mut y2 = 0.0;
        let mut y1 = 0.5 * h * (v0 + v1);
        for i in 2..self.n {
            let hist = B1 * y1 + B2 * y2;
            let v = (f[i] - hist) * inv;
            acc[i] += weight * v;
            y2 = y1;
            y1 = hist + c * v;
        }
    }
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(domain("beta", beta, "must be positive and finite"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(op: &ScaleOperator) -> Vec<Vec<f64>> {
        let n = op.len();
        let mut cols = Vec::new();
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let mut out = vec![0.0; n];
            op.apply_slice(&e, &mut out);
            cols.push(out);
        }
        (0..n)
            .map(|i| (0..n).map(|j| cols[j][i]).collect())
            .collect()
    }

    #[test]
    fn integrates_linear_exactly() {
        let op = ScaleOperator::new(101).unwrap();
        let one = op.sample(|_| 1.0).unwrap();
        let x = op.sample(|x| x).unwrap();
        let g1 = op.apply(&one).unwrap();
        let gx = op.apply(&x).unwrap();
        for i in 0..op.len() {
            let xi = one.x(i);
            assert!((g1.values()[i] - xi).abs() < 1e-14);
            assert!((gx.values()[i] - xi * xi / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn adjoint_matches_transpose() {
        let op = ScaleOperator::new(9).unwrap();
        let m = dense(&op);
        let w: Vec<f64> = (0..9).map(|i| ((i * 7 % 5) as f64) - 2.0).collect();
        let mut out = vec![0.0; 9];
        op.adjoint_slice(&w, &mut out);
        for j in 0..9 {
            let expect: f64 = (0..9).map(|i| m[i][j] * w[i]).sum();
            assert!((out[j] - expect).abs() < 1e-14, "column {j}");
        }
    }

    #[test]
    fn resolvent_inverts_shifted_operator() {
        let op = ScaleOperator::new(64).unwrap();
        let f = op.sample(|x| (5.0 * x).cos() - x).unwrap();
        for beta in [1e-4, 0.03, 2.0] {
            let v = op.resolvent_solve(beta, &f).unwrap();
            let back = op.apply(&v).unwrap().add_scaled(beta, &v).unwrap();
            assert!(back.distance(&f).unwrap() < 1e-12 * v.sup_norm().max(1.0));
        }
    }

    #[test]
    fn resolvent_rejects_nonpositive_beta() {
        let op = ScaleOperator::new(8).unwrap();
        let f = op.sample(|_| 1.0).unwrap();
        assert!(op.resolvent_solve(0.0, &f).is_err());
        assert!(op.resolvent_solve(-1.0, &f).is_err());
    }

    #[test]
    fn two_point_grid() {
        let op = ScaleOperator::new(2).unwrap();
        let u = GridFunction::new(vec![1.0, 3.0]).unwrap();
        assert_eq!(op.apply(&u).unwrap().values(), &[0.0, 2.0]);
        let v = op.resolvent_solve(1.0, &u).unwrap();
        let back = op.apply(&v).unwrap().add_scaled(1.0, &v).unwrap();
        assert!(back.distance(&u).unwrap() < 1e-15);
    }
}

use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real function sampled at `x_i = i/(n-1)`, `i = 0..n`, measured in the sup norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct GridFunction {
    values: Vec<f64>,
}

impl GridFunction {
    /// Wraps sample values. Needs at least two points, all finite.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 points, got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "value at index {i} is not finite"
            )));
        }
        Ok(Self { values })
    }

    /// Samples `f` at the `n` grid points.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = 1.0 / (n.max(2) - 1) as f64;
        Self::new((0..n).map(|i| f(i as f64 * h)).collect())
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::constant(n, 0.0)
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::new(vec![c; n])
    }

    /// Used by internal kernels whose output is finite whenever their input is.
    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        debug_assert!(values.len() >= 2);
        Self { values }
    }

    /// Checks finiteness of a kernel result that might have overflowed.
    pub(crate) fn from_computed(values: Vec<f64>) -> Result<Self> {
        if values.iter().all(|v| v.is_finite()) {
            Ok(Self { values })
        } else {
            Err(Error::QuadratureFailure)
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; a grid function has at least two samples.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mesh_width(&self) -> f64 {
        1.0 / (self.len() - 1) as f64
    }

    /// Grid point `x_i`.
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.mesh_width()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn sup_norm(&self) -> f64 {
        sup_norm(&self.values)
    }

    /// Sup-norm distance to `other`.
    pub fn distance(&self, other: &GridFunction) -> Result<f64> {
        self.check_len(other.len())?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise combination of two functions on the same grid.
    pub fn zip_with(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_len(other.len())?;
        Self::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: f64, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a + c * b)
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.len() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: n,
                found: self.len(),
            })
        }
    }

    /// Two whitespace-separated columns `x value`, one grid point per line.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.len() * 48);
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{:?} {:?}", self.x(i), v);
        }
        out
    }

    /// Parses the format written by [`GridFunction::to_text`]. The `x` column must
    /// match the uniform grid.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split_whitespace();
            let parse = |s: Option<&str>| -> Result<f64> {
                s.and_then(|s| s.parse().ok()).ok_or_else(|| {
                    Error::InvalidGrid(format!("line {}: expected two numbers", lineno + 1))
                })
            };
            xs.push(parse(cols.next())?);
            values.push(parse(cols.next())?);
        }
        let u = Self::new(values)?;
        let tol = 1e-12;
        if let Some(i) = (0..u.len()).find(|&i| (xs[i] - u.x(i)).abs() > tol) {
            return Err(Error::InvalidGrid(format!(
                "x column at row {i} is {} but the uniform grid has {}",
                xs[i],
                u.x(i)
            )));
        }
        Ok(u)
    }
}

impl TryFrom<Vec<f64>> for GridFunction {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<GridFunction> for Vec<f64> {
    fn from(u: GridFunction) -> Self {
        u.values
    }
}

impl AsRef<[f64]> for GridFunction {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

pub(crate) fn sup_norm(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn zip_same_len(a: &GridFunction, b: &GridFunction, f: impl Fn(f64, f64) -> f64) -> GridFunction {
    assert_eq!(
        a.len(),
        b.len(),
        "grid functions on different grids ({} vs {} points)",
        a.len(),
        b.len()
    );
    GridFunction::from_raw(
        a.values
            .iter()
            .zip(&b.values)
            .map(|(&x, &y)| f(x, y))
            .collect(),
    )
}

/// Panics if the grids differ; use [`GridFunction::zip_with`] for a fallible version.
impl Add for &GridFunction {
    type Output = GridFunction;

    fn add(self, rhs: &GridFunction) -> GridFunction {
        zip_same_len(self, rhs, |a, b| a + b)
    }
}

/// Panics if the grids differ.
impl Sub for &GridFunction {
    type Output = GridFunction;

    fn sub(self, rhs: &GridFunction) -> GridFunction {
        zip_same_len(self, rhs, |a, b| a - b)
    }
}

impl Mul<&GridFunction> for f64 {
    type Output = GridFunction;

    fn mul(self, rhs: &GridFunction) -> GridFunction {
        GridFunction::from_raw(rhs.values.iter().map(|v| self * v).collect())
    }
}

impl Neg for &GridFunction {
    type Output = GridFunction;

    fn neg(self) -> GridFunction {
        -1.0 * self
    }
}

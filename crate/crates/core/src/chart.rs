//! Coordinate charts, evaluable fields and central differences.

use std::ops::{Mul, Sub};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type ScalarField = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type VectorField = Arc<dyn Fn(&[f64]) -> DVector<f64> + Send + Sync>;
pub type MatrixField = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;

pub const DEFAULT_STEP: f64 = 1e-3;
pub const LATTICE_POINTS_PER_AXIS: usize = 5;

/// Axis-aligned box with a finite-difference step.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    lower: Vec<f64>,
    upper: Vec<f64>,
    h: f64,
    per_axis: usize,
}

impl Chart {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, h: f64) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidChart("corners must have equal positive length".into()));
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(l < u)) {
            return Err(Error::InvalidChart("box is empty".into()));
        }
        let shortest = lower.iter().zip(&upper).map(|(l, u)| u - l).fold(f64::INFINITY, f64::min);
        if !(h > 0.0) || h > shortest / 10.0 {
            return Err(Error::InvalidChart(format!(
                "step {h} must lie in (0, {}]",
                shortest / 10.0
            )));
        }
        Ok(Self {
            lower,
            upper,
            h,
            per_axis: LATTICE_POINTS_PER_AXIS,
        })
    }

    /// `[-1, 1]^n` with the default step.
    pub fn cube(n: usize) -> Self {
        Self::new(vec![-1.0; n], vec![1.0; n], DEFAULT_STEP).expect("valid cube")
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn with_step(&self, h: f64) -> Result<Self> {
        let mut c = Self::new(self.lower.clone(), self.upper.clone(), h)?;
        c.per_axis = self.per_axis;
        Ok(c)
    }

    /// Points per axis of [`Self::lattice`].
    pub fn lattice_density(&self) -> usize {
        self.per_axis
    }

    pub fn with_lattice(&self, per_axis: usize) -> Result<Self> {
        if per_axis == 0 {
            return Err(Error::InvalidChart("lattice needs at least one point per axis".into()));
        }
        Ok(Self {
            per_axis,
            ..self.clone()
        })
    }

    /// Nested differences reach `2h` from the evaluation point.
    pub fn margin(&self) -> f64 {
        2.0 * self.h
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (l, u))| l <= v && v <= u)
    }

    pub fn is_interior(&self, x: &[f64]) -> bool {
        // small slack so lattice points placed exactly at the margin qualify
        let m = self.margin() * (1.0 - 1e-9);
        x.len() == self.dim()
            && x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (l, u))| l + m <= *v && *v <= u - m)
    }

    pub fn check_interior(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        if self.is_interior(x) {
            Ok(())
        } else {
            Err(Error::NearBoundary { margin: self.margin() })
        }
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(l, u)| 0.5 * (l + u)).collect()
    }

    /// `per_axis^n` evenly spaced points spanning the box minus the `2h` margin.
    pub fn lattice_with(&self, per_axis: usize) -> Vec<Vec<f64>> {
        let m = self.margin();
        let axes: Vec<Vec<f64>> = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| {
                let (a, b) = (l + m, u - m);
                if per_axis == 1 {
                    vec![0.5 * (a + b)]
                } else {
                    (0..per_axis).map(|i| a + (b - a) * i as f64 / (per_axis - 1) as f64).collect()
                }
            })
            .collect();
        let mut points = vec![Vec::with_capacity(self.dim())];
        for axis in &axes {
            points = points
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        points
    }

    /// The sampling lattice used by sweeps, `lattice_density()` points per axis.
    pub fn lattice(&self) -> Vec<Vec<f64>> {
        self.lattice_with(self.per_axis)
    }
}

/// Second-order central difference of `f` along coordinate `k`.
pub fn partial<T, F>(f: F, x: &[f64], k: usize, h: f64) -> T
where
    F: Fn(&[f64]) -> T,
    T: Sub<Output = T> + Mul<f64, Output = T>,
{
    let mut p = x.to_vec();
    let mut q = x.to_vec();
    p[k] += h;
    q[k] -= h;
    (f(&p) - f(&q)) * (0.5 / h)
}

/// `J[(i, j)] = ∂_j X^i`.
pub fn jacobian(field: &(dyn Fn(&[f64]) -> DVector<f64> + Send + Sync), x: &[f64], h: f64) -> DMatrix<f64> {
    let n = x.len();
    let cols: Vec<DVector<f64>> = (0..n).map(|j| partial(|p| field(p), x, j, h)).collect();
    DMatrix::from_columns(&cols)
}

pub fn gradient(f: &(dyn Fn(&[f64]) -> f64 + Send + Sync), x: &[f64], h: f64) -> DVector<f64> {
    DVector::from_iterator(x.len(), (0..x.len()).map(|k| partial(|p| f(p), x, k, h)))
}

/// Largest absolute entry.
pub fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| if v.is_nan() { f64::NAN } else { m.max(v.abs()) })
}

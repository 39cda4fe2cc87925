//! Seeded random polynomial fields, sections and frames for property tests.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::chart::{Chart, MatrixField, ScalarField, VectorField};
use crate::geometry::FrameField;
use crate::jet::{Form1J1T, J1TSection};

/// `Σ c_m x^m` over multi-indices of total degree ≤ `degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    terms: Vec<(f64, Vec<u32>)>,
}

fn multi_indices(n: usize, degree: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=degree {
        for mut rest in multi_indices(n - 1, degree - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl Polynomial {
    pub fn new(terms: Vec<(f64, Vec<u32>)>) -> Self {
        Self { terms }
    }

    /// Coefficients uniform in `[-scale, scale]` for every monomial.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, degree: u32, scale: f64) -> Self {
        let terms = multi_indices(n, degree)
            .into_iter()
            .map(|m| (rng.random_range(-scale..=scale), m))
            .collect();
        Self { terms }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, m)| c * m.iter().zip(x).map(|(&e, &v)| v.powi(e as i32)).product::<f64>())
            .sum()
    }

    pub fn derivative(&self, k: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(_, m)| m[k] > 0)
            .map(|(c, m)| {
                let mut d = m.clone();
                d[k] -= 1;
                (c * m[k] as f64, d)
            })
            .collect();
        Self { terms }
    }
}

/// A vector field with polynomial components and an exact Jacobian.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialField {
    components: Vec<Polynomial>,
}

impl PolynomialField {
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, degree: u32, scale: f64) -> Self {
        Self {
            components: (0..n).map(|_| Polynomial::random(rng, n, degree, scale)).collect(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> DVector<f64> {
        DVector::from_iterator(self.components.len(), self.components.iter().map(|p| p.eval(x)))
    }

    /// `J[(i, j)] = ∂_j X^i`, exactly.
    pub fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.components.len();
        DMatrix::from_fn(n, n, |i, j| self.components[i].derivative(j).eval(x))
    }

    pub fn field(&self) -> VectorField {
        let me = self.clone();
        Arc::new(move |x| me.eval(x))
    }

    pub fn jacobian_field(&self) -> MatrixField {
        let me = self.clone();
        Arc::new(move |x| me.jacobian(x))
    }
}

pub fn random_matrix_field<R: Rng + ?Sized>(rng: &mut R, n: usize, degree: u32, scale: f64) -> MatrixField {
    let entries: Vec<Polynomial> = (0..n * n).map(|_| Polynomial::random(rng, n, degree, scale)).collect();
    Arc::new(move |x| DMatrix::from_fn(n, n, |i, j| entries[i * n + j].eval(x)))
}

pub fn random_scalar_field<R: Rng + ?Sized>(rng: &mut R, n: usize, degree: u32, scale: f64) -> ScalarField {
    let p = Polynomial::random(rng, n, degree, scale);
    Arc::new(move |x| p.eval(x))
}

/// A non-holonomic section with independent polynomial vector and matrix parts.
pub fn random_section<R: Rng + ?Sized>(rng: &mut R, chart: &Chart, degree: u32) -> J1TSection {
    let n = chart.dim();
    let v = PolynomialField::random(rng, n, degree, 0.5);
    J1TSection::new(chart.clone(), v.field(), random_matrix_field(rng, n, degree, 0.5))
}

pub fn random_form<R: Rng + ?Sized>(rng: &mut R, chart: &Chart, degree: u32) -> Form1J1T {
    let n = chart.dim();
    let c = PolynomialField::random(rng, n, degree, 0.5);
    Form1J1T::new(chart.clone(), c.field(), random_matrix_field(rng, n, degree, 0.5))
}

/// `A(x) = 2I + P(x)` with `P` a small cubic matrix polynomial; invertible on `[-1,1]^n`
/// because every entry of `P` is bounded by `scale · #monomials`.
pub fn random_frame<R: Rng + ?Sized>(rng: &mut R, chart: &Chart) -> FrameField {
    let n = chart.dim();
    let monomials = multi_indices(n, 3).len() as f64;
    let scale = 0.5 / (monomials * n as f64);
    let p = random_matrix_field(rng, n, 3, scale);
    FrameField::new(chart.clone(), Arc::new(move |x| DMatrix::identity(n, n) * 2.0 + p(x)))
}

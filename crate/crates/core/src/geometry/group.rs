//! Local group multiplications, the local adjoint map and its log-det primitive.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FrameField;
use crate::chart::{partial, Chart};
use crate::error::{Error, Result};

pub type MultiplicationMap = Arc<dyn Fn(&[f64], &[f64]) -> DVector<f64> + Send + Sync>;

const IDENTITY_TOLERANCE: f64 = 1e-12;
const UNIT_DET_TOLERANCE: f64 = 1e-6;

#[derive(Clone)]
pub struct LocalGroupMultiplication {
    chart: Chart,
    identity: Vec<f64>,
    m: MultiplicationMap,
}

impl std::fmt::Debug for LocalGroupMultiplication {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LocalGroupMultiplication")
            .field("chart", &self.chart)
            .field("identity", &self.identity)
            .finish_non_exhaustive()
    }
}

impl LocalGroupMultiplication {
    /// Checks `m(e, x) = m(x, e) = x` on the chart lattice.
    pub fn new(chart: Chart, identity: Vec<f64>, m: MultiplicationMap) -> Result<Self> {
        if !chart.contains(&identity) {
            return Err(Error::OutsideChart(identity));
        }
        let mult = Self { chart, identity, m };
        let worst = mult.identity_residual();
        if !(worst <= IDENTITY_TOLERANCE) {
            return Err(Error::IdentityLaw(worst));
        }
        Ok(mult)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn identity(&self) -> &[f64] {
        &self.identity
    }

    pub fn with_step(&self, h: f64) -> Result<Self> {
        Ok(Self {
            chart: self.chart.with_step(h)?,
            identity: self.identity.clone(),
            m: self.m.clone(),
        })
    }

    pub fn multiply(&self, a: &[f64], b: &[f64]) -> DVector<f64> {
        (self.m)(a, b)
    }

    pub fn identity_residual(&self) -> f64 {
        let e = &self.identity;
        self.chart
            .lattice()
            .iter()
            .map(|x| {
                let xv = DVector::from_column_slice(x);
                ((self.m)(e, x) - &xv).amax().max(((self.m)(x, e) - &xv).amax())
            })
            .fold(0.0, f64::max)
    }

    /// Max of `|(ab)c − a(bc)|` over seeded random triples in the chart.
    pub fn associativity_residual(&self, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut point = || -> Vec<f64> {
            self.chart
                .lower()
                .iter()
                .zip(self.chart.upper())
                .map(|(l, u)| rng.random_range(*l..*u))
                .collect()
        };
        (0..samples)
            .map(|_| {
                let (a, b, c) = (point(), point(), point());
                let left = (self.m)((self.m)(&a, &b).as_slice(), &c);
                let right = (self.m)(&a, (self.m)(&b, &c).as_slice());
                (left - right).amax()
            })
            .fold(0.0, f64::max)
    }

    /// `∂₂m(a, ·)` at `e`: the 1-jet of left translation by `a`.
    pub fn left_jacobian(&self, a: &[f64]) -> DMatrix<f64> {
        let h = self.chart.step();
        let n = a.len();
        let cols: Vec<DVector<f64>> = (0..n).map(|j| partial(|b| (self.m)(a, b), &self.identity, j, h)).collect();
        DMatrix::from_columns(&cols)
    }

    /// `∂₁m(·, a)` at `e`: the 1-jet of right translation by `a`.
    pub fn right_jacobian(&self, a: &[f64]) -> DMatrix<f64> {
        let h = self.chart.step();
        let n = a.len();
        let cols: Vec<DVector<f64>> = (0..n).map(|j| partial(|b| (self.m)(b, a), &self.identity, j, h)).collect();
        DMatrix::from_columns(&cols)
    }

    /// The frame `A(x) = ∂₂m(x, ·)|_e`, whose splitting is `ε(e, a) = A(a)`.
    pub fn frame(&self) -> FrameField {
        let me = self.clone();
        FrameField::new(self.chart.clone(), Arc::new(move |x| me.left_jacobian(x)))
    }

    fn ad_unchecked(&self, a: &[f64]) -> Result<DMatrix<f64>> {
        let left = self.left_jacobian(a);
        let inv = left
            .clone()
            .try_inverse()
            .filter(|_| left.determinant().abs() > 1e-12)
            .ok_or_else(|| Error::SingularJacobian(a.to_vec()))?;
        Ok(inv * self.right_jacobian(a))
    }

    /// `Ad_e(a) = (∂₂m(a, ·)|_e)⁻¹ · ∂₁m(·, a)|_e`, the map `x ↦ a⁻¹ x a` at first order.
    pub fn ad_e(&self, a: &[f64]) -> Result<DMatrix<f64>> {
        if !self.chart.contains(a) {
            return Err(Error::OutsideChart(a.to_vec()));
        }
        self.ad_unchecked(a)
    }

    fn log_det_ad(&self, a: &[f64]) -> f64 {
        self.ad_unchecked(a).map(|m| m.determinant().abs().ln()).unwrap_or(f64::NAN)
    }

    /// `−∇ log det Ad_e − w` at `x`, with `w` from [`Self::frame`].
    pub fn primitive_defect(&self, x: &[f64]) -> Result<DVector<f64>> {
        let frame = self.frame();
        frame.chart().check_interior(x)?;
        let h = self.chart.step();
        let grad = DVector::from_iterator(x.len(), (0..x.len()).map(|k| partial(|p| self.log_det_ad(p), x, k, h)));
        Ok(-grad - frame.w_raw(x))
    }

    /// Max over the lattice of `|−d log det Ad_e − w|`.
    pub fn log_det_ad_primitive_check(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for x in self.chart.lattice() {
            let d = self.primitive_defect(&x)?;
            worst = worst.max(d.amax());
            if worst.is_nan() {
                return Ok(f64::NAN);
            }
        }
        Ok(worst)
    }
}

/// A group element for the automorphy test: chart coordinates, or an explicit `Ad` matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupElement {
    Point(Vec<f64>),
    Adjoint(DMatrix<f64>),
}

/// `det Ad_e(δ) = 1` for each element, within `1e-6`.
pub fn automorphy_check(mult: &LocalGroupMultiplication, elements: &[GroupElement]) -> Result<Vec<bool>> {
    elements
        .iter()
        .map(|el| {
            let ad = match el {
                GroupElement::Point(p) => mult.ad_e(p)?,
                GroupElement::Adjoint(m) => m.clone(),
            };
            Ok((ad.determinant() - 1.0).abs() <= UNIT_DET_TOLERANCE)
        })
        .collect()
}

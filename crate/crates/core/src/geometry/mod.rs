//! Splittings generated by frame fields and their finite-difference tensors.
//!
//! A frame `A(x)` generates `ε(x, y) = A(y) A(x)⁻¹`. The connection is
//! `Γ_{kj}^i = (∂_k A · A⁻¹)^i_j`, stored as one matrix per derivative index
//! `k`, with row `i` and column `j`.

mod curve;
mod diagnostics;
mod group;

pub use curve::{geodesic_residual, one_parameter_curve, Curve};
pub use diagnostics::{convergence, lattice_max, magnitude_scale, sample_pairs, Convergence, FrameDiagnostics, MIN_CONVERGENCE_RATIO, ROUNDOFF_FLOOR};
pub use group::{automorphy_check, GroupElement, LocalGroupMultiplication, MultiplicationMap};

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::chart::{jacobian, partial, Chart, MatrixField, VectorField};
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::rational::best_approximation;

pub const MIN_FRAME_DET: f64 = 1e-6;
pub const RATIONAL_DENOMINATOR_CAP: u64 = 64;

/// Dense real tensor with every index ranging over `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    n: usize,
    order: usize,
    data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(n: usize, order: usize) -> Self {
        Self {
            n,
            order,
            data: vec![0.0; n.pow(order as u32)],
        }
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.order, "tensor order");
        idx.iter().fold(0, |acc, &i| {
            assert!(i < self.n, "tensor index");
            acc * self.n + i
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        crate::chart::max_abs(self.data.iter().copied())
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        crate::chart::max_abs(self.data.iter().zip(&other.data).map(|(a, b)| a - b))
    }
}

/// `Γ` at a point; `gamma[k][(i, j)] = Γ_{kj}^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionSample {
    pub point: Vec<f64>,
    pub gamma: Vec<DMatrix<f64>>,
}

impl ConnectionSample {
    /// `Γ_{kj}^i`.
    pub fn component(&self, k: usize, j: usize, i: usize) -> f64 {
        self.gamma[k][(i, j)]
    }

    pub fn max_abs(&self) -> f64 {
        crate::chart::max_abs(self.gamma.iter().flat_map(|m| m.iter().copied()))
    }

    /// `Γ̃ξ`: the matrix with column `j` equal to `Γ_j ξ`, i.e. `Γ_{ja}^i ξ^a`.
    pub fn tilde(&self, xi: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::from_columns(&self.gamma.iter().map(|g| g * xi).collect::<Vec<_>>())
    }

    /// `Γ̂ξ = Σ_a ξ^a Γ_a`, i.e. `Γ_{aj}^i ξ^a`.
    pub fn hat(&self, xi: &DVector<f64>) -> DMatrix<f64> {
        let n = self.gamma.len();
        self.gamma.iter().zip(xi.iter()).fold(DMatrix::zeros(n, n), |acc, (g, x)| acc + g * *x)
    }

    /// `w_i = Γ_{ia}^a − Γ_{ai}^a`.
    pub fn w(&self) -> DVector<f64> {
        let n = self.gamma.len();
        DVector::from_iterator(
            n,
            (0..n).map(|i| self.gamma[i].trace() - (0..n).map(|a| self.gamma[a][(a, i)]).sum::<f64>()),
        )
    }
}

/// `T_{jk}^i = Γ_{jk}^i − Γ_{kj}^i`, stored as `[j, k, i]`.
pub fn torsion(sample: &ConnectionSample) -> Tensor {
    let n = sample.gamma.len();
    let mut t = Tensor::zeros(n, 3);
    for j in 0..n {
        for k in 0..n {
            for i in 0..n {
                t.set(&[j, k, i], sample.component(j, k, i) - sample.component(k, j, i));
            }
        }
    }
    t
}

/// Smooth invertible-matrix field on a chart.
#[derive(Clone)]
pub struct FrameField {
    chart: Chart,
    a: MatrixField,
}

impl std::fmt::Debug for FrameField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FrameField").field("chart", &self.chart).finish_non_exhaustive()
    }
}

impl FrameField {
    pub fn new(chart: Chart, a: MatrixField) -> Self {
        Self { chart, a }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn step(&self) -> f64 {
        self.chart.step()
    }

    pub fn with_step(&self, h: f64) -> Result<Self> {
        Ok(Self::new(self.chart.with_step(h)?, self.a.clone()))
    }

    pub fn with_lattice(&self, per_axis: usize) -> Result<Self> {
        Ok(Self::new(self.chart.with_lattice(per_axis)?, self.a.clone()))
    }

    pub fn matrix_field(&self) -> MatrixField {
        self.a.clone()
    }

    pub fn at(&self, x: &[f64]) -> DMatrix<f64> {
        (self.a)(x)
    }

    fn inverse_at(&self, x: &[f64]) -> DMatrix<f64> {
        self.at(x).try_inverse().unwrap_or_else(|| DMatrix::from_element(self.dim(), self.dim(), f64::NAN))
    }

    /// Smallest `|det A|` over the lattice; errors below [`MIN_FRAME_DET`].
    pub fn check_invertible(&self) -> Result<f64> {
        let mut worst = f64::INFINITY;
        for p in self.chart.lattice() {
            let d = self.at(&p).determinant().abs();
            if !(d >= MIN_FRAME_DET) {
                return Err(Error::DegenerateFrame { point: p, det: d });
            }
            worst = worst.min(d);
        }
        Ok(worst)
    }

    /// `ε(x, y) = A(y) A(x)⁻¹`.
    pub fn splitting(&self, x: &[f64], y: &[f64]) -> DMatrix<f64> {
        self.at(y) * self.inverse_at(x)
    }

    pub(crate) fn gamma_raw(&self, x: &[f64]) -> Vec<DMatrix<f64>> {
        let h = self.step();
        let inv = self.inverse_at(x);
        (0..self.dim()).map(|k| partial(|p| self.at(p), x, k, h) * &inv).collect()
    }

    pub fn gamma(&self, x: &[f64]) -> Result<ConnectionSample> {
        self.chart.check_interior(x)?;
        Ok(ConnectionSample {
            point: x.to_vec(),
            gamma: self.gamma_raw(x),
        })
    }

    /// `Γ_{jk}^i = ∂ε^i_k(x, y)/∂y^j` at `y = x`, differentiating the splitting itself.
    pub fn gamma_from_splitting(&self, x: &[f64]) -> Result<ConnectionSample> {
        self.chart.check_interior(x)?;
        let h = self.step();
        Ok(ConnectionSample {
            point: x.to_vec(),
            gamma: (0..self.dim()).map(|j| partial(|y| self.splitting(x, y), x, j, h)).collect(),
        })
    }

    fn d_gamma(&self, x: &[f64]) -> Vec<Vec<DMatrix<f64>>> {
        let h = self.step();
        let n = self.dim();
        // d[r][k] = ∂_r Γ_k
        (0..n)
            .map(|r| {
                let plus = {
                    let mut p = x.to_vec();
                    p[r] += h;
                    self.gamma_raw(&p)
                };
                let minus = {
                    let mut p = x.to_vec();
                    p[r] -= h;
                    self.gamma_raw(&p)
                };
                plus.iter().zip(&minus).map(|(a, b)| (a - b) * (0.5 / h)).collect()
            })
            .collect()
    }

    /// `R₁_{rj,k}^i = [∂_r Γ_{jk}^i + Γ_{rk}^a Γ_{ja}^i]_{[r,j]}`, stored as `[r, j, k, i]`.
    pub fn r1(&self, x: &[f64]) -> Result<Tensor> {
        self.chart.check_interior(x)?;
        let g = self.gamma_raw(x);
        let dg = self.d_gamma(x);
        let n = self.dim();
        let mut t = Tensor::zeros(n, 4);
        for r in 0..n {
            for j in 0..n {
                // matrix over (i, k): ∂_r Γ_j − ∂_j Γ_r + Γ_j Γ_r − Γ_r Γ_j
                let m = &dg[r][j] - &dg[j][r] + &g[j] * &g[r] - &g[r] * &g[j];
                for k in 0..n {
                    for i in 0..n {
                        t.set(&[r, j, k, i], m[(i, k)]);
                    }
                }
            }
        }
        Ok(t)
    }

    /// `R₂_{rj,k}^i = E_{jr,k}^i − E_{rj,k}^i` with
    /// `E_{rj,k}^i = ∂_r Γ_{kj}^i + Γ_{kr}^a Γ_{aj}^i`, stored as `[r, j, k, i]`.
    pub fn r2(&self, x: &[f64]) -> Result<Tensor> {
        self.chart.check_interior(x)?;
        Ok(self.r2_raw(x))
    }

    fn r2_raw(&self, x: &[f64]) -> Tensor {
        let g = self.gamma_raw(x);
        let dg = self.d_gamma(x);
        let n = self.dim();
        let e = |r: usize, j: usize, k: usize, i: usize| {
            dg[r][k][(i, j)] + (0..n).map(|a| g[k][(a, r)] * g[a][(i, j)]).sum::<f64>()
        };
        let mut t = Tensor::zeros(n, 4);
        for r in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for i in 0..n {
                        t.set(&[r, j, k, i], e(j, r, k, i) - e(r, j, k, i));
                    }
                }
            }
        }
        t
    }

    pub(crate) fn w_raw(&self, x: &[f64]) -> DVector<f64> {
        ConnectionSample {
            point: x.to_vec(),
            gamma: self.gamma_raw(x),
        }
        .w()
    }

    pub fn w_form(&self, x: &[f64]) -> Result<DVector<f64>> {
        self.chart.check_interior(x)?;
        Ok(self.w_raw(x))
    }

    /// `(Tr R₂)_{rj} = R₂_{rj,a}^a`.
    pub fn tr_r2(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let r = self.r2(x)?;
        let n = self.dim();
        Ok(DMatrix::from_fn(n, n, |a, b| (0..n).map(|c| r.get(&[a, b, c, c])).sum()))
    }

    /// `(dw)_{rj} = ∂_r w_j − ∂_j w_r`.
    pub fn dw(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.chart.check_interior(x)?;
        let jac = jacobian(&|p: &[f64]| self.w_raw(p), x, self.step());
        // jac[(j, r)] = ∂_r w_j
        Ok(jac.transpose() - jac)
    }

    /// `R(ε)_{kj}^i = [∂_{x^k} ε^i_j + ∂_{y^a} ε^i_j ε^a_k]_{[kj]}`, stored as `[k, j, i]`.
    pub fn r_full(&self, x: &[f64], y: &[f64]) -> Result<Tensor> {
        self.chart.check_interior(x)?;
        self.chart.check_interior(y)?;
        let h = self.step();
        let n = self.dim();
        let eps = self.splitting(x, y);
        let dx: Vec<DMatrix<f64>> = (0..n).map(|k| partial(|p| self.splitting(p, y), x, k, h)).collect();
        let dy: Vec<DMatrix<f64>> = (0..n).map(|a| partial(|q| self.splitting(x, q), y, a, h)).collect();
        let term = |k: usize, j: usize, i: usize| {
            dx[k][(i, j)] + (0..n).map(|a| dy[a][(i, j)] * eps[(a, k)]).sum::<f64>()
        };
        let mut t = Tensor::zeros(n, 3);
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    t.set(&[k, j, i], term(k, j, i) - term(j, k, i));
                }
            }
        }
        Ok(t)
    }

    /// `ξ(x) = ε(p, x) v = A(x) A(p)⁻¹ v`.
    pub fn invariant_field(&self, p: &[f64], v: &DVector<f64>) -> VectorField {
        let a = self.a.clone();
        let base = self.inverse_at(p) * v;
        Arc::new(move |x| a(x) * &base)
    }

    /// Max of `|∂_j ξ^i − Γ_{ja}^i ξ^a|` at `x` for the invariant field through `(p, v)`.
    pub fn invariant_pde_residual(&self, p: &[f64], v: &DVector<f64>, x: &[f64]) -> Result<f64> {
        self.chart.check_interior(x)?;
        let xi = self.invariant_field(p, v);
        let jac = jacobian(xi.as_ref(), x, self.step());
        let g = self.gamma_raw(x);
        let val = xi(x);
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            let col = &g[j] * &val;
            for i in 0..n {
                worst = worst.max((jac[(i, j)] - col[i]).abs());
            }
        }
        Ok(worst)
    }

    /// `c_{ij}^k(x)` with `[ξ_i, ξ_j] = c_{ij}^k ξ_k` for the frame columns `ξ_b = A e_b`,
    /// stored as `[i, j, k]`. These are invariant fields: `ξ_b = ε(p, ·) A(p) e_b`.
    pub fn structure_functions(&self, x: &[f64]) -> Result<Tensor> {
        self.chart.check_interior(x)?;
        Ok(self.structure_raw(x))
    }

    fn structure_raw(&self, x: &[f64]) -> Tensor {
        let h = self.step();
        let n = self.dim();
        let a = self.at(x);
        let inv = self.inverse_at(x);
        let da: Vec<DMatrix<f64>> = (0..n).map(|k| partial(|p| self.at(p), x, k, h)).collect();
        // (∂ξ_j) ξ_i = Σ_m ∂_m A e_j · A_{m i}
        let flow = |i: usize, j: usize| -> DVector<f64> {
            (0..n).fold(DVector::zeros(n), |acc, m| acc + da[m].column(j) * a[(m, i)])
        };
        let mut t = Tensor::zeros(n, 3);
        for i in 0..n {
            for j in 0..n {
                let c = &inv * (flow(i, j) - flow(j, i));
                for k in 0..n {
                    t.set(&[i, j, k], c[k]);
                }
            }
        }
        t
    }

    /// Largest deviation of the structure functions from their value at `p` over the lattice.
    pub fn structure_spread(&self, p: &[f64]) -> Result<f64> {
        let base = self.structure_functions(p)?;
        Ok(self
            .chart
            .lattice()
            .iter()
            .map(|x| self.structure_raw(x).max_diff(&base))
            .fold(0.0, f64::max))
    }

    /// Tolerance for constancy of the structure functions.
    pub fn constancy_tolerance(&self) -> f64 {
        100.0 * self.step().powi(2) * magnitude_scale(self, 3)
    }

    /// The Lie algebra of the invariant fields, read off at `p` and rounded to
    /// rationals with denominator at most [`RATIONAL_DENOMINATOR_CAP`].
    pub fn local_algebra(&self, p: &[f64]) -> Result<LieAlgebra> {
        let spread = self.structure_spread(p)?;
        let tolerance = self.constancy_tolerance();
        if !(spread <= tolerance) {
            return Err(Error::NotConstant { spread, tolerance });
        }
        let c = self.structure_raw(p);
        let n = self.dim();
        let mut constants = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    let q = best_approximation(c.get(&[i, j, k]), RATIONAL_DENOMINATOR_CAP);
                    if !num_traits::Zero::is_zero(&q) {
                        constants.push((i + 1, j + 1, k + 1, q));
                    }
                }
            }
        }
        let alg = LieAlgebra::with_dim(n, constants)?;
        if !alg.validate().ok {
            return Err(Error::RoundedJacobi);
        }
        Ok(alg)
    }

    /// `Γ̃ξ` as a jet section over this frame's chart.
    pub fn tilde_lift(&self, xi: VectorField) -> crate::jet::J1TSection {
        let frame = self.clone();
        let f = xi.clone();
        crate::jet::J1TSection::new(
            self.chart.clone(),
            xi,
            Arc::new(move |x| {
                let g = frame.gamma_raw(x);
                let v = f(x);
                DMatrix::from_columns(&g.iter().map(|m| m * &v).collect::<Vec<_>>())
            }),
        )
    }

    /// `Γ̂ξ` as a jet section over this frame's chart.
    pub fn hat_lift(&self, xi: VectorField) -> crate::jet::J1TSection {
        let frame = self.clone();
        let f = xi.clone();
        let n = self.dim();
        crate::jet::J1TSection::new(
            self.chart.clone(),
            xi,
            Arc::new(move |x| {
                let v = f(x);
                frame
                    .gamma_raw(x)
                    .iter()
                    .zip(v.iter())
                    .fold(DMatrix::zeros(n, n), |acc, (g, s)| acc + g * *s)
            }),
        )
    }

    /// `ω = (Γ_{ia}^a, −δ^i_j)`, whose pairing is `ω(X) = X^a Γ_{ab}^b − X^a_a`.
    pub fn omega_form(&self) -> crate::jet::Form1J1T {
        let frame = self.clone();
        let n = self.dim();
        crate::jet::Form1J1T::new(
            self.chart.clone(),
            Arc::new(move |x| DVector::from_iterator(n, frame.gamma_raw(x).iter().map(|g| g.trace()))),
            Arc::new(move |_| -DMatrix::identity(n, n)),
        )
    }
}

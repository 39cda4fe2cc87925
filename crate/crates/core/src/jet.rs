//! Sections of the first jet bundle `J₁T` on a chart and the algebroid
//! operations built from them. Matrix parts are stored as `M[(i, j)] = X^i_j`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::chart::{jacobian, partial, Chart, MatrixField, ScalarField, VectorField};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct J1TSection {
    chart: Chart,
    vector: VectorField,
    matrix: MatrixField,
}

impl std::fmt::Debug for J1TSection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("J1TSection").field("chart", &self.chart).finish_non_exhaustive()
    }
}

impl J1TSection {
    pub fn new(chart: Chart, vector: VectorField, matrix: MatrixField) -> Self {
        Self { chart, vector, matrix }
    }

    pub fn constant(chart: Chart, v: DVector<f64>, m: DMatrix<f64>) -> Self {
        Self::new(chart, Arc::new(move |_| v.clone()), Arc::new(move |_| m.clone()))
    }

    /// `j₁ξ = (ξ^i, ∂_j ξ^i)` with a finite-difference Jacobian.
    pub fn prolong(chart: &Chart, xi: VectorField) -> Self {
        let h = chart.step();
        let field = xi.clone();
        Self::new(chart.clone(), xi, Arc::new(move |x| jacobian(field.as_ref(), x, h)))
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// The projection `πX`.
    pub fn vector_field(&self) -> VectorField {
        self.vector.clone()
    }

    pub fn matrix_field(&self) -> MatrixField {
        self.matrix.clone()
    }

    pub fn vector_at(&self, x: &[f64]) -> DVector<f64> {
        (self.vector)(x)
    }

    pub fn matrix_at(&self, x: &[f64]) -> DMatrix<f64> {
        (self.matrix)(x)
    }
}

fn same_chart(a: &Chart, b: &Chart) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ChartMismatch)
    }
}

/// `[u, v] = (∂v) u − (∂u) v`.
pub fn vector_bracket(chart: &Chart, u: VectorField, v: VectorField) -> VectorField {
    let h = chart.step();
    Arc::new(move |x| jacobian(v.as_ref(), x, h) * u(x) - jacobian(u.as_ref(), x, h) * v(x))
}

/// Directional derivative `Σ_a u^a ∂_a M`.
fn derivative_along(m: &MatrixField, u: &DVector<f64>, x: &[f64], h: f64) -> DMatrix<f64> {
    let (r, c) = m(x).shape();
    let mut out = DMatrix::zeros(r, c);
    for (a, ua) in u.iter().enumerate() {
        if *ua != 0.0 {
            out += partial(|p| m(p), x, a, h) * *ua;
        }
    }
    out
}

/// The Spencer bracket: the vector-field bracket on `πX, πY` and
/// `[X,Y]^i_j = X^a_j Y^i_a − Y^a_j X^i_a + X^a ∂_a Y^i_j − Y^a ∂_a X^i_j`.
pub fn spencer_bracket(a: &J1TSection, b: &J1TSection) -> Result<J1TSection> {
    same_chart(&a.chart, &b.chart)?;
    let h = a.chart.step();
    let vector = vector_bracket(&a.chart, a.vector.clone(), b.vector.clone());
    let (xv, xm, yv, ym) = (a.vector.clone(), a.matrix.clone(), b.vector.clone(), b.matrix.clone());
    let matrix: MatrixField = Arc::new(move |x| {
        let (u, um) = (xv(x), xm(x));
        let (v, vm) = (yv(x), ym(x));
        &vm * &um - &um * &vm + derivative_along(&ym, &u, x, h) - derivative_along(&xm, &v, x, h)
    });
    Ok(J1TSection::new(a.chart.clone(), vector, matrix))
}

/// `D(X)^i_j = ∂_j X^i − X^i_j`.
pub fn spencer_operator(a: &J1TSection) -> MatrixField {
    let h = a.chart.step();
    let (v, m) = (a.vector.clone(), a.matrix.clone());
    Arc::new(move |x| jacobian(v.as_ref(), x, h) - m(x))
}

/// `{X,Y}^i = X^a Y^i_a − Y^a X^i_a`.
pub fn algebraic_bracket(a: &J1TSection, b: &J1TSection) -> Result<VectorField> {
    same_chart(&a.chart, &b.chart)?;
    let (xv, xm, yv, ym) = (a.vector.clone(), a.matrix.clone(), b.vector.clone(), b.matrix.clone());
    Ok(Arc::new(move |x| ym(x) * xv(x) - xm(x) * yv(x)))
}

/// `L_X ξ = [πX, ξ] + i_ξ D(X)`.
pub fn lie_derivative(a: &J1TSection, xi: VectorField) -> VectorField {
    let bracket = vector_bracket(&a.chart, a.vector.clone(), xi.clone());
    let d = spencer_operator(a);
    Arc::new(move |x| bracket(x) + d(x) * xi(x))
}

/// A 1-form on the algebroid: `ω(X) = X^a ω_a + X^a_b ω^b_a`, with the
/// matrix part stored as `W[(b, a)] = ω^b_a`.
#[derive(Clone)]
pub struct Form1J1T {
    chart: Chart,
    covector: VectorField,
    matrix: MatrixField,
}

impl std::fmt::Debug for Form1J1T {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Form1J1T").field("chart", &self.chart).finish_non_exhaustive()
    }
}

impl Form1J1T {
    pub fn new(chart: Chart, covector: VectorField, matrix: MatrixField) -> Self {
        Self { chart, covector, matrix }
    }

    /// An ordinary 1-form, with zero matrix part.
    pub fn ordinary(chart: Chart, covector: VectorField) -> Self {
        let n = chart.dim();
        Self::new(chart, covector, Arc::new(move |_| DMatrix::zeros(n, n)))
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn covector_at(&self, x: &[f64]) -> DVector<f64> {
        (self.covector)(x)
    }

    pub fn matrix_at(&self, x: &[f64]) -> DMatrix<f64> {
        (self.matrix)(x)
    }

    pub fn pair_at(&self, s: &J1TSection, x: &[f64]) -> f64 {
        s.vector_at(x).dot(&self.covector_at(x)) + (s.matrix_at(x) * self.matrix_at(x)).trace()
    }

    /// `x ↦ ω(X)(x)`.
    pub fn pairing(&self, s: &J1TSection) -> Result<ScalarField> {
        same_chart(&self.chart, &s.chart)?;
        let (w, s) = (self.clone(), s.clone());
        Ok(Arc::new(move |x| w.pair_at(&s, x)))
    }
}

/// `δω(X,Y) = (X^c Y^a − Y^c X^a) ∂_c ω_a + (X^c Y^a_b − Y^c X^a_b) ∂_c ω^b_a
///           − (Y^a_c X^c_b − X^a_c Y^c_b) ω^b_a`.
pub fn delta_one_form(w: &Form1J1T, a: &J1TSection, b: &J1TSection) -> Result<ScalarField> {
    same_chart(&w.chart, &a.chart)?;
    same_chart(&w.chart, &b.chart)?;
    let h = w.chart.step();
    let (w, a, b) = (w.clone(), a.clone(), b.clone());
    Ok(Arc::new(move |x| {
        let n = x.len();
        let (u, um) = (a.vector_at(x), a.matrix_at(x));
        let (v, vm) = (b.vector_at(x), b.matrix_at(x));
        let wm = w.matrix_at(x);
        let mut total = 0.0;
        for c in 0..n {
            if u[c] == 0.0 && v[c] == 0.0 {
                continue;
            }
            let dcov: DVector<f64> = partial(|p| w.covector_at(p), x, c, h);
            let dmat: DMatrix<f64> = partial(|p| w.matrix_at(p), x, c, h);
            total += u[c] * v.dot(&dcov) - v[c] * u.dot(&dcov);
            total += u[c] * (&vm * &dmat).trace() - v[c] * (&um * &dmat).trace();
        }
        total - ((&vm * &um - &um * &vm) * wm).trace()
    }))
}

/// `X(f) = X^a ∂_a f` for a scalar field.
pub fn directional(chart: &Chart, u: VectorField, f: ScalarField) -> ScalarField {
    let h = chart.step();
    Arc::new(move |x| {
        let ux = u(x);
        (0..x.len()).map(|a| ux[a] * partial(|p| f(p), x, a, h)).sum()
    })
}

/// De Rham `dω(ξ, η) = ξ^c η^a (∂_c ω_a − ∂_a ω_c)` of an ordinary 1-form.
pub fn exterior_derivative(chart: &Chart, omega: VectorField, xi: VectorField, eta: VectorField) -> ScalarField {
    let h = chart.step();
    Arc::new(move |x| {
        let n = x.len();
        let grads: Vec<DVector<f64>> = (0..n).map(|c| partial(|p| omega(p), x, c, h)).collect();
        let (u, v) = (xi(x), eta(x));
        let mut total = 0.0;
        for c in 0..n {
            for a in 0..n {
                total += u[c] * v[a] * (grads[c][a] - grads[a][c]);
            }
        }
        total
    })
}

//! Lattice sweeps, tolerances and halving-step convergence studies.
//!
//! Tolerances scale as `10 h² s` with `s = (1 + max|Γ|)^p`. The power `p`
//! matches the units of the residual: Γ carries one inverse length, so
//! curvatures want `p = 4` and first-order quantities like `w` want `p = 3`.

use rayon::prelude::*;

use super::{torsion, FrameField};
use crate::error::Result;

/// Residuals below `ROUNDOFF_FLOOR · s` are treated as converged: halving the
/// step no longer reduces pure rounding error.
pub const ROUNDOFF_FLOOR: f64 = 1e-8;
pub const MIN_CONVERGENCE_RATIO: f64 = 3.0;

/// `(1 + max_lattice |Γ|)^power`.
pub fn magnitude_scale(frame: &FrameField, power: i32) -> f64 {
    let g = frame
        .chart()
        .lattice()
        .par_iter()
        .map(|x| crate::chart::max_abs(frame.gamma_raw(x).iter().flat_map(|m| m.iter().copied())))
        .reduce(|| 0.0, f64::max);
    (1.0 + g).powi(power)
}

/// Max of `f` over the given points; NaN propagates.
pub fn lattice_max<F>(points: &[Vec<f64>], f: F) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    let values: Result<Vec<f64>> = points.par_iter().map(|p| f(p)).collect();
    Ok(crate::chart::max_abs(values?))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Convergence {
    pub h: f64,
    pub coarse: f64,
    pub fine: f64,
    pub ratio: f64,
    pub tolerance: f64,
    pub floor: f64,
    pub passed: bool,
}

/// Evaluates `residual(h)` and `residual(h/2)`; passes when the coarse value is
/// within tolerance and the residual either shrinks ≥ 3× or sits at the rounding floor.
pub fn convergence<F>(h: f64, scale: f64, residual: F) -> Result<Convergence>
where
    F: Fn(f64) -> Result<f64>,
{
    let coarse = residual(h)?;
    let fine = residual(h / 2.0)?;
    let tolerance = 10.0 * h * h * scale;
    let floor = ROUNDOFF_FLOOR * scale;
    let ratio = if fine > 0.0 { coarse / fine } else { f64::INFINITY };
    let passed = coarse <= tolerance && (fine <= floor || ratio >= MIN_CONVERGENCE_RATIO);
    Ok(Convergence {
        h,
        coarse,
        fine,
        ratio,
        tolerance,
        floor,
        passed,
    })
}

/// Maxima over the lattice of the frame's tensors and identity residuals.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameDiagnostics {
    pub h: f64,
    pub points: usize,
    pub pairs: usize,
    pub min_det: f64,
    pub gamma: f64,
    pub torsion: f64,
    pub w: f64,
    pub r1: f64,
    pub r2: f64,
    pub r_full: f64,
    pub r_full_diagonal: f64,
    pub dw_residual: f64,
    /// `(1 + max|Γ|)^4`
    pub scale: f64,
    pub tolerance: f64,
    pub r1_convergence: Convergence,
    pub dw_convergence: Convergence,
}

impl FrameDiagnostics {
    pub fn compute(frame: &FrameField) -> Result<Self> {
        let min_det = frame.check_invertible()?;
        let chart = frame.chart();
        let h = frame.step();
        let points = chart.lattice();
        let pairs = sample_pairs(frame);
        let scale = magnitude_scale(frame, 4);

        let gamma = lattice_max(&points, |x| Ok(frame.gamma(x)?.max_abs()))?;
        let torsion_max = lattice_max(&points, |x| Ok(torsion(&frame.gamma(x)?).max_abs()))?;
        let w = lattice_max(&points, |x| Ok(frame.w_form(x)?.amax()))?;
        let r2 = lattice_max(&points, |x| Ok(frame.r2(x)?.max_abs()))?;
        let r_full_diagonal = lattice_max(&points, |x| Ok(frame.r_full(x, x)?.max_abs()))?;
        let r_full = {
            let values: Result<Vec<f64>> = pairs.par_iter().map(|(x, y)| Ok(frame.r_full(x, y)?.max_abs())).collect();
            crate::chart::max_abs(values?)
        };

        let r1_at = |hh: f64| -> Result<f64> {
            let f = frame.with_step(hh)?;
            lattice_max(&points, |x| Ok(f.r1(x)?.max_abs()))
        };
        let dw_at = |hh: f64| -> Result<f64> {
            let f = frame.with_step(hh)?;
            lattice_max(&points, |x| Ok((f.dw(x)? - f.tr_r2(x)?).amax()))
        };
        let r1_convergence = convergence(h, scale, r1_at)?;
        let dw_convergence = convergence(h, scale, dw_at)?;

        Ok(Self {
            h,
            points: points.len(),
            pairs: pairs.len(),
            min_det,
            gamma,
            torsion: torsion_max,
            w,
            r1: r1_convergence.coarse,
            r2,
            r_full,
            r_full_diagonal,
            dw_residual: dw_convergence.coarse,
            scale,
            tolerance: 10.0 * h * h * scale,
            r1_convergence,
            dw_convergence,
        })
    }

    /// Whether the splitting looks like a local Lie group by its `R₂`.
    pub fn r2_vanishes(&self) -> bool {
        self.r2 <= self.tolerance
    }

    pub fn r_full_vanishes(&self) -> bool {
        self.r_full <= self.tolerance
    }
}

/// All ordered pairs of a coarse `3^n` sub-lattice.
pub fn sample_pairs(frame: &FrameField) -> Vec<(Vec<f64>, Vec<f64>)> {
    let coarse = frame.chart().lattice_with(3);
    coarse
        .iter()
        .flat_map(|x| coarse.iter().map(move |y| (x.clone(), y.clone())))
        .collect()
}

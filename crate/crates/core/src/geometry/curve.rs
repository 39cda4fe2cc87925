//! Integral curves of invariant fields, `dx/dt = ε(e, x) v`.

use nalgebra::DVector;

use super::FrameField;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    pub times: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    /// The integration stopped because a stage left the chart.
    pub exited: bool,
}

fn rk4_step(frame: &FrameField, field: &dyn Fn(&[f64]) -> DVector<f64>, x: &DVector<f64>, dt: f64) -> Option<DVector<f64>> {
    let chart = frame.chart();
    let eval = |p: &DVector<f64>| chart.contains(p.as_slice()).then(|| field(p.as_slice()));
    let k1 = eval(x)?;
    let k2 = eval(&(x + &k1 * (dt / 2.0)))?;
    let k3 = eval(&(x + &k2 * (dt / 2.0)))?;
    let k4 = eval(&(x + &k3 * dt))?;
    let next = x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    chart.contains(next.as_slice()).then_some(next)
}

/// Classical fourth-order integration over `[0, t_end]` in `steps` equal steps.
pub fn one_parameter_curve(frame: &FrameField, e: &[f64], v: &DVector<f64>, t_end: f64, steps: usize) -> Result<Curve> {
    frame.chart().check_interior(e)?;
    let field = frame.invariant_field(e, v);
    let dt = t_end / steps.max(1) as f64;
    let mut x = DVector::from_column_slice(e);
    let mut curve = Curve {
        times: vec![0.0],
        points: vec![e.to_vec()],
        exited: false,
    };
    for s in 1..=steps {
        match rk4_step(frame, field.as_ref(), &x, dt) {
            Some(next) => {
                x = next;
                curve.times.push(s as f64 * dt);
                curve.points.push(x.iter().copied().collect());
            }
            None => {
                curve.exited = true;
                break;
            }
        }
    }
    Ok(curve)
}

/// `|d²x/dt²(0) − Γ_{ab}^i(e) ẋ^b ẋ^a|` with the second derivative taken from
/// one RK4 step forward and one backward.
pub fn geodesic_residual(frame: &FrameField, e: &[f64], v: &DVector<f64>) -> Result<f64> {
    let gamma = frame.gamma(e)?;
    let field = frame.invariant_field(e, v);
    let dt = frame.step();
    let x0 = DVector::from_column_slice(e);
    let fwd = rk4_step(frame, field.as_ref(), &x0, dt);
    let back = rk4_step(frame, field.as_ref(), &x0, -dt);
    let (Some(fwd), Some(back)) = (fwd, back) else {
        return Err(crate::error::Error::NearBoundary { margin: frame.chart().margin() });
    };
    let second = (fwd - &x0 * 2.0 + back) / (dt * dt);
    // ẋ(0) = v since ε(e, e) = I
    Ok((second - gamma.hat(v) * v).amax())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;
    use nalgebra::DMatrix;
    use std::sync::Arc;

    #[test]
    fn identity_frame_gives_lines() {
        let f = FrameField::new(Chart::cube(2), Arc::new(|_| DMatrix::identity(2, 2)));
        let v = DVector::from_vec(vec![0.5, -0.25]);
        let c = one_parameter_curve(&f, &[0.0, 0.0], &v, 1.0, 10).unwrap();
        assert!(!c.exited);
        let last = c.points.last().unwrap();
        assert!((last[0] - 0.5).abs() < 1e-12 && (last[1] + 0.25).abs() < 1e-12);
    }

    #[test]
    fn affine_frame_gives_exponential() {
        let chart = Chart::new(vec![0.5, -1.0], vec![3.0, 1.0], 1e-3).unwrap();
        let f = FrameField::new(chart, Arc::new(|x| DMatrix::identity(2, 2) * x[0]));
        let v = DVector::from_vec(vec![1.0, 0.0]);
        let c = one_parameter_curve(&f, &[1.0, 0.0], &v, 1.0, 100).unwrap();
        let last = c.points.last().unwrap();
        assert!((last[0] - 1f64.exp()).abs() < 1e-8 && last[1].abs() < 1e-12);
        let out = one_parameter_curve(&f, &[1.0, 0.0], &v, 3.0, 100).unwrap();
        assert!(out.exited && out.points.len() < 101);
        assert!(geodesic_residual(&f, &[1.0, 0.0], &v).unwrap() < 1e-5);
    }
}

//! Fixed-step RK4 comparison of `x' = p(x)` with its quadratized system.

use serde::Serialize;
use thiserror::Error;

use crate::quadsys::Quadratization;
use crate::scalars::Complex;
use crate::unipoly::UniPoly;

/// States larger than this in modulus count as a blow-up.
pub const BLOW_UP_THRESHOLD: f64 = 1e6;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SimError {
    #[error("step size and horizon must be positive and finite (h = {h}, T = {t_end})")]
    InvalidGrid { h: f64, t_end: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimReport {
    pub t_grid: Vec<f64>,
    /// `[re, im]` of the scalar trajectory.
    pub x_original: Vec<[f64; 2]>,
    /// `[re, im]` of the `x` component of the quadratized trajectory.
    pub x_quadratized: Vec<[f64; 2]>,
    pub max_x_deviation: f64,
    pub max_invariant_drift: f64,
    pub blew_up: bool,
    pub blow_up_time: Option<f64>,
}

fn rk4_step(state: &[Complex], h: f64, f: &impl Fn(&[Complex], &mut [Complex])) -> Vec<Complex> {
    let n = state.len();
    let mut k1 = vec![Complex::default(); n];
    let mut k2 = vec![Complex::default(); n];
    let mut k3 = vec![Complex::default(); n];
    let mut k4 = vec![Complex::default(); n];
    let mut tmp = vec![Complex::default(); n];
    f(state, &mut k1);
    for i in 0..n {
        tmp[i] = state[i] + k1[i] * (h / 2.0);
    }
    f(&tmp, &mut k2);
    for i in 0..n {
        tmp[i] = state[i] + k2[i] * (h / 2.0);
    }
    f(&tmp, &mut k3);
    for i in 0..n {
        tmp[i] = state[i] + k3[i] * h;
    }
    f(&tmp, &mut k4);
    (0..n).map(|i| state[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0)).collect()
}

fn escaped(state: &[Complex]) -> bool {
    state.iter().any(|c| !c.re.is_finite() || !c.im.is_finite() || c.norm() > BLOW_UP_THRESHOLD)
}

/// Integrates both systems on the grid `0, h, 2h, ...` up to `t_end`, with
/// `z_i(0) = z_i(x0)`, stopping at the first step where a state escapes.
pub fn integrate_pair(
    p: &UniPoly<Complex>,
    quad: &Quadratization<Complex>,
    x0: f64,
    t_end: f64,
    h: f64,
) -> Result<SimReport, SimError> {
    if !(h > 0.0 && t_end > 0.0 && h.is_finite() && t_end.is_finite()) {
        return Err(SimError::InvalidGrid { h, t_end });
    }
    let vars = quad.new_vars().vars();
    let rhs = quad.rhs();
    let lifted = |w: &[Complex], out: &mut [Complex]| {
        for (k, e) in rhs.iter().enumerate() {
            let mut acc = Complex::default();
            for ((i, j), c) in e.terms() {
                let gi = if i == 0 { Complex::new(1.0, 0.0) } else { w[i - 1] };
                let gj = if j == 0 { Complex::new(1.0, 0.0) } else { w[j - 1] };
                acc += c * gi * gj;
            }
            out[k] = acc;
        }
    };
    let scalar = |w: &[Complex], out: &mut [Complex]| out[0] = p.eval(&w[0]);

    let start = Complex::new(x0, 0.0);
    let mut x = vec![start];
    let mut w: Vec<Complex> = std::iter::once(start).chain(vars.iter().map(|z| z.eval(&start))).collect();

    let steps = (t_end / h).round().max(1.0) as usize;
    let mut report = SimReport {
        t_grid: vec![0.0],
        x_original: vec![[x0, 0.0]],
        x_quadratized: vec![[x0, 0.0]],
        max_x_deviation: 0.0,
        max_invariant_drift: 0.0,
        blew_up: false,
        blow_up_time: None,
    };
    for step in 1..=steps {
        let t = step as f64 * h;
        let next_x = rk4_step(&x, h, &scalar);
        let next_w = rk4_step(&w, h, &lifted);
        if escaped(&next_x) || escaped(&next_w) {
            report.blew_up = true;
            report.blow_up_time = Some(t);
            break;
        }
        x = next_x;
        w = next_w;
        report.max_x_deviation = report.max_x_deviation.max((w[0] - x[0]).norm());
        for (k, z) in vars.iter().enumerate() {
            let drift = (w[k + 1] - z.eval(&x[0])).norm();
            report.max_invariant_drift = report.max_invariant_drift.max(drift);
        }
        report.t_grid.push(t);
        report.x_original.push([x[0].re, x[0].im]);
        report.x_quadratized.push([w[0].re, w[0].im]);
    }
    Ok(report)
}

//! Adaptive Dormand–Prince 5(4) integration for matrix-valued ODEs.
//!
//! State is a dense complex matrix; the embedded fourth-order solution
//! provides the local error estimate. Used by the closed- and open-system
//! integrators, with optional trace renormalization after each accepted step.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMat;

/// Integration controls. Defaults match the engine contracts:
/// relative tolerance 1e-9, absolute tolerance 1e-12.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-12,
            max_steps: 2_000_000,
        }
    }
}

const A2: [f64; 1] = [0.2];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn axpy(acc: &mut CMat, coeff: f64, m: &CMat) {
    if coeff != 0.0 {
        acc.zip_mut_with(m, |a, b| *a += Complex64::new(coeff, 0.0) * b);
    }
}

fn weighted_rms_error(err: &CMat, y: &CMat, y_new: &CMat, rtol: f64, atol: f64) -> f64 {
    let mut acc = 0.0;
    for ((e, a), b) in err.iter().zip(y.iter()).zip(y_new.iter()) {
        let scale = atol + rtol * a.norm().max(b.norm());
        let r = e.norm() / scale;
        acc += r * r;
    }
    (acc / err.len() as f64).sqrt()
}

/// Integrate dY/dt = f(Y) from `t_grid[0]` through every grid point,
/// returning the state at each point (the first entry is `y0` itself).
///
/// `post_step` runs after every accepted step (and on grid outputs); the
/// dynamics here use it to renormalize the state by its trace, which keeps
/// the nonlinear trace-correction flows from accumulating drift. It may fail,
/// e.g. when the trace magnitude underflows.
pub fn integrate_grid<F, P>(
    mut rhs: F,
    y0: &CMat,
    t_grid: &[f64],
    opts: OdeOptions,
    mut post_step: P,
) -> Result<Vec<CMat>>
where
    F: FnMut(&CMat) -> CMat,
    P: FnMut(&mut CMat, f64) -> Result<()>,
{
    assert!(!t_grid.is_empty(), "empty time grid");
    assert!(
        t_grid.windows(2).all(|w| w[1] > w[0]),
        "time grid must be strictly ascending"
    );

    let mut out = Vec::with_capacity(t_grid.len());
    let mut y = y0.clone();
    out.push(y.clone());

    let mut t = t_grid[0];
    let mut h = {
        // Conservative first step from the rhs magnitude.
        let f0 = rhs(&y);
        let ynorm = y.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-12);
        let fnorm = f0.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if fnorm > 0.0 {
            (0.01 * ynorm / fnorm).min(0.1)
        } else {
            0.1
        }
    };
    let mut steps = 0usize;

    for &t_target in &t_grid[1..] {
        while t < t_target {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::NonConvergence { iterations: steps });
            }
            let h_min = f64::EPSILON * 16.0 * t.abs().max(1.0);
            if h < h_min {
                return Err(Error::StepSizeUnderflow { t });
            }
            let h_step = h.min(t_target - t);

            let k1 = rhs(&y);
            let mut s = y.clone();
            axpy(&mut s, h_step * A2[0], &k1);
            let k2 = rhs(&s);
            let mut s = y.clone();
            axpy(&mut s, h_step * A3[0], &k1);
            axpy(&mut s, h_step * A3[1], &k2);
            let k3 = rhs(&s);
            let mut s = y.clone();
            axpy(&mut s, h_step * A4[0], &k1);
            axpy(&mut s, h_step * A4[1], &k2);
            axpy(&mut s, h_step * A4[2], &k3);
            let k4 = rhs(&s);
            let mut s = y.clone();
            axpy(&mut s, h_step * A5[0], &k1);
            axpy(&mut s, h_step * A5[1], &k2);
            axpy(&mut s, h_step * A5[2], &k3);
            axpy(&mut s, h_step * A5[3], &k4);
            let k5 = rhs(&s);
            let mut s = y.clone();
            axpy(&mut s, h_step * A6[0], &k1);
            axpy(&mut s, h_step * A6[1], &k2);
            axpy(&mut s, h_step * A6[2], &k3);
            axpy(&mut s, h_step * A6[3], &k4);
            axpy(&mut s, h_step * A6[4], &k5);
            let k6 = rhs(&s);

            let ks = [&k1, &k2, &k3, &k4, &k5, &k6];
            let mut y5 = y.clone();
            for (i, k) in ks.iter().enumerate() {
                axpy(&mut y5, h_step * B5[i], k);
            }
            let k7 = rhs(&y5);

            let mut err: CMat = ndarray::Array2::zeros(y.raw_dim());
            for (i, k) in ks.iter().enumerate() {
                axpy(&mut err, h_step * (B5[i] - B4[i]), k);
            }
            axpy(&mut err, h_step * (B5[6] - B4[6]), &k7);

            let err_norm = weighted_rms_error(&err, &y, &y5, opts.rtol, opts.atol);
            if err_norm <= 1.0 {
                t += h_step;
                y = y5;
                post_step(&mut y, t)?;
            }
            let factor = if err_norm > 0.0 {
                (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
            } else {
                5.0
            };
            h = h_step * factor;
        }
        out.push(y.clone());
        t = t_target;
    }
    Ok(out)
}

//! Adaptive Dormand-Prince 5(4) integrator over plain slices.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; estimated from the derivative when absent.
    pub h0: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-13,
            h0: None,
            max_steps: 10_000_000,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th minus 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates `y' = f(t, y)` from `t0`, calling `on_output` at every time in
/// `t_out` (non-decreasing, all ≥ t0). Steps land exactly on output times.
pub fn integrate<F, O>(
    mut f: F,
    y0: &[f64],
    t0: f64,
    t_out: &[f64],
    opts: &OdeOptions,
    mut on_output: O,
) -> Result<OdeStats>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    O: FnMut(f64, &[f64]) -> Result<()>,
{
    let n = y0.len();
    let mut stats = OdeStats::default();
    if t_out.windows(2).any(|w| w[1] < w[0]) || t_out.first().is_some_and(|&t| t < t0) {
        return Err(Error::params("output times must be non-decreasing and >= t0"));
    }
    let mut y = y0.to_vec();
    let mut t = t0;
    let mut k1 = vec![0.0; n];
    let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) = (
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
    );
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    f(t, &y, &mut k1);
    stats.evaluations += 1;

    let mut h = match opts.h0 {
        Some(h) => h,
        None => {
            let scale = |i: usize| opts.atol + opts.rtol * y[i].abs();
            let d0 = (0..n).map(|i| (y[i] / scale(i)).abs()).fold(0.0, f64::max);
            let d1 = (0..n).map(|i| (k1[i] / scale(i)).abs()).fold(0.0, f64::max);
            if d0 < 1e-5 || d1 < 1e-5 {
                1e-6
            } else {
                0.01 * d0 / d1
            }
        }
    };

    for &target in t_out {
        while t < target {
            if stats.accepted + stats.rejected >= opts.max_steps {
                return Err(Error::Integration {
                    t,
                    reason: format!("exceeded {} steps", opts.max_steps),
                    last_state: y,
                });
            }
            let remaining = target - t;
            let last = h >= remaining;
            let step = if last { remaining } else { h };
            if step < 1e-14 * t.abs().max(1.0) && !last {
                return Err(Error::Integration {
                    t,
                    reason: format!("step size underflow (h = {step:e})"),
                    last_state: y,
                });
            }

            for i in 0..n {
                tmp[i] = y[i] + step * A21 * k1[i];
            }
            f(t + C2 * step, &tmp, &mut k2);
            for i in 0..n {
                tmp[i] = y[i] + step * (A31 * k1[i] + A32 * k2[i]);
            }
            f(t + C3 * step, &tmp, &mut k3);
            for i in 0..n {
                tmp[i] = y[i] + step * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            f(t + C4 * step, &tmp, &mut k4);
            for i in 0..n {
                tmp[i] = y[i] + step * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            f(t + C5 * step, &tmp, &mut k5);
            for i in 0..n {
                tmp[i] = y[i]
                    + step
                        * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
            }
            f(t + step, &tmp, &mut k6);
            for i in 0..n {
                y_new[i] = y[i]
                    + step * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
            }
            f(t + step, &y_new, &mut k7);
            stats.evaluations += 6;

            let mut err = 0.0f64;
            for i in 0..n {
                let e = step
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
                err = err.max((e / sc).abs());
            }
            if !err.is_finite() {
                return Err(Error::Integration {
                    t,
                    reason: "non-finite state".into(),
                    last_state: y,
                });
            }

            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                t = if last { target } else { t + step };
                std::mem::swap(&mut y, &mut y_new);
                std::mem::swap(&mut k1, &mut k7);
                stats.accepted += 1;
                // Do not let a short final step shrink the next one.
                h = if last { h.max(step * factor) } else { step * factor };
            } else {
                stats.rejected += 1;
                h = step * factor;
                if h < 1e-14 * t.abs().max(1.0) {
                    return Err(Error::Integration {
                        t,
                        reason: format!("step size underflow (h = {h:e})"),
                        last_state: y,
                    });
                }
            }
        }
        on_output(t, &y)?;
    }
    Ok(stats)
}

//! Embedded Runge-Kutta 5(4) with Dormand-Prince coefficients.

use super::{all_finite, CScalar, TimeGrid, Trajectory};
use crate::error::{Error, Result};

/// State norm above which a trajectory is declared to have blown up.
pub const OVERFLOW_GUARD: f64 = 1e12;

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
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order weights minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// Integrate `dy/dt = f(t, y)` over `grid`, returning the solution at every
/// grid sample.
///
/// Steps are chosen adaptively so that the scaled local error
/// `|err_i| / (atol + rtol * max(|y_i|, |y_i'|))` has unit RMS or less; grid
/// samples are hit exactly. When `max_i |y_i|` exceeds [`OVERFLOW_GUARD`]
/// integration stops and the remaining samples are marked invalid.
pub fn rk45<F>(mut f: F, y0: &[CScalar], grid: &TimeGrid, rtol: f64, atol: f64) -> Result<Trajectory>
where
    F: FnMut(f64, &[CScalar], &mut [CScalar]),
{
    if !(rtol > 0.0 && atol > 0.0) {
        return Err(Error::InvalidParameter("rk45 tolerances must be positive".into()));
    }
    let n = y0.len();
    let times = grid.samples();
    let span = grid.t1() - grid.t0();
    let h_min = 1e-14 * span;

    let zero = CScalar::new(0.0, 0.0);
    let mut y = y0.to_vec();
    let mut k = vec![vec![zero; n]; 7];
    let mut stage = vec![zero; n];
    let mut y_new = vec![zero; n];

    let mut states = Vec::with_capacity(times.len());
    states.push(y.clone());
    if norm_inf(&y) > OVERFLOW_GUARD {
        return Ok(Trajectory::truncated(times, states, grid.t0()));
    }

    let mut t = grid.t0();
    f(t, &y, &mut k[0]);
    if !all_finite(&k[0]) {
        return Ok(Trajectory::truncated(times, states, t));
    }
    let mut h = initial_step(&mut f, t, &y, &k[0], span, rtol, atol);

    for &target in &times[1..] {
        while t < target {
            let remaining = target - t;
            let truncated = h >= remaining || remaining - h < 1e-12 * span;
            let step = if truncated { remaining } else { h };

            stage_eval(&mut f, t, step, &y, &mut k, &mut stage, &mut y_new);

            let err = if all_finite(&y_new) && all_finite(&k[6]) {
                error_norm(&y, &y_new, &k, step, rtol, atol)
            } else {
                f64::INFINITY
            };

            if err <= 1.0 {
                t = if truncated { target } else { t + step };
                std::mem::swap(&mut y, &mut y_new);
                k.swap(0, 6);
                if norm_inf(&y) > OVERFLOW_GUARD {
                    return Ok(Trajectory::truncated(times, states, t));
                }
                let factor = if err == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * err.powf(-0.2)).min(MAX_FACTOR)
                };
                h = if truncated { h.max(step * factor) } else { step * factor };
            } else {
                let factor = if err.is_finite() {
                    (SAFETY * err.powf(-0.2)).max(MIN_FACTOR)
                } else {
                    MIN_FACTOR
                };
                h = step * factor;
                if h < h_min {
                    return Err(Error::StepSizeUnderflow { t, step: h });
                }
            }
        }
        states.push(y.clone());
    }
    Ok(Trajectory::complete(times, states))
}

#[allow(clippy::too_many_arguments)]
fn stage_eval<F>(
    f: &mut F,
    t: f64,
    h: f64,
    y: &[CScalar],
    k: &mut [Vec<CScalar>],
    stage: &mut [CScalar],
    y_new: &mut [CScalar],
) where
    F: FnMut(f64, &[CScalar], &mut [CScalar]),
{
    let n = y.len();
    for i in 0..n {
        stage[i] = y[i] + h * A21 * k[0][i];
    }
    f(t + C2 * h, stage, &mut k[1]);
    for i in 0..n {
        stage[i] = y[i] + h * (A31 * k[0][i] + A32 * k[1][i]);
    }
    f(t + C3 * h, stage, &mut k[2]);
    for i in 0..n {
        stage[i] = y[i] + h * (A41 * k[0][i] + A42 * k[1][i] + A43 * k[2][i]);
    }
    f(t + C4 * h, stage, &mut k[3]);
    for i in 0..n {
        stage[i] = y[i] + h * (A51 * k[0][i] + A52 * k[1][i] + A53 * k[2][i] + A54 * k[3][i]);
    }
    f(t + C5 * h, stage, &mut k[4]);
    for i in 0..n {
        stage[i] = y[i]
            + h * (A61 * k[0][i] + A62 * k[1][i] + A63 * k[2][i] + A64 * k[3][i] + A65 * k[4][i]);
    }
    f(t + h, stage, &mut k[5]);
    for i in 0..n {
        y_new[i] = y[i]
            + h * (A71 * k[0][i] + A73 * k[2][i] + A74 * k[3][i] + A75 * k[4][i] + A76 * k[5][i]);
    }
    f(t + h, y_new, &mut k[6]);
}

fn error_norm(
    y: &[CScalar],
    y_new: &[CScalar],
    k: &[Vec<CScalar>],
    h: f64,
    rtol: f64,
    atol: f64,
) -> f64 {
    let n = y.len();
    if n == 0 {
        return 0.0;
    }
    let sum: f64 = (0..n)
        .map(|i| {
            let e = h
                * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i]
                    + E7 * k[6][i]);
            let scale = atol + rtol * y[i].norm().max(y_new[i].norm());
            (e.norm() / scale).powi(2)
        })
        .sum();
    (sum / n as f64).sqrt()
}

fn initial_step<F>(
    f: &mut F,
    t: f64,
    y: &[CScalar],
    f0: &[CScalar],
    span: f64,
    rtol: f64,
    atol: f64,
) -> f64
where
    F: FnMut(f64, &[CScalar], &mut [CScalar]),
{
    let scaled = |v: &[CScalar]| -> f64 {
        if v.is_empty() {
            return 0.0;
        }
        let s: f64 = v
            .iter()
            .zip(y)
            .map(|(vi, yi)| (vi.norm() / (atol + rtol * yi.norm())).powi(2))
            .sum();
        (s / v.len() as f64).sqrt()
    };
    let d0 = scaled(y);
    let d1 = scaled(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(span);

    let y1: Vec<CScalar> = y.iter().zip(f0).map(|(yi, fi)| yi + h0 * fi).collect();
    let mut f1 = vec![CScalar::new(0.0, 0.0); y.len()];
    f(t + h0, &y1, &mut f1);
    if !all_finite(&f1) {
        return h0;
    }
    let diff: Vec<CScalar> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = scaled(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span)
}

fn norm_inf(v: &[CScalar]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

//! Exact back-substitution for `dy/dt = A y + b` with upper-triangular `A`.
//!
//! On each grid interval every component is expanded as a power series in
//! the local time. Because `A` is upper triangular the Taylor coefficients of
//! component `k` only depend on those of components `j > k`, so the series
//! are built from the last component upwards. This is the variation of
//! constants formula evaluated through its convergent local expansion;
//! intervals are subdivided so that `rho * h <= 1` with `rho` the largest
//! absolute row sum of `A`, which keeps every term bounded and the
//! truncation below double precision. On long grids the same expansion is
//! applied to the unit vectors once to obtain the interval propagator.

use super::{all_finite, CMatrix, CScalar, TimeGrid, Trajectory};
use crate::error::{Error, Result};

const SUBDIAGONAL_RTOL: f64 = 1e-15;
const MAX_SCALED_STEP: f64 = 1.0;
const TRUNCATION: f64 = 1e-18;
const MAX_TERMS: usize = 48;

struct Row {
    diag: CScalar,
    upper: Vec<(usize, CScalar)>,
    forcing: CScalar,
}

pub fn solve_upper_triangular_linear(
    a: &CMatrix,
    b: &[CScalar],
    y0: &[CScalar],
    grid: &TimeGrid,
) -> Result<Trajectory> {
    let n = a.rows();
    if !a.is_square() || b.len() != n || y0.len() != n {
        return Err(Error::InvalidParameter(format!(
            "system shape mismatch: A is {}x{}, b has {}, y0 has {}",
            a.rows(),
            a.cols(),
            b.len(),
            y0.len()
        )));
    }
    let threshold = SUBDIAGONAL_RTOL * a.max_abs();
    for i in 0..n {
        for j in 0..i {
            if a[(i, j)].norm() > threshold {
                return Err(Error::NotUpperTriangular { row: i, col: j });
            }
        }
    }

    let zero = CScalar::new(0.0, 0.0);
    let rows: Vec<Row> = (0..n)
        .map(|i| Row {
            diag: a[(i, i)],
            upper: (i + 1..n)
                .filter(|&j| a[(i, j)] != zero)
                .map(|j| (j, a[(i, j)]))
                .collect(),
            forcing: b[i],
        })
        .collect();
    let rho = rows
        .iter()
        .map(|r| r.diag.norm() + r.upper.iter().map(|(_, v)| v.norm()).sum::<f64>())
        .fold(0.0, f64::max);

    let times = grid.samples();
    let mut states = Vec::with_capacity(times.len());
    let mut y = y0.to_vec();
    states.push(y.clone());
    let mut coeffs = vec![zero; n * (MAX_TERMS + 1)];
    let dt = (grid.t1() - grid.t0()) / grid.n_steps() as f64;
    let substeps = ((rho * dt) / MAX_SCALED_STEP).ceil().max(1.0) as usize;
    let h = dt / substeps as f64;
    let terms = series_terms(rho * h);

    // With more intervals than unknowns it pays to form the one-interval
    // propagator once and reuse it.
    let propagator = (n + 1 < grid.n_steps()).then(|| {
        let mut phi = vec![zero; n * n];
        let mut col = vec![zero; n];
        for j in 0..n {
            col.iter_mut().for_each(|c| *c = zero);
            col[j] = CScalar::new(1.0, 0.0);
            for _ in 0..substeps {
                advance(&rows, &mut col, h, terms, &mut coeffs, false);
            }
            for i in 0..=j {
                phi[i * n + j] = col[i];
            }
        }
        let mut psi = vec![zero; n];
        for _ in 0..substeps {
            advance(&rows, &mut psi, h, terms, &mut coeffs, true);
        }
        (phi, psi)
    });

    let mut next = vec![zero; n];
    for i in 1..times.len() {
        match &propagator {
            Some((phi, psi)) => {
                for r in 0..n {
                    let row = &phi[r * n..(r + 1) * n];
                    next[r] = psi[r] + (r..n).map(|c| row[c] * y[c]).sum::<CScalar>();
                }
                std::mem::swap(&mut y, &mut next);
            }
            None => {
                for _ in 0..substeps {
                    advance(&rows, &mut y, h, terms, &mut coeffs, true);
                }
            }
        }
        if !all_finite(&y) {
            let t_fail = times[i - 1];
            return Ok(Trajectory::truncated(times, states, t_fail));
        }
        states.push(y.clone());
    }
    Ok(Trajectory::complete(times, states))
}

/// Smallest `m` with `x^m / m! < TRUNCATION`.
fn series_terms(x: f64) -> usize {
    if x == 0.0 {
        return 1;
    }
    let mut term = 1.0;
    for m in 1..=MAX_TERMS {
        term *= x / m as f64;
        if term < TRUNCATION {
            return m;
        }
    }
    MAX_TERMS
}

fn advance(
    rows: &[Row],
    y: &mut [CScalar],
    h: f64,
    terms: usize,
    coeffs: &mut [CScalar],
    forcing: bool,
) {
    let stride = MAX_TERMS + 1;
    for k in (0..rows.len()).rev() {
        let row = &rows[k];
        coeffs[k * stride] = y[k];
        for m in 0..terms {
            let mut s = row.diag * coeffs[k * stride + m];
            for &(j, v) in &row.upper {
                s += v * coeffs[j * stride + m];
            }
            if m == 0 && forcing {
                s += row.forcing;
            }
            coeffs[k * stride + m + 1] = s * (h / (m + 1) as f64);
        }
        // smallest terms first
        y[k] = coeffs[k * stride..=k * stride + terms].iter().rev().sum();
    }
}

//! Complex kernels shared by every lift: the principal logarithm, a dense
//! complex matrix, uniform time grids, sampled trajectories, an adaptive
//! Dormand-Prince integrator and an exact solver for upper-triangular
//! linear systems.

mod rk45;
mod triangular;

use std::f64::consts::PI;
use std::ops::{Index, IndexMut};

pub use num_complex::Complex64 as CScalar;
pub use rk45::{rk45, OVERFLOW_GUARD};
pub use triangular::solve_upper_triangular_linear;

use crate::error::{Error, Result};

pub const I: CScalar = CScalar::new(0.0, 1.0);

/// `ln|z| + i Arg(z)` with `Arg(z)` in `(-pi, pi]`.
///
/// The negative real axis maps to `+pi` regardless of the sign of a zero
/// imaginary part.
pub fn principal_log(z: CScalar) -> Result<CScalar> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain);
    }
    let mut arg = z.im.atan2(z.re);
    if arg <= -PI {
        arg = PI;
    }
    Ok(CScalar::new(z.norm().ln(), arg))
}

/// `z^k` by repeated multiplication; `z^0 = 1`.
pub fn powi(z: CScalar, k: usize) -> CScalar {
    let mut acc = CScalar::new(1.0, 0.0);
    for _ in 0..k {
        acc *= z;
    }
    acc
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<CScalar>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![CScalar::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<CScalar>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::InvalidParameter("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: n_rows,
            cols: n_cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[CScalar] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[CScalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `j - i` over nonzero entries (0 for a diagonal matrix).
    pub fn upper_bandwidth(&self) -> usize {
        self.nonzeros()
            .filter(|&(i, j)| j > i)
            .map(|(i, j)| j - i)
            .max()
            .unwrap_or(0)
    }

    /// Largest `i - j` over nonzero entries.
    pub fn lower_bandwidth(&self) -> usize {
        self.nonzeros()
            .filter(|&(i, j)| i > j)
            .map(|(i, j)| i - j)
            .max()
            .unwrap_or(0)
    }

    /// True iff every entry strictly below the diagonal is exactly zero.
    pub fn is_upper_triangular(&self) -> bool {
        self.lower_bandwidth() == 0
    }

    fn nonzeros(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, z)| **z != CScalar::new(0.0, 0.0))
            .map(move |(idx, _)| (idx / self.cols, idx % self.cols))
    }

    pub fn mul_vec(&self, x: &[CScalar], out: &mut [CScalar]) {
        for (r, o) in out.iter_mut().enumerate().take(self.rows) {
            *o = self.row(r).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = CScalar;

    fn index(&self, (r, c): (usize, usize)) -> &CScalar {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut CScalar {
        &mut self.data[r * self.cols + c]
    }
}

/// Uniform samples `t0 + (t1 - t0) k / n_steps`, `k = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TimeGrid {
    t0: f64,
    t1: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, t1: f64, n_steps: usize) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite()) || t0 < 0.0 || t1 <= t0 {
            return Err(Error::InvalidParameter(format!(
                "time grid needs 0 <= t0 < t1, got [{t0}, {t1}]"
            )));
        }
        if n_steps == 0 {
            return Err(Error::InvalidParameter("time grid needs n_steps >= 1".into()));
        }
        Ok(Self { t0, t1, n_steps })
    }

    /// Grid on `[0, t1]`.
    pub fn span(t1: f64, n_steps: usize) -> Result<Self> {
        Self::new(0.0, t1, n_steps)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sample(&self, k: usize) -> f64 {
        if k == self.n_steps {
            self.t1
        } else {
            self.t0 + (self.t1 - self.t0) * k as f64 / self.n_steps as f64
        }
    }

    pub fn samples(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.sample(k)).collect()
    }
}

/// A state vector per grid sample.
///
/// Samples at index `valid_samples()` and beyond are not trustworthy (they
/// hold NaN); this happens when the integrator crossed the overflow guard.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<Vec<CScalar>>,
    valid_samples: usize,
    overflow_time: Option<f64>,
}

impl Trajectory {
    pub(crate) fn complete(times: Vec<f64>, states: Vec<Vec<CScalar>>) -> Self {
        let valid_samples = states.len();
        Self {
            times,
            states,
            valid_samples,
            overflow_time: None,
        }
    }

    pub(crate) fn truncated(
        times: Vec<f64>,
        mut states: Vec<Vec<CScalar>>,
        overflow_time: f64,
    ) -> Self {
        let valid_samples = states.len();
        let dim = states.first().map_or(0, Vec::len);
        states.resize(times.len(), vec![CScalar::new(f64::NAN, f64::NAN); dim]);
        Self {
            times,
            states,
            valid_samples,
            overflow_time: Some(overflow_time),
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[Vec<CScalar>] {
        &self.states
    }

    pub fn state(&self, sample: usize) -> &[CScalar] {
        &self.states[sample]
    }

    /// Values of one lifted component across all samples.
    pub fn component(&self, k: usize) -> Vec<CScalar> {
        self.states.iter().map(|s| s[k]).collect()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, Vec::len)
    }

    pub fn valid_samples(&self) -> usize {
        self.valid_samples
    }

    pub fn is_valid(&self, sample: usize) -> bool {
        sample < self.valid_samples
    }

    pub fn is_complete(&self) -> bool {
        self.valid_samples == self.times.len()
    }

    /// Time at which the integrator crossed the overflow guard, if it did.
    pub fn overflow_time(&self) -> Option<f64> {
        self.overflow_time
    }

    /// Same samples restricted to the given components.
    pub fn select(&self, components: &[usize]) -> Trajectory {
        Trajectory {
            times: self.times.clone(),
            states: self
                .states
                .iter()
                .map(|s| components.iter().map(|&k| s[k]).collect())
                .collect(),
            valid_samples: self.valid_samples,
            overflow_time: self.overflow_time,
        }
    }
}

pub(crate) fn all_finite(v: &[CScalar]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_identity_and_negative_axis() {
        assert_eq!(principal_log(CScalar::new(1.0, 0.0)).unwrap(), CScalar::new(0.0, 0.0));
        let l = principal_log(CScalar::new(-1.0, 0.0)).unwrap();
        assert!(l.re.abs() < 1e-16 && l.im == PI);
        // a negative zero imaginary part must not flip the branch to -pi
        let l = principal_log(CScalar::new(-1.0, -0.0)).unwrap();
        assert_eq!(l.im, PI);
    }

    #[test]
    fn log_inverts_exp() {
        let z = CScalar::new(2.0, 0.3);
        let back = principal_log(z.exp()).unwrap();
        assert!((back - z).norm() < 1e-14);
    }

    #[test]
    fn log_of_zero_is_domain_error() {
        assert!(matches!(principal_log(CScalar::new(0.0, 0.0)), Err(Error::Domain)));
    }

    #[test]
    fn grid_samples_hit_endpoints() {
        let g = TimeGrid::new(0.0, 0.3, 3).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.sample(0), 0.0);
        assert_eq!(g.sample(3), 0.3);
        assert!(TimeGrid::new(0.0, 1.0, 0).is_err());
        assert!(TimeGrid::new(1.0, 1.0, 4).is_err());
    }

    #[test]
    fn bandwidths() {
        let z = CScalar::new(0.0, 0.0);
        let o = CScalar::new(1.0, 0.0);
        let m = CMatrix::from_rows(vec![vec![o, o, z], vec![o, o, o], vec![z, z, o]]).unwrap();
        assert_eq!(m.upper_bandwidth(), 1);
        assert_eq!(m.lower_bandwidth(), 1);
        assert!(!m.is_upper_triangular());
    }
}

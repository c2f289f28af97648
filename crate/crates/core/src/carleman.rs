//! Carleman lift `x -> [x, x^2, ...]`: finite sections, their solution and
//! the a-priori error bound for the first component.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};
use crate::numerics::{
    powi, rk45, solve_upper_triangular_linear, CMatrix, CScalar, TimeGrid, Trajectory,
};
use crate::trigpoly::MaclaurinSeries;

/// Tolerances used when a section has to be integrated numerically.
pub const SECTION_RTOL: f64 = 1e-11;
pub const SECTION_ATOL: f64 = 1e-13;

/// Leading `N x N` block of the Carleman system `dx/dt = A x + a`.
///
/// Row `k` (1-based) holds `k c_{k'-k+1}` in column `k' >= k - 1`.
#[derive(Debug, Clone)]
pub struct CarlemanSection {
    matrix: CMatrix,
    affine: Vec<CScalar>,
    source: MaclaurinSeries,
}

impl CarlemanSection {
    pub fn order(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn affine(&self) -> &[CScalar] {
        &self.affine
    }

    pub fn source(&self) -> &MaclaurinSeries {
        &self.source
    }

    /// True when `c_0 = 0`, i.e. the origin is an equilibrium and the
    /// matrix is upper triangular.
    pub fn is_homogeneous(&self) -> bool {
        self.source.coeff(0) == CScalar::new(0.0, 0.0)
    }

    /// `[x0, x0^2, ..., x0^N]`.
    pub fn initial_state(&self, x0: CScalar) -> Vec<CScalar> {
        (1..=self.order()).map(|k| powi(x0, k)).collect()
    }
}

pub fn build_carleman_section(c: &MaclaurinSeries, order: usize) -> Result<CarlemanSection> {
    if order == 0 {
        return Err(Error::InvalidParameter("section order must be at least 1".into()));
    }
    if c.n_max() < order {
        return Err(Error::InsufficientCoefficients {
            needed: order,
            available: c.n_max(),
        });
    }
    let mut matrix = CMatrix::zeros(order, order);
    for row in 0..order {
        let k = row + 1;
        for col in row.saturating_sub(1)..order {
            let kp = col + 1;
            matrix[(row, col)] = k as f64 * c.coeff(kp + 1 - k);
        }
    }
    let mut affine = vec![CScalar::new(0.0, 0.0); order];
    affine[0] = c.coeff(0);
    Ok(CarlemanSection {
        matrix,
        affine,
        source: c.clone(),
    })
}

/// Solve the section from `x_{k,N}(0) = x0^k`.
///
/// Homogeneous sections go through the exact triangular solver; otherwise
/// the matrix has a populated subdiagonal and the system is integrated with
/// [`rk45`].
pub fn solve_finite_section(
    sec: &CarlemanSection,
    x0: CScalar,
    grid: &TimeGrid,
) -> Result<Trajectory> {
    let y0 = sec.initial_state(x0);
    if sec.is_homogeneous() {
        return solve_upper_triangular_linear(&sec.matrix, &sec.affine, &y0, grid);
    }
    let a = &sec.matrix;
    let b = &sec.affine;
    rk45(
        |_, y, dy| {
            a.mul_vec(y, dy);
            for (d, bi) in dy.iter_mut().zip(b) {
                *d += bi;
            }
        },
        &y0,
        grid,
        SECTION_RTOL,
        SECTION_ATOL,
    )
}

/// Constants of the Carleman error bound for one initial value.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CarlemanBoundReport {
    pub c0: f64,
    pub r0: f64,
    pub x0: CScalar,
    /// `max(1, R0 |x0| e^2)`
    pub tilde_r0: f64,
    /// Guaranteed time range of the bound.
    pub t_star: f64,
}

impl CarlemanBoundReport {
    pub fn new(c0: f64, r0: f64, x0: CScalar) -> Result<Self> {
        if !(c0 > 0.0 && r0 > 0.0 && c0.is_finite() && r0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "bound constants must be positive, got C0 = {c0}, R0 = {r0}"
            )));
        }
        let abs_x0 = x0.norm();
        let tilde_r0 = (r0 * abs_x0 * E * E).max(1.0);
        let log_term = if abs_x0 == 0.0 {
            2.0
        } else {
            (tilde_r0 / (E * r0 * abs_x0)).ln().min(2.0)
        };
        let t_star = tilde_r0 / (c0 * (tilde_r0 + 1.0) * tilde_r0.exp()) * log_term;
        Ok(Self {
            c0,
            r0,
            x0,
            tilde_r0,
            t_star,
        })
    }

    /// Upper bound on `|x_{1,N}(t) - x(t)|` for `0 <= t <= T*`.
    pub fn bound(&self, order: usize, t: f64) -> Result<f64> {
        if order == 0 {
            return Err(Error::InvalidParameter("section order must be at least 1".into()));
        }
        if t < 0.0 || t > self.t_star * (1.0 + 1e-12) {
            return Err(Error::OutOfTimeRange {
                t,
                limit: self.t_star,
            });
        }
        let abs_x0 = self.x0.norm();
        if abs_x0 == 0.0 {
            return Ok(0.0);
        }
        let n = order as f64;
        let tr = self.tilde_r0;
        let ln_prefactor = tr.ln() + tr - 0.5 * (2.0 * PI).ln() - self.r0.ln() - 1.5 * n.ln();
        let ln_ratio =
            (self.r0 * abs_x0 * E / tr).ln() + self.c0 * (1.0 + 1.0 / tr) * tr.exp() * t;
        Ok((ln_prefactor + n * ln_ratio).exp())
    }
}

pub fn carleman_bound(c0: f64, r0: f64, x0: CScalar, order: usize, t: f64) -> Result<f64> {
    CarlemanBoundReport::new(c0, r0, x0)?.bound(order, t)
}

/// Time up to which `|x(t)| <= M0` is guaranteed for `dx/dt = f(x)` with
/// `|c_n| <= C0 R0^{n-1} / n!`.
pub fn local_state_bound(c0: f64, r0: f64, x0: CScalar, m0: f64) -> Result<f64> {
    let abs_x0 = x0.norm();
    if !(m0 > abs_x0) || !m0.is_finite() {
        return Err(Error::InvalidBound { m0, abs_x0 });
    }
    if !(c0 > 0.0 && r0 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bound constants must be positive, got C0 = {c0}, R0 = {r0}"
        )));
    }
    if abs_x0 == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(m0 * r0 / (c0 * (r0 * m0).exp_m1()) * (m0 / abs_x0).ln())
}

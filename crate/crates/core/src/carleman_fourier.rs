//! Carleman-Fourier lift over exponentials `exp(i(a1 x - a2 x))` of the
//! doubled state `[x, -x]`, its concise single-chain variant, the a-priori
//! bound on the first component, and recovery of `x` by a continuous
//! logarithm.

use std::f64::consts::{E, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{
    principal_log, solve_upper_triangular_linear, CMatrix, CScalar, TimeGrid, Trajectory, I,
};
use crate::trigpoly::TrigPoly;

/// Nonzero pair of nonnegative integers `[alpha1, alpha2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MultiIndex {
    pub alpha1: usize,
    pub alpha2: usize,
}

impl MultiIndex {
    pub fn new(alpha1: usize, alpha2: usize) -> Result<Self> {
        if alpha1 == 0 && alpha2 == 0 {
            return Err(Error::InvalidParameter("multi-index [0, 0] is excluded".into()));
        }
        Ok(Self { alpha1, alpha2 })
    }

    pub fn order(&self) -> usize {
        self.alpha1 + self.alpha2
    }

    /// Position in the flattened state: blocks by increasing order, and
    /// within a block by decreasing `alpha1`.
    pub fn global_index(&self) -> usize {
        let k = self.order();
        (k - 1) * (k + 2) / 2 + self.alpha2
    }

    /// Inverse of [`MultiIndex::global_index`].
    pub fn from_global_index(index: usize) -> Self {
        let mut k = 1;
        while k * (k + 3) / 2 <= index {
            k += 1;
        }
        let alpha2 = index - (k - 1) * (k + 2) / 2;
        Self {
            alpha1: k - alpha2,
            alpha2,
        }
    }

    /// All multi-indices of order `k`, in state order.
    pub fn block(k: usize) -> impl Iterator<Item = MultiIndex> {
        (0..=k).map(move |a2| MultiIndex {
            alpha1: k - a2,
            alpha2: a2,
        })
    }
}

/// Dimension of the order-`n` Carleman-Fourier section, `n (n + 3) / 2`.
pub fn cf_dimension(order: usize) -> usize {
    order * (order + 3) / 2
}

/// Lifted coefficient `h_gamma`: `g_m` on the first axis, `g_{-m}` on the
/// second, zero elsewhere.
fn lifted_coeff(g: &TrigPoly, gamma1: i64, gamma2: i64) -> CScalar {
    let m = g.degree() as i64;
    if gamma2 == 0 && (0..=m).contains(&gamma1) {
        g.coeff(gamma1)
    } else if gamma1 == 0 && (1..=m).contains(&gamma2) {
        g.coeff(-gamma2)
    } else {
        CScalar::new(0.0, 0.0)
    }
}

/// Leading section of the Carleman-Fourier system `dy/dt = B y`, blocks of
/// order `1..=N`.
#[derive(Debug, Clone)]
pub struct CFSection {
    order: usize,
    matrix: CMatrix,
    source: TrigPoly,
}

impl CFSection {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn source(&self) -> &TrigPoly {
        &self.source
    }

    pub fn indices(&self) -> Vec<MultiIndex> {
        (1..=self.order).flat_map(MultiIndex::block).collect()
    }

    /// Block `B_{kl}` of size `(k + 1) x (l + 1)`.
    pub fn block(&self, k: usize, l: usize) -> Result<CMatrix> {
        if k == 0 || l == 0 || k > self.order || l > self.order {
            return Err(Error::InvalidParameter(format!(
                "block ({k}, {l}) outside a section of order {}",
                self.order
            )));
        }
        let r0 = cf_dimension(k - 1);
        let c0 = cf_dimension(l - 1);
        let mut out = CMatrix::zeros(k + 1, l + 1);
        for r in 0..=k {
            for c in 0..=l {
                out[(r, c)] = self.matrix[(r0 + r, c0 + c)];
            }
        }
        Ok(out)
    }

    /// `y_k(0) = [e^{ikx0}, e^{i(k-2)x0}, ..., e^{-ikx0}]` for every block.
    pub fn initial_state(&self, x0: CScalar) -> Vec<CScalar> {
        self.indices()
            .iter()
            .map(|a| (I * (a.alpha1 as f64 - a.alpha2 as f64) * x0).exp())
            .collect()
    }
}

pub fn build_cf_section(g: &TrigPoly, order: usize) -> Result<CFSection> {
    if order == 0 {
        return Err(Error::InvalidParameter("section order must be at least 1".into()));
    }
    let dim = cf_dimension(order);
    let mut matrix = CMatrix::zeros(dim, dim);
    let m = g.degree();
    for k in 1..=order {
        for alpha in MultiIndex::block(k) {
            let scale = alpha.alpha1 as f64 - alpha.alpha2 as f64;
            if scale == 0.0 {
                continue;
            }
            let row = alpha.global_index();
            for l in k..=(k + m).min(order) {
                for beta in MultiIndex::block(l) {
                    let h = lifted_coeff(
                        g,
                        beta.alpha1 as i64 - alpha.alpha1 as i64,
                        beta.alpha2 as i64 - alpha.alpha2 as i64,
                    );
                    if h != CScalar::new(0.0, 0.0) {
                        matrix[(row, beta.global_index())] = I * scale * h;
                    }
                }
            }
        }
    }
    Ok(CFSection {
        order,
        matrix,
        source: g.clone(),
    })
}

/// Solve the section exactly; the matrix is upper triangular because every
/// diagonal block is diagonal.
pub fn solve_cf_section(sec: &CFSection, x0: CScalar, grid: &TimeGrid) -> Result<Trajectory> {
    let zero = vec![CScalar::new(0.0, 0.0); sec.dim()];
    solve_upper_triangular_linear(&sec.matrix, &zero, &sec.initial_state(x0), grid)
}

/// Single chain `z_k = e^{ikx}`, `k = 1..=N`, closed when the governing
/// function has no negative frequencies.
#[derive(Debug, Clone)]
pub struct ConciseCFSection {
    matrix: CMatrix,
    source: TrigPoly,
}

impl ConciseCFSection {
    pub fn order(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn source(&self) -> &TrigPoly {
        &self.source
    }

    pub fn initial_state(&self, x0: CScalar) -> Vec<CScalar> {
        (1..=self.order()).map(|k| (I * k as f64 * x0).exp()).collect()
    }
}

pub fn build_concise_cf(g: &TrigPoly, order: usize) -> Result<ConciseCFSection> {
    if order == 0 {
        return Err(Error::InvalidParameter("section order must be at least 1".into()));
    }
    if let Some(frequency) = g.first_negative_frequency() {
        return Err(Error::NegativeFrequencyPresent { frequency });
    }
    let mut matrix = CMatrix::zeros(order, order);
    for r in 0..order {
        let k = (r + 1) as f64;
        for c in r..order.min(r + g.degree() + 1) {
            matrix[(r, c)] = I * k * g.coeff((c - r) as i64);
        }
    }
    Ok(ConciseCFSection {
        matrix,
        source: g.clone(),
    })
}

pub fn solve_concise_cf(
    sec: &ConciseCFSection,
    x0: CScalar,
    grid: &TimeGrid,
) -> Result<Trajectory> {
    let zero = vec![CScalar::new(0.0, 0.0); sec.order()];
    solve_upper_triangular_linear(&sec.matrix, &zero, &sec.initial_state(x0), grid)
}

/// `2 max(|g_0|, (|g_m| + |g_{-m}|) R^m)`.
pub fn d0_general(g: &TrigPoly, r: f64) -> f64 {
    let mut d0 = g.coeff(0).norm();
    for m in 1..=g.degree() as i64 {
        d0 = d0.max((g.coeff(m).norm() + g.coeff(-m).norm()) * r.powi(m as i32));
    }
    2.0 * d0
}

/// `max(|g_0|, |g_m| R^m)` for nonnegative frequencies, used by the
/// global-in-time rate.
pub fn d0_one_sided(g: &TrigPoly, r: f64) -> f64 {
    let mut d0 = g.coeff(0).norm();
    for m in 1..=g.degree() as i64 {
        d0 = d0.max(g.coeff(m).norm() * r.powi(m as i32));
    }
    d0
}

/// Radius maximizing the case-study time range, `e^{|Im x0| + 2}`.
pub fn optimal_r(x0: CScalar) -> f64 {
    (x0.im.abs() + 2.0).exp()
}

/// Constants of the Carleman-Fourier bound for one initial value and
/// radius `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CfBoundReport {
    pub r: f64,
    pub d0: f64,
    pub c0: f64,
    pub abs_im_x0: f64,
    pub t_cf_star: f64,
}

impl CfBoundReport {
    /// Report with the two-sided constant [`d0_general`].
    pub fn new(g: &TrigPoly, x0: CScalar, r: f64) -> Result<Self> {
        Self::with_d0(d0_general(g, r), x0, r)
    }

    /// Report with a caller-chosen growth constant, e.g. `D0 = R` for the
    /// case study.
    pub fn with_d0(d0: f64, x0: CScalar, r: f64) -> Result<Self> {
        if !(r > E) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!("radius R = {r} must exceed e")));
        }
        if !(d0 >= 0.0) || !d0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "growth constant D0 = {d0} must be finite and nonnegative"
            )));
        }
        let abs_im_x0 = x0.im.abs();
        let limit = r.ln() - 1.0;
        if !(abs_im_x0 < limit) {
            return Err(Error::InitialOutOfStrip { abs_im_x0, limit });
        }
        let q = 2.0 * E - 1.0;
        let c0 = ((3.0 * E - 1.0) / q * (abs_im_x0 + r.ln()) - E / q).exp()
            / ((2.0 * PI).sqrt() * (E - 1.0));
        let t_cf_star = if d0 == 0.0 {
            f64::INFINITY
        } else {
            (E - 1.0) / (q * d0) * (r.ln() - abs_im_x0 - 1.0)
        };
        Ok(Self {
            r,
            d0,
            c0,
            abs_im_x0,
            t_cf_star,
        })
    }

    /// Upper bound on `|y_{1,N}(t) e^{-ix(t)} - 1|` for `0 <= t <= T*_CF`.
    pub fn bound(&self, order: usize, t: f64) -> Result<f64> {
        if order == 0 {
            return Err(Error::InvalidParameter("section order must be at least 1".into()));
        }
        if t < 0.0 || t > self.t_cf_star * (1.0 + 1e-12) {
            return Err(Error::OutOfTimeRange {
                t,
                limit: self.t_cf_star,
            });
        }
        let n = order as f64;
        let exponent = (E - 1.0) / (2.0 * E - 1.0);
        let ln_ratio = self.abs_im_x0 + 1.0 - self.r.ln();
        Ok(self.c0
            * (self.d0 * n * t + exponent * n * ln_ratio - 1.5 * n.ln()).exp())
    }
}

pub fn cf_bound(g: &TrigPoly, x0: CScalar, r: f64, order: usize, t: f64) -> Result<f64> {
    CfBoundReport::new(g, x0, r)?.bound(order, t)
}

/// How [`recover_state`] checks that the logarithm is taken close enough
/// to the true value.
#[derive(Debug, Clone, Copy)]
pub enum Gate<'a> {
    /// Exact solution `x(t)` at every sample.
    Reference(&'a [CScalar]),
    /// A priori bound of a section of the given order.
    Bound(&'a CfBoundReport, usize),
    /// Skip the check.
    Unchecked,
}

/// Recover `xi(t) ~ ±x(t)` from the first lifted component via
/// `xi = -i ln y`, continuing the logarithm along the samples.
///
/// `sign = 1` expects `y ~ e^{ix}`, `sign = -1` expects `y ~ e^{-ix}`. The
/// first component of `y1` is used.
pub fn recover_state(y1: &Trajectory, x0: CScalar, sign: i8, gate: Gate<'_>) -> Result<Trajectory> {
    let s = match sign {
        1 => 1.0,
        -1 => -1.0,
        _ => return Err(Error::InvalidParameter(format!("sign must be 1 or -1, got {sign}"))),
    };
    if y1.dim() == 0 {
        return Err(Error::InvalidParameter("trajectory has no components".into()));
    }
    let times = y1.times().to_vec();
    let valid = y1.valid_samples();
    for (index, &t) in times.iter().enumerate().take(valid) {
        let estimate = match gate {
            Gate::Reference(x) => {
                let xr = *x.get(index).ok_or_else(|| {
                    Error::InvalidParameter("reference shorter than trajectory".into())
                })?;
                (y1.state(index)[0] * (-I * s * xr).exp() - 1.0).norm()
            }
            Gate::Bound(report, order) => report.bound(order, t).unwrap_or(f64::INFINITY),
            Gate::Unchecked => 0.0,
        };
        if !(estimate <= 0.5) {
            return Err(Error::GateFailed { index, estimate });
        }
    }

    let mut states = Vec::with_capacity(valid);
    let mut prev = s * x0;
    states.push(vec![prev]);
    for index in 1..valid {
        let mut xi = -I * principal_log(y1.state(index)[0])?;
        xi.re += 2.0 * PI * ((prev.re - xi.re) / (2.0 * PI)).round();
        if (xi - prev).norm() > PI {
            return Err(Error::BranchJump { index: index - 1 });
        }
        states.push(vec![xi]);
        prev = xi;
    }
    Ok(match y1.overflow_time() {
        Some(t) if valid < times.len() => Trajectory::truncated(times, states, t),
        _ => Trajectory::complete(times, states),
    })
}

/// Global-in-time convergence rate of the concise section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GlobalRateParams {
    pub mu0: f64,
    pub r: f64,
    pub d0: f64,
    pub rate: f64,
    /// `rate < 1`
    pub valid: bool,
}

pub fn global_rate(g: &TrigPoly, x0: CScalar, r: f64) -> Result<GlobalRateParams> {
    if let Some(m) = g.first_negative_frequency() {
        return Err(Error::AssumptionViolated(format!(
            "governing function has negative frequency {m}"
        )));
    }
    let mu0 = g.coeff(0).im;
    if !(mu0 > 0.0) {
        return Err(Error::AssumptionViolated(format!(
            "Im g_0 = {mu0} must be positive"
        )));
    }
    let strip = (x0.im.abs() + 1.0).exp();
    if !(r > strip) {
        return Err(Error::AssumptionViolated(format!(
            "R = {r} must exceed e^(|Im x0| + 1) = {strip}"
        )));
    }
    let d0 = d0_one_sided(g, r);
    let lhs = (-x0.im).exp();
    let rhs = mu0 * r / (d0 + mu0);
    if !(lhs < rhs) {
        return Err(Error::AssumptionViolated(format!(
            "e^(-Im x0) = {lhs} must be below mu0 R / (D0 + mu0) = {rhs}"
        )));
    }
    let norm = ((I * x0).exp().norm_sqr() + (-I * x0).exp().norm_sqr()).sqrt();
    let rate = (d0 + mu0) * norm / (mu0 * r);
    Ok(GlobalRateParams {
        mu0,
        r,
        d0,
        rate,
        valid: rate < 1.0,
    })
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> CScalar {
        CScalar::new(re, im)
    }

    fn general_g() -> TrigPoly {
        TrigPoly::new(1, vec![c(0.3, -0.2), c(0.7, 0.1), c(-0.4, 0.5)]).unwrap()
    }

    #[test]
    fn multi_index_roundtrip() {
        for idx in 0..cf_dimension(9) {
            let a = MultiIndex::from_global_index(idx);
            assert_eq!(a.global_index(), idx);
        }
        assert_eq!(MultiIndex::new(2, 0).unwrap().global_index(), 2);
        assert_eq!(MultiIndex::new(0, 2).unwrap().global_index(), 4);
        assert!(MultiIndex::new(0, 0).is_err());
    }

    #[test]
    fn dimensions() {
        let g = general_g();
        assert_eq!(build_cf_section(&g, 2).unwrap().dim(), 5);
        assert_eq!(build_cf_section(&g, 3).unwrap().dim(), 9);
    }

    #[test]
    fn order_one_is_diagonal() {
        let g = general_g();
        let sec = build_cf_section(&g, 1).unwrap();
        let m = sec.matrix();
        assert_eq!(m[(0, 0)], I * g.coeff(0));
        assert_eq!(m[(1, 1)], -I * g.coeff(0));
        assert_eq!(m[(0, 1)], c(0.0, 0.0));
        assert_eq!(m[(1, 0)], c(0.0, 0.0));
    }

    #[test]
    fn order_two_matrix() {
        let g = general_g();
        let (g0, g1, gm1) = (g.coeff(0), g.coeff(1), g.coeff(-1));
        let z = c(0.0, 0.0);
        let expected = [
            [I * g0, z, I * g1, I * gm1, z],
            [z, -I * g0, z, -I * g1, -I * gm1],
            [z, z, 2.0 * I * g0, z, z],
            [z, z, z, z, z],
            [z, z, z, z, -2.0 * I * g0],
        ];
        let sec = build_cf_section(&g, 2).unwrap();
        for r in 0..5 {
            for col in 0..5 {
                assert_eq!(sec.matrix()[(r, col)], expected[r][col], "({r}, {col})");
            }
        }
        assert_eq!(sec.block(1, 2).unwrap().rows(), 2);
        assert_eq!(sec.block(1, 2).unwrap().cols(), 3);
    }

    #[test]
    fn far_blocks_vanish() {
        let g = general_g();
        let sec = build_cf_section(&g, 5).unwrap();
        for k in 1..=5 {
            for l in (k + 2)..=5 {
                assert_eq!(sec.block(k, l).unwrap().max_abs(), 0.0);
            }
        }
        assert!(sec.matrix().is_upper_triangular());
    }

    #[test]
    fn concise_case_study() {
        let a = c(0.8, 0.3);
        let sec = build_concise_cf(&TrigPoly::case_study(a), 3).unwrap();
        let z = c(0.0, 0.0);
        let expected = [[1.0, -1.0, 0.0], [0.0, 2.0, -2.0], [0.0, 0.0, 3.0]];
        for r in 0..3 {
            for col in 0..3 {
                let e = a * I * expected[r][col];
                assert!((sec.matrix()[(r, col)] - e).norm() < 1e-15);
                if expected[r][col] == 0.0 {
                    assert_eq!(sec.matrix()[(r, col)], z);
                }
            }
        }
        assert!(matches!(
            build_concise_cf(&general_g(), 2),
            Err(Error::NegativeFrequencyPresent { frequency: -1 })
        ));
    }

    #[test]
    fn cf_initial_state_ordering() {
        let sec = build_cf_section(&general_g(), 2).unwrap();
        let x0 = c(0.3, 0.1);
        let y0 = sec.initial_state(x0);
        let expect = [
            (I * x0).exp(),
            (-I * x0).exp(),
            (2.0 * I * x0).exp(),
            c(1.0, 0.0),
            (-2.0 * I * x0).exp(),
        ];
        for (a, b) in y0.iter().zip(expect) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn case_study_time_range_at_optimal_radius() {
        for (im, expected) in [(0.0, 0.052_415), (2.0, 0.007_093_5)] {
            let x0 = c(0.4, im);
            let r = optimal_r(x0);
            let rep = CfBoundReport::with_d0(r, x0, r).unwrap();
            let closed = (E - 1.0) / (2.0 * E - 1.0) * (-(im + 2.0f64)).exp();
            assert!((rep.t_cf_star - closed).abs() < 1e-15);
            assert!((rep.t_cf_star - expected).abs() < 1e-6);
        }
    }

    #[test]
    fn bound_preconditions() {
        let g = TrigPoly::case_study(c(1.0, 0.0));
        assert!(matches!(
            CfBoundReport::new(&g, c(0.0, 1.5), 10.0),
            Err(Error::InitialOutOfStrip { .. })
        ));
        assert!(matches!(
            CfBoundReport::new(&g, c(0.0, 0.0), 2.0),
            Err(Error::InvalidParameter(_))
        ));
        let rep = CfBoundReport::new(&g, c(0.0, 0.0), 20.0).unwrap();
        assert!(matches!(
            rep.bound(3, 2.0 * rep.t_cf_star),
            Err(Error::OutOfTimeRange { .. })
        ));
        let b1 = rep.bound(10, 0.0).unwrap();
        let b2 = rep.bound(20, 0.0).unwrap();
        assert!(b2 < b1);
    }

    #[test]
    fn d0_variants() {
        let g = general_g();
        let r = 5.0;
        let expect = 2.0f64.max(0.0) * (g.coeff(0).norm()).max((g.coeff(1).norm() + g.coeff(-1).norm()) * r);
        assert!((d0_general(&g, r) - expect).abs() < 1e-14);
        assert!((d0_one_sided(&g, r) - g.coeff(1).norm() * r).abs() < 1e-14);
    }

    #[test]
    fn recover_exact_exponential() {
        let g0 = c(1.3, 0.2);
        let x0 = c(0.5, -0.3);
        let grid = TimeGrid::span(10.0, 400).unwrap();
        let sec = build_concise_cf(&TrigPoly::new(0, vec![g0]).unwrap(), 1).unwrap();
        let traj = solve_concise_cf(&sec, x0, &grid).unwrap();
        let xi = recover_state(&traj, x0, 1, Gate::Unchecked).unwrap();
        for (t, s) in xi.times().iter().zip(xi.states()) {
            assert!((s[0] - (x0 + g0 * t)).norm() < 1e-9);
        }
        assert_eq!(xi.state(0)[0], x0);
    }

    #[test]
    fn recover_detects_coarse_grid() {
        let g0 = c(0.0, 8.0);
        let grid = TimeGrid::span(1.0, 2).unwrap();
        let sec = build_concise_cf(&TrigPoly::new(0, vec![g0]).unwrap(), 1).unwrap();
        let traj = solve_concise_cf(&sec, c(0.0, 0.0), &grid).unwrap();
        assert!(matches!(
            recover_state(&traj, c(0.0, 0.0), 1, Gate::Unchecked),
            Err(Error::BranchJump { .. })
        ));
    }

    #[test]
    fn recover_gate_rejects_far_reference() {
        let grid = TimeGrid::span(1.0, 4).unwrap();
        let sec = build_concise_cf(&TrigPoly::new(0, vec![c(1.0, 0.0)]).unwrap(), 1).unwrap();
        let traj = solve_concise_cf(&sec, c(0.0, 0.0), &grid).unwrap();
        let reference = vec![c(2.0, 0.0); 5];
        assert!(matches!(
            recover_state(&traj, c(0.0, 0.0), 1, Gate::Reference(&reference)),
            Err(Error::GateFailed { index: 0, .. })
        ));
    }

    #[test]
    fn global_rate_case_study() {
        let g = TrigPoly::case_study(I);
        let x0 = c(0.0, 3.0);
        let r = 5f64.exp();
        let p = global_rate(&g, x0, r).unwrap();
        let expected = (r + 1.0) * ((-6f64).exp() + 6f64.exp()).sqrt() / r;
        assert!((p.rate - expected).abs() < 1e-12 * expected);
        assert!(!p.valid);
        assert!(matches!(
            global_rate(&TrigPoly::case_study(c(1.0, 0.0)), x0, r),
            Err(Error::AssumptionViolated(_))
        ));
    }

    #[test]
    fn global_rate_scales_inversely_with_radius() {
        let g = TrigPoly::new(0, vec![c(0.0, 2.0)]).unwrap();
        let x0 = c(0.1, 0.2);
        let a = global_rate(&g, x0, 100.0).unwrap();
        let b = global_rate(&g, x0, 200.0).unwrap();
        assert!((a.rate / b.rate - 2.0).abs() < 1e-12);
    }
}

//! Closed forms for `dx/dt = a (1 - e^{ix})` with `|a| = 1`.
//!
//! With `E = e^{ix0}` and `w(t) = 1 + (e^{iat} - 1) E` the solution is
//! `x(t) = at + x0 + i ln w(t)`, defined until `w` hits zero. Numerically the
//! equivalent form `e^{-ix(t)} = 1 + (e^{-ix0} - 1) e^{-iat}` is used, which
//! keeps full relative accuracy near the equilibrium `x = 0`.

use std::f64::consts::{E as EULER, FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{CScalar, TimeGrid, I};
use crate::trigpoly::TrigPoly;

/// Spacing of the path used to continue the logarithm and to scan for
/// zeros of `w`.
pub const SCAN_STEP: f64 = 1e-3;
/// `|w|` below this value counts as a blow-up inside [`exact_solution`].
pub const BLOWUP_TOL: f64 = 1e-10;
/// `|w|` below this value at a local minimum counts as a root in
/// [`detect_blowup`].
pub const ROOT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CaseParams {
    a: CScalar,
    x0: CScalar,
}

impl CaseParams {
    pub fn new(a: CScalar, x0: CScalar) -> Result<Self> {
        if (a.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("|a| = {} must be 1", a.norm())));
        }
        if a.re < -1e-12 {
            return Err(Error::InvalidParameter(format!(
                "arg a = {} must lie in [-pi/2, pi/2]",
                a.arg()
            )));
        }
        if !(x0.re.is_finite() && x0.im.is_finite()) {
            return Err(Error::InvalidParameter("x0 must be finite".into()));
        }
        Ok(Self { a, x0 })
    }

    /// `a = e^{i phi}`.
    pub fn from_phi(phi: f64, x0: CScalar) -> Result<Self> {
        if !(-FRAC_PI_2 - 1e-12..=FRAC_PI_2 + 1e-12).contains(&phi) {
            return Err(Error::InvalidParameter(format!(
                "phi = {phi} must lie in [-pi/2, pi/2]"
            )));
        }
        Self::new(CScalar::from_polar(1.0, phi), x0)
    }

    pub fn a(&self) -> CScalar {
        self.a
    }

    pub fn x0(&self) -> CScalar {
        self.x0
    }

    pub fn phi(&self) -> f64 {
        self.a.arg()
    }

    /// Same `a`, different initial value.
    pub fn with_x0(&self, x0: CScalar) -> Self {
        Self { a: self.a, x0 }
    }

    pub fn governing_function(&self) -> TrigPoly {
        TrigPoly::case_study(self.a)
    }

    /// Argument of the logarithm, `1 + (e^{iat} - 1) e^{ix0}`.
    pub fn log_argument(&self, t: f64) -> CScalar {
        1.0 + ((I * self.a * t).exp() - 1.0) * (I * self.x0).exp()
    }

    /// `e^{-ix0} - 1`, accurate for small `x0`.
    fn shift(&self) -> CScalar {
        let (wr, wi) = (self.x0.im, -self.x0.re);
        let half = (0.5 * wi).sin();
        CScalar::new(
            wr.exp_m1() * wi.cos() - 2.0 * half * half,
            wr.exp() * wi.sin(),
        )
    }
}

/// `e^{ix(t)}`, which needs no branch choice.
pub fn exact_exp_ix(p: &CaseParams, t: f64) -> Result<CScalar> {
    if p.log_argument(t).norm() < BLOWUP_TOL {
        return Err(Error::BlowUpReached(t));
    }
    Ok(1.0 / (1.0 + p.shift() * (-I * p.a * t).exp()))
}

/// `x(t)` with the logarithm continued from `x(0) = x0`.
pub fn exact_solution(p: &CaseParams, t: f64) -> Result<CScalar> {
    Ok(exact_at(p, &[t])?[0])
}

/// `x(t)` on every grid sample.
pub fn exact_trajectory(p: &CaseParams, grid: &TimeGrid) -> Result<Vec<CScalar>> {
    exact_at(p, &grid.samples())
}

/// `x` at nondecreasing, nonnegative times.
pub fn exact_at(p: &CaseParams, times: &[f64]) -> Result<Vec<CScalar>> {
    let q = p.shift();
    let mut out = Vec::with_capacity(times.len());
    let mut t_prev = 0.0;
    let mut v_prev = q;
    // running estimate of the continuous arg of e^{-ix}, used only to pick
    // the branch so that roundoff does not accumulate
    let mut arg = -p.x0.re;
    for &t in times {
        if !(t >= t_prev) {
            return Err(Error::InvalidParameter(format!(
                "times must be nonnegative and sorted, got {t} after {t_prev}"
            )));
        }
        let steps = ((t - t_prev) / SCAN_STEP).ceil().max(1.0) as usize;
        let h = (t - t_prev) / steps as f64;
        for j in 1..=steps {
            let tb = if j == steps { t } else { t_prev + h * j as f64 };
            let ta = tb - h;
            let (v, delta) = continue_arg(p, q, ta, tb, v_prev, 0)?;
            arg += delta;
            v_prev = v;
        }
        t_prev = t;
        if t == 0.0 {
            out.push(p.x0);
            continue;
        }
        let (ln_abs, principal) = ln_1p(v_prev);
        let branch = principal + 2.0 * PI * ((arg - principal) / (2.0 * PI)).round();
        arg = branch;
        out.push(CScalar::new(-branch, ln_abs));
    }
    Ok(out)
}

/// `ln|1 + v|` and `Arg(1 + v)` without cancellation for small `v`.
fn ln_1p(v: CScalar) -> (f64, f64) {
    let ln_abs = 0.5 * (v.re * (2.0 + v.re) + v.im * v.im).ln_1p();
    (ln_abs, v.im.atan2(1.0 + v.re))
}

/// Change of `arg(1 + v)` with `v = q e^{-iat}` from `ta` to `tb`,
/// splitting the interval while the change is too large to be resolved
/// unambiguously.
fn continue_arg(
    p: &CaseParams,
    q: CScalar,
    ta: f64,
    tb: f64,
    va: CScalar,
    depth: u32,
) -> Result<(CScalar, f64)> {
    if p.log_argument(tb).norm() < BLOWUP_TOL {
        return Err(Error::BlowUpReached(tb));
    }
    let vb = q * (-I * p.a * tb).exp();
    let delta = ((1.0 + vb) / (1.0 + va)).arg();
    if delta.abs() <= PI / 4.0 {
        return Ok((vb, delta));
    }
    if depth >= 64 || tb - ta <= f64::EPSILON * tb.abs().max(1.0) {
        return Err(Error::BlowUpReached(0.5 * (ta + tb)));
    }
    let tm = 0.5 * (ta + tb);
    let (vm, d1) = continue_arg(p, q, ta, tm, va, depth + 1)?;
    let (vb, d2) = continue_arg(p, q, tm, tb, vm, depth + 1)?;
    Ok((vb, d1 + d2))
}

/// Earliest zero of `w` in `(0, horizon]`, located from local minima of
/// `|w|` on a fine scan.
pub fn detect_blowup(p: &CaseParams, horizon: f64) -> Result<Option<f64>> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::InvalidParameter(format!("horizon = {horizon} must be positive")));
    }
    let f = |t: f64| p.log_argument(t).norm();
    let n = (horizon / SCAN_STEP).ceil() as usize;
    let h = horizon / n as f64;
    let mut prev = f(0.0);
    let mut cur = f(h);
    for j in 1..=n {
        let next = if j < n { f(h * (j + 1) as f64) } else { f64::INFINITY };
        if cur <= prev && cur <= next {
            let lo = h * (j - 1) as f64;
            let hi = (h * (j + 1) as f64).min(horizon);
            let (tm, fm) = golden_min(&f, lo, hi);
            if fm < ROOT_TOL && tm > 0.0 {
                return Ok(Some(tm));
            }
        }
        prev = cur;
        cur = next;
    }
    Ok(None)
}

fn golden_min(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > 1e-13 * hi.abs().max(1.0) {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    let t = 0.5 * (lo + hi);
    (t, f(t))
}

/// Blow-up time over all `t > 0`, from the explicit root
/// `e^{iat0} = 1 - e^{-ix0}`.
pub fn blowup_time(p: &CaseParams) -> Option<f64> {
    let q = 1.0 - (-I * p.x0).exp();
    if q.norm() == 0.0 {
        return None;
    }
    let (s, c) = p.phi().sin_cos();
    let ln_q = q.norm().ln();
    // t_k = (theta_k - i ln|q|) e^{-i phi}, theta_k = Arg q + 2 pi k
    let candidates: Vec<f64> = if s.abs() < 1e-15 {
        if c < 0.0 {
            return None;
        }
        let mut theta = q.arg();
        if theta <= 0.0 {
            theta += 2.0 * PI;
        }
        vec![theta]
    } else {
        let theta = -ln_q * c / s;
        let k = ((theta - q.arg()) / (2.0 * PI)).round();
        vec![q.arg() + 2.0 * PI * k]
    };
    candidates
        .into_iter()
        .map(|theta| theta * c - ln_q * s)
        .filter(|&t| t > 0.0 && p.log_argument(t).norm() < ROOT_TOL)
        .reduce(f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "tag", content = "t0")]
pub enum TrajectoryClass {
    BlowUp(f64),
    LimitCycle,
    Converges,
    Diverges,
    Equilibrium,
}

impl TrajectoryClass {
    pub fn name(&self) -> &'static str {
        match self {
            TrajectoryClass::BlowUp(_) => "blow-up",
            TrajectoryClass::LimitCycle => "limit-cycle",
            TrajectoryClass::Converges => "converges",
            TrajectoryClass::Diverges => "diverges",
            TrajectoryClass::Equilibrium => "equilibrium",
        }
    }
}

/// Long-time behaviour of the exact solution.
///
/// For real `a` the curve `w` is a circle around `1 - E` of radius `|E|`.
/// It winds around the origin iff `|e^{-ix0} - 1| < 1`, in which case
/// `x(t + 2 pi) = x(t)`; otherwise `x` drifts by `2 pi` per period.
pub fn classify_trajectory(p: &CaseParams) -> Result<TrajectoryClass> {
    if let Some(t0) = blowup_time(p) {
        return Ok(TrajectoryClass::BlowUp(t0));
    }
    let d = ((-I * p.x0).exp() - 1.0).norm();
    if d < 1e-12 {
        return Ok(TrajectoryClass::Equilibrium);
    }
    let im_a = p.a.im;
    if im_a.abs() < 1e-12 {
        if (d - 1.0).abs() <= 1e-12 {
            return Err(Error::Unclassified);
        }
        return Ok(if d < 1.0 {
            TrajectoryClass::LimitCycle
        } else {
            TrajectoryClass::Diverges
        });
    }
    Ok(if im_a < 0.0 {
        TrajectoryClass::Converges
    } else {
        TrajectoryClass::Diverges
    })
}

/// Closed form of the concise section component `z_{k,N}(t)`.
pub fn exact_z(p: &CaseParams, k: usize, order: usize, t: f64) -> Result<CScalar> {
    if k == 0 || k > order {
        return Err(Error::InvalidParameter(format!(
            "component {k} outside 1..={order}"
        )));
    }
    let u = -(I * p.x0).exp() * ((I * p.a * t).exp() - 1.0);
    let mut term = CScalar::new(1.0, 0.0);
    let mut sum = term;
    for l in 1..=(order - k) {
        term *= u * ((k + l - 1) as f64 / l as f64);
        sum += term;
    }
    Ok((I * k as f64 * (p.a * t + p.x0)).exp() * sum)
}

/// `|z_{1,N}(t) e^{-ix(t)} - 1| = (e^{-Im x0} |e^{iat} - 1|)^N`.
pub fn exact_error(p: &CaseParams, order: usize, t: f64) -> f64 {
    ((-p.x0.im).exp() * ((I * p.a * t).exp() - 1.0).norm()).powi(order as i32)
}

/// `h(phi, t) = |e^{iat} - 1|^2`.
pub fn h_phi(phi: f64, t: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    (-2.0 * t * s).exp() - 2.0 * (-t * s).exp() * (t * c).cos() + 1.0
}

/// Upper end of the scans when a crossing is not otherwise bounded.
pub const SCAN_CAP: f64 = 1e3;

/// First `t > 0` where `h(phi, t)` exceeds `e^{2 Im x0}`, or infinity.
pub fn actual_time_range(phi: f64, im_x0: f64) -> Result<f64> {
    if !(-FRAC_PI_2 - 1e-12..=FRAC_PI_2 + 1e-12).contains(&phi) {
        return Err(Error::InvalidParameter(format!(
            "phi = {phi} must lie in [-pi/2, pi/2]"
        )));
    }
    let thr = (2.0 * im_x0).exp();
    if phi == 0.0 {
        return Ok(if im_x0 <= 2f64.ln() {
            2.0 * (im_x0.exp() / 2.0).min(1.0).asin()
        } else {
            f64::INFINITY
        });
    }
    let s = phi.sin();
    let c = phi.cos();
    let sq = thr.sqrt();
    let t_end = if s < 0.0 {
        // h >= (e^{|s| t} - 1)^2
        (1.0 + sq).ln() / -s
    } else if thr < 1.0 {
        // h >= (1 - e^{-s t})^2
        -(1.0 - sq).ln() / s
    } else if thr >= 4.0 {
        return Ok(f64::INFINITY);
    } else {
        // h <= (1 + e^{-s t})^2 bounds the window; for thr = 1 the cosine
        // term alone forces a crossing by t cos(phi) = pi / 2
        let mut end = if thr > 1.0 { -(sq - 1.0).ln() / s } else { SCAN_CAP };
        if c > 1e-12 {
            end = end.min(FRAC_PI_2 / c + SCAN_STEP);
        }
        end.min(SCAN_CAP)
    };
    let t_end = t_end + SCAN_STEP;
    let n = (t_end / SCAN_STEP).ceil() as usize;
    let dt = t_end / n as f64;
    for j in 1..=n {
        let t = dt * j as f64;
        if h_phi(phi, t) > thr {
            let (mut lo, mut hi) = (t - dt, t);
            while hi - lo > 1e-15 * hi.max(1.0) {
                let mid = 0.5 * (lo + hi);
                if h_phi(phi, mid) > thr {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(hi);
        }
    }
    Ok(f64::INFINITY)
}

/// Time range guaranteed by the Carleman-Fourier bound at the optimal
/// radius, `(e - 1) / (2e - 1) e^{-|Im x0| - 2}`.
pub fn cf_guaranteed_time_range(im_x0: f64) -> f64 {
    (EULER - 1.0) / (2.0 * EULER - 1.0) * (-im_x0.abs() - 2.0).exp()
}

/// `sup_{t >= 0} h(phi, t)` for `phi` in `(0, pi/2]`.
pub fn h_supremum(phi: f64) -> Result<f64> {
    if !(phi > 0.0 && phi <= FRAC_PI_2 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "phi = {phi} must lie in (0, pi/2]"
        )));
    }
    let s = phi.sin();
    let mut sup: f64 = 1.0;
    let mut best_t = f64::NAN;
    let n = (SCAN_CAP / SCAN_STEP) as usize;
    for j in 1..=n {
        let t = SCAN_STEP * j as f64;
        let envelope = (1.0 + (-s * t).exp()).powi(2);
        if envelope <= sup {
            break;
        }
        let v = h_phi(phi, t);
        if v > sup {
            sup = v;
            best_t = t;
        }
    }
    if best_t.is_finite() {
        let (_, neg) = golden_min(
            &|t| -h_phi(phi, t),
            (best_t - SCAN_STEP).max(0.0),
            best_t + SCAN_STEP,
        );
        sup = sup.max(-neg);
    }
    Ok(sup)
}

/// Whether `Im x0 > ln(sup h) / 2`, i.e. the concise sections converge for
/// all `t >= 0`.
pub fn global_window_holds(phi: f64, im_x0: f64) -> Result<bool> {
    Ok(im_x0 > 0.5 * h_supremum(phi)?.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> CScalar {
        CScalar::new(re, im)
    }

    #[test]
    fn rejects_non_unit_a() {
        assert!(CaseParams::new(c(1.1, 0.0), c(0.0, 0.0)).is_err());
        assert!(CaseParams::new(c(-1.0, 0.0), c(0.0, 0.0)).is_err());
        assert!(CaseParams::from_phi(2.0, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn initial_and_equilibrium() {
        let p = CaseParams::new(c(1.0, 0.0), c(0.4, -0.2)).unwrap();
        assert_eq!(exact_solution(&p, 0.0).unwrap(), p.x0());
        let q = CaseParams::from_phi(0.3, c(0.0, 0.0)).unwrap();
        for t in [0.5, 3.0, 20.0] {
            assert!(exact_solution(&q, t).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn solution_satisfies_ode() {
        let p = CaseParams::from_phi(-0.4, c(-0.5, 0.3)).unwrap();
        let g = p.governing_function();
        for t in [0.2, 0.7, 1.5] {
            let h = 1e-5;
            let d = (exact_solution(&p, t + h).unwrap() - exact_solution(&p, t - h).unwrap())
                / (2.0 * h);
            let x = exact_solution(&p, t).unwrap();
            assert!((d - g.eval(x)).norm() < 1e-7);
        }
    }

    #[test]
    fn branch_continues_over_periods() {
        // winding case: x returns to itself after 2 pi
        let p = CaseParams::new(c(1.0, 0.0), c(-0.5, 0.0)).unwrap();
        let x = exact_at(&p, &[0.0, 2.0 * PI, 4.0 * PI]).unwrap();
        assert!((x[1] - x[0]).norm() < 1e-9);
        assert!((x[2] - x[0]).norm() < 1e-9);
        // drifting case
        let p = CaseParams::new(c(1.0, 0.0), c(-1.5, 0.0)).unwrap();
        let x = exact_at(&p, &[0.0, 2.0 * PI]).unwrap();
        assert!((x[1] - x[0] - 2.0 * PI).norm() < 1e-9);
    }

    #[test]
    fn black_seed_blows_up_at_quarter_period() {
        let x0 = I * (1.0 - I).ln();
        let p = CaseParams::new(c(1.0, 0.0), x0).unwrap();
        let t0 = detect_blowup(&p, 3.0).unwrap().unwrap();
        assert!((t0 - FRAC_PI_2).abs() < 1e-6);
        assert!((blowup_time(&p).unwrap() - FRAC_PI_2).abs() < 1e-12);
        assert!(matches!(exact_solution(&p, 2.0), Err(Error::BlowUpReached(_))));
        assert_eq!(classify_trajectory(&p).unwrap().name(), "blow-up");
    }

    #[test]
    fn imaginary_a_black_seed() {
        let a = I;
        let x0 = I * (1.0 - (I * a * FRAC_PI_2).exp()).ln();
        let p = CaseParams::new(a, x0).unwrap();
        assert!((blowup_time(&p).unwrap() - FRAC_PI_2).abs() < 1e-12);
        assert!((detect_blowup(&p, 2.0).unwrap().unwrap() - FRAC_PI_2).abs() < 1e-6);
    }

    #[test]
    fn half_real_part_has_root() {
        // Re e^{ix0} = 1/2
        let e = c(0.5, 0.8);
        let x0 = -I * e.ln();
        let p = CaseParams::new(c(1.0, 0.0), x0).unwrap();
        assert!(blowup_time(&p).is_some());
        assert!(detect_blowup(&p, 2.0 * PI).unwrap().is_some());
    }

    #[test]
    fn classification() {
        let one = c(1.0, 0.0);
        let class = |a, x0| classify_trajectory(&CaseParams::new(a, x0).unwrap()).unwrap();
        assert_eq!(class(one, c(-0.5, 0.0)), TrajectoryClass::LimitCycle);
        assert_eq!(class(one, c(-1.5, 0.0)), TrajectoryClass::Diverges);
        assert_eq!(class(-I, c(1.5, 0.0)), TrajectoryClass::Converges);
        assert_eq!(class(I, c(-0.5, 0.0)), TrajectoryClass::Diverges);
        assert_eq!(class(I, c(0.0, 0.0)), TrajectoryClass::Equilibrium);
        assert_eq!(class(one, c(2.0 * PI, 0.0)), TrajectoryClass::Equilibrium);
        let p = CaseParams::new(-I, c(1.5, 0.0)).unwrap();
        assert_eq!(detect_blowup(&p, 10.0).unwrap(), None);
    }

    #[test]
    fn exact_z_top_component_and_geometric_sum() {
        let p = CaseParams::new(c(1.0, 0.0), c(0.3, 0.2)).unwrap();
        let t = 0.4;
        let top = exact_z(&p, 4, 4, t).unwrap();
        assert!((top - (4.0 * I * (p.a() * t + p.x0())).exp()).norm() < 1e-14);
        let u = -(I * p.x0()).exp() * ((I * t).exp() - 1.0);
        let geo: CScalar = (0..4).map(|l| u.powi(l)).sum();
        let z1 = exact_z(&p, 1, 4, t).unwrap();
        assert!((z1 - (I * (t + p.x0())).exp() * geo).norm() < 1e-14);
    }

    #[test]
    fn exact_error_identity() {
        let p = CaseParams::from_phi(0.7, c(-0.3, 0.4)).unwrap();
        for n in [1usize, 3, 8] {
            for t in [0.1, 0.5, 1.2] {
                let z1 = exact_z(&p, 1, n, t).unwrap();
                let lhs = (z1 / exact_exp_ix(&p, t).unwrap() - 1.0).norm();
                let rhs = exact_error(&p, n, t);
                assert!((lhs - rhs).abs() < 1e-10 * rhs.max(1.0));
            }
        }
        let q = CaseParams::new(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((exact_error(&q, 1, PI / 3.0) - 1.0).abs() < 1e-14);
        assert_eq!(exact_error(&q, 5, 0.0), 0.0);
    }

    #[test]
    fn h_values() {
        assert_eq!(h_phi(0.3, 0.0), 0.0);
        assert!((h_phi(0.0, PI / 3.0) - 1.0).abs() < 1e-14);
        let t = 0.8;
        assert!((h_phi(FRAC_PI_2, t) - (1.0 - (-t).exp()).powi(2)).abs() < 1e-14);
    }

    #[test]
    fn time_ranges() {
        assert!((actual_time_range(0.0, 0.0).unwrap() - PI / 3.0).abs() < 1e-12);
        assert_eq!(actual_time_range(0.0, 2.0).unwrap(), f64::INFINITY);
        assert!((actual_time_range(-FRAC_PI_2, 0.0).unwrap() - 2f64.ln()).abs() < 1e-9);
        assert_eq!(actual_time_range(FRAC_PI_2, 0.0).unwrap(), f64::INFINITY);
        assert_eq!(actual_time_range(0.5, 1.0).unwrap(), f64::INFINITY);
        let mut prev = 0.0;
        for y in [-1.0, -0.5, 0.0, 0.3, 0.6] {
            let t = actual_time_range(-0.7, y).unwrap();
            assert!(t >= prev);
            prev = t;
        }
        assert!((cf_guaranteed_time_range(0.0) - 0.0524).abs() < 5e-4);
        assert!((cf_guaranteed_time_range(2.0) - 0.0071).abs() < 5e-4);
        assert_eq!(cf_guaranteed_time_range(-2.0), cf_guaranteed_time_range(2.0));
    }

    #[test]
    fn global_window() {
        for phi in [0.1, 0.8, FRAC_PI_2] {
            assert!(global_window_holds(phi, 2f64.ln() + 1e-9).unwrap());
            assert!(!global_window_holds(phi, -1.0).unwrap());
        }
        assert!(!global_window_holds(FRAC_PI_2, 0.0).unwrap());
        assert!(global_window_holds(0.0, 1.0).is_err());
    }
}

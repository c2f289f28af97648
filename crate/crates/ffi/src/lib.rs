//! C interface to `carleman-lift`.
//!
//! Every fallible function returns a [`ClStatus`] and writes its result
//! through an out-pointer. After a failure [`cl_last_error_message`] holds a
//! description on the calling thread. Objects are opaque; release each one
//! with the matching `*_free` function, which accepts null.

use std::slice;

use carleman_lift::carleman::{
    build_carleman_section, solve_finite_section, CarlemanBoundReport, CarlemanSection,
};
use carleman_lift::carleman_fourier::{
    build_cf_section, build_concise_cf, solve_cf_section, solve_concise_cf, CFSection,
    CfBoundReport, ConciseCFSection,
};
use carleman_lift::casestudy::{
    actual_time_range, cf_guaranteed_time_range, classify_trajectory, exact_solution, CaseParams,
    TrajectoryClass,
};
use carleman_lift::numerics::{CMatrix, CScalar, TimeGrid, Trajectory};
use carleman_lift::trigpoly::TrigPoly;

mod status;

use status::{guard, Failure};
pub use status::{cl_last_error_message, ClStatus};

/// Complex number with the memory layout of C99 `double _Complex`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClComplex {
    pub re: f64,
    pub im: f64,
}

impl From<ClComplex> for CScalar {
    fn from(z: ClComplex) -> Self {
        CScalar::new(z.re, z.im)
    }
}

impl From<CScalar> for ClComplex {
    fn from(z: CScalar) -> Self {
        ClComplex { re: z.re, im: z.im }
    }
}

/// Which lifting a section uses. Passed as `int32_t`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClScheme {
    Carleman = 0,
    CarlemanFourier = 1,
    /// Single chain `e^{ikx}`, nonnegative frequencies only.
    ConciseCf = 2,
}

/// Long-time behaviour of a case-study trajectory.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClClass {
    BlowUp = 0,
    LimitCycle = 1,
    Converges = 2,
    Diverges = 3,
    Equilibrium = 4,
}

/// Governing function `g(x) = sum_m g_m e^{imx}`.
pub struct ClTrigPoly(TrigPoly);

/// A finite section of one of the liftings.
pub struct ClSection(Section);

enum Section {
    Carleman(CarlemanSection),
    Cf(CFSection),
    Concise(ConciseCFSection),
}

impl Section {
    fn matrix(&self) -> &CMatrix {
        match self {
            Section::Carleman(s) => s.matrix(),
            Section::Cf(s) => s.matrix(),
            Section::Concise(s) => s.matrix(),
        }
    }
}

/// Sampled solution of a section.
pub struct ClTrajectory(Trajectory);

unsafe fn out_ref<'a, T>(ptr: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    ptr.as_mut().ok_or_else(|| Failure::null(name))
}

unsafe fn handle<'a, T>(ptr: *const T, name: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| Failure::null(name))
}

unsafe fn fill<T: Copy>(buf: *mut T, len: usize, values: impl ExactSizeIterator<Item = T>) -> Result<(), Failure> {
    if values.len() > len {
        return Err(Failure::new(
            ClStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", values.len()),
        ));
    }
    if values.len() == 0 {
        return Ok(());
    }
    if buf.is_null() {
        return Err(Failure::null("buf"));
    }
    for (i, v) in values.enumerate() {
        *buf.add(i) = v;
    }
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Build `g` from `2 * degree + 1` coefficients, `coeffs[j] = g_{j - degree}`.
///
/// # Safety
/// `coeffs` must point to `n` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_trigpoly_new(
    degree: usize,
    coeffs: *const ClComplex,
    n: usize,
    out: *mut *mut ClTrigPoly,
) -> ClStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if coeffs.is_null() {
            return Err(Failure::null("coeffs"));
        }
        let values = slice::from_raw_parts(coeffs, n).iter().map(|&z| z.into()).collect();
        *out = boxed(ClTrigPoly(TrigPoly::new(degree, values)?));
        Ok(())
    })
}

/// `g(x) = a (1 - b e^{ix})`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_trigpoly_case_study(a: ClComplex, b: ClComplex, out: *mut *mut ClTrigPoly) -> ClStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = boxed(ClTrigPoly(TrigPoly::shifted_case_study(a.into(), b.into())));
        Ok(())
    })
}

/// # Safety
/// `poly` must come from this library and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_trigpoly_eval(poly: *const ClTrigPoly, x: ClComplex, out: *mut ClComplex) -> ClStatus {
    guard(|| {
        let poly = handle(poly, "poly")?;
        *out_ref(out, "out")? = poly.0.eval(x.into()).into();
        Ok(())
    })
}

/// # Safety
/// `poly` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cl_trigpoly_free(poly: *mut ClTrigPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Build the section of order `order` for `scheme` (a [`ClScheme`] value).
///
/// # Safety
/// `poly` must come from this library and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_section_build(
    poly: *const ClTrigPoly,
    scheme: i32,
    order: usize,
    out: *mut *mut ClSection,
) -> ClStatus {
    guard(|| {
        let g = &handle(poly, "poly")?.0;
        let out = out_ref(out, "out")?;
        let section = match scheme {
            s if s == ClScheme::Carleman as i32 => {
                Section::Carleman(build_carleman_section(&g.maclaurin(order), order)?)
            }
            s if s == ClScheme::CarlemanFourier as i32 => Section::Cf(build_cf_section(g, order)?),
            s if s == ClScheme::ConciseCf as i32 => Section::Concise(build_concise_cf(g, order)?),
            other => {
                return Err(Failure::new(ClStatus::InvalidArgument, format!("unknown scheme {other}")))
            }
        };
        *out = boxed(ClSection(section));
        Ok(())
    })
}

/// Number of lifted unknowns, 0 for a null handle.
///
/// # Safety
/// `section` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cl_section_dim(section: *const ClSection) -> usize {
    section.as_ref().map_or(0, |s| s.0.matrix().rows())
}

/// Copy the state matrix row by row into `buf`, which must hold `dim * dim`
/// values.
///
/// # Safety
/// `buf` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn cl_section_matrix(section: *const ClSection, buf: *mut ClComplex, len: usize) -> ClStatus {
    guard(|| {
        let m = handle(section, "section")?.0.matrix();
        fill(buf, len, m.as_slice().iter().map(|&z| z.into()))
    })
}

/// Solve the section from `x0` on `steps` uniform intervals of `[0, t1]`.
///
/// # Safety
/// `section` must come from this library and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_section_solve(
    section: *const ClSection,
    x0: ClComplex,
    t1: f64,
    steps: usize,
    out: *mut *mut ClTrajectory,
) -> ClStatus {
    guard(|| {
        let section = &handle(section, "section")?.0;
        let out = out_ref(out, "out")?;
        let grid = TimeGrid::span(t1, steps)?;
        let x0 = x0.into();
        let tr = match section {
            Section::Carleman(s) => solve_finite_section(s, x0, &grid)?,
            Section::Cf(s) => solve_cf_section(s, x0, &grid)?,
            Section::Concise(s) => solve_concise_cf(s, x0, &grid)?,
        };
        *out = boxed(ClTrajectory(tr));
        Ok(())
    })
}

/// # Safety
/// `section` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cl_section_free(section: *mut ClSection) {
    if !section.is_null() {
        drop(Box::from_raw(section));
    }
}

/// Number of time samples, 0 for a null handle.
///
/// # Safety
/// `traj` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cl_trajectory_len(traj: *const ClTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.0.len())
}

/// # Safety
/// `traj` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cl_trajectory_dim(traj: *const ClTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.0.dim())
}

/// Leading samples that hold finite values; later ones are NaN after an
/// overflow.
///
/// # Safety
/// `traj` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cl_trajectory_valid_samples(traj: *const ClTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.0.valid_samples())
}

/// # Safety
/// `buf` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn cl_trajectory_times(traj: *const ClTrajectory, buf: *mut f64, len: usize) -> ClStatus {
    guard(|| fill(buf, len, handle(traj, "traj")?.0.times().iter().copied()))
}

/// Values of lifted component `k` (0-based) at every sample.
///
/// # Safety
/// `buf` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn cl_trajectory_component(
    traj: *const ClTrajectory,
    k: usize,
    buf: *mut ClComplex,
    len: usize,
) -> ClStatus {
    guard(|| {
        let tr = &handle(traj, "traj")?.0;
        if k >= tr.dim() {
            return Err(Failure::new(
                ClStatus::InvalidArgument,
                format!("component {k} out of range for dimension {}", tr.dim()),
            ));
        }
        fill(buf, len, tr.states().iter().map(|s| s[k].into()))
    })
}

/// # Safety
/// `traj` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cl_trajectory_free(traj: *mut ClTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Guaranteed time range `T*` of the Carleman bound.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_carleman_time_range(c0: f64, r0: f64, x0: ClComplex, out: *mut f64) -> ClStatus {
    guard(|| {
        *out_ref(out, "out")? = CarlemanBoundReport::new(c0, r0, x0.into())?.t_star;
        Ok(())
    })
}

/// Carleman error bound for order `order` at time `t`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_carleman_bound(
    c0: f64,
    r0: f64,
    x0: ClComplex,
    order: usize,
    t: f64,
    out: *mut f64,
) -> ClStatus {
    guard(|| {
        *out_ref(out, "out")? = CarlemanBoundReport::new(c0, r0, x0.into())?.bound(order, t)?;
        Ok(())
    })
}

/// Carleman-Fourier error bound of `poly` at radius `r`.
///
/// # Safety
/// `poly` must come from this library and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_cf_bound(
    poly: *const ClTrigPoly,
    x0: ClComplex,
    r: f64,
    order: usize,
    t: f64,
    out: *mut f64,
) -> ClStatus {
    guard(|| {
        let g = &handle(poly, "poly")?.0;
        *out_ref(out, "out")? = CfBoundReport::new(g, x0.into(), r)?.bound(order, t)?;
        Ok(())
    })
}

/// Case-study time range `T*_CF` at the optimal radius.
#[no_mangle]
pub extern "C" fn cl_cf_guaranteed_time_range(im_x0: f64) -> f64 {
    cf_guaranteed_time_range(im_x0)
}

/// First time the case-study error reaches one, `INFINITY` if never.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_actual_time_range(phi: f64, im_x0: f64, out: *mut f64) -> ClStatus {
    guard(|| {
        *out_ref(out, "out")? = actual_time_range(phi, im_x0)?;
        Ok(())
    })
}

/// Exact solution of `dx/dt = a (1 - e^{ix})` at time `t`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_case_exact_solution(a: ClComplex, x0: ClComplex, t: f64, out: *mut ClComplex) -> ClStatus {
    guard(|| {
        let p = CaseParams::new(a.into(), x0.into())?;
        *out_ref(out, "out")? = exact_solution(&p, t)?.into();
        Ok(())
    })
}

/// Classify a case-study trajectory. `t0` receives the blow-up time, or NaN
/// for the other classes.
///
/// # Safety
/// `class` and `t0` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_case_classify(a: ClComplex, x0: ClComplex, class: *mut ClClass, t0: *mut f64) -> ClStatus {
    guard(|| {
        let class = out_ref(class, "class")?;
        let t0 = out_ref(t0, "t0")?;
        let p = CaseParams::new(a.into(), x0.into())?;
        let (c, t) = match classify_trajectory(&p)? {
            TrajectoryClass::BlowUp(t) => (ClClass::BlowUp, t),
            TrajectoryClass::LimitCycle => (ClClass::LimitCycle, f64::NAN),
            TrajectoryClass::Converges => (ClClass::Converges, f64::NAN),
            TrajectoryClass::Diverges => (ClClass::Diverges, f64::NAN),
            TrajectoryClass::Equilibrium => (ClClass::Equilibrium, f64::NAN),
        };
        *class = c;
        *t0 = t;
        Ok(())
    })
}

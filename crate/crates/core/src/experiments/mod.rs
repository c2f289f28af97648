//! Error surfaces over grids of initial values, figure reproduction and
//! their CSV/JSON/PNG output.

pub mod colormap;
mod figures;
mod output;

use std::f64::consts::LOG10_E;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::carleman::{build_carleman_section, solve_finite_section, SECTION_ATOL, SECTION_RTOL};
use crate::carleman_fourier::{build_concise_cf, solve_concise_cf};
use crate::casestudy::{detect_blowup, exact_exp_ix, h_phi, CaseParams};
use crate::error::{Error, Result};
use crate::numerics::{rk45, CScalar, TimeGrid, I};
use crate::trigpoly::TrigPoly;

pub use figures::{reproduce_figure, FigureId, FigureOptions};
pub use output::{write_grid_csv, write_json, GridCsvRow};
use output::write_png;

/// Number of uniform time samples on `[0, T*]` used for the maximum over
/// time.
pub const TIME_SAMPLES: usize = 256;
pub const CLAMP_MIN: f64 = -5.0;
pub const CLAMP_MAX: f64 = 2.0;

/// `max(min(v, 2), -5)`, with NaN mapped to the ceiling.
pub fn clamp_log_error(v: f64) -> f64 {
    if v.is_nan() {
        CLAMP_MAX
    } else {
        v.clamp(CLAMP_MIN, CLAMP_MAX)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Carleman,
    CarlemanFourier,
}

/// What the horizontal grid axis parametrizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum XAxis {
    /// `Re x0`, with `a` fixed.
    #[default]
    ReX0,
    /// `phi` with `a = e^{i phi}` and `Re x0 = 0`.
    Phi,
}

impl XAxis {
    pub fn column_name(&self) -> &'static str {
        match self {
            XAxis::ReX0 => "re_x0",
            XAxis::Phi => "phi",
        }
    }
}

fn one() -> CScalar {
    CScalar::new(1.0, 0.0)
}

/// A rectangular grid of initial values (or of `(phi, Im x0)`) together with
/// the section to evaluate on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub scheme: Scheme,
    #[serde(default)]
    pub x_axis: XAxis,
    pub re_range: [f64; 2],
    pub im_range: [f64; 2],
    pub nx: usize,
    pub ny: usize,
    pub t_star: f64,
    #[serde(rename = "N")]
    pub order: usize,
    #[serde(default = "one")]
    pub a: CScalar,
    #[serde(default = "one")]
    pub b: CScalar,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.nx < 2 || self.ny < 2 {
            return bad(format!("grid needs at least 2x2 cells, got {}x{}", self.nx, self.ny));
        }
        if !(self.t_star > 0.0 && self.t_star.is_finite()) {
            return bad(format!("T* = {} must be positive", self.t_star));
        }
        if self.order == 0 {
            return bad("section order must be at least 1".into());
        }
        for (name, r) in [("re_range", self.re_range), ("im_range", self.im_range)] {
            if !(r[0] < r[1] && r[0].is_finite() && r[1].is_finite()) {
                return bad(format!("{name} = {r:?} must be an increasing finite interval"));
            }
        }
        match self.x_axis {
            XAxis::ReX0 => {
                if self.a == CScalar::new(0.0, 0.0) || self.b == CScalar::new(0.0, 0.0) {
                    return bad("a and b must be nonzero".into());
                }
                if self.scheme == Scheme::CarlemanFourier {
                    CaseParams::new(self.a, CScalar::new(0.0, 0.0))?;
                }
            }
            XAxis::Phi => {
                let half_pi = std::f64::consts::FRAC_PI_2 + 1e-12;
                if self.re_range[0] < -half_pi || self.re_range[1] > half_pi {
                    return bad("phi range must lie in [-pi/2, pi/2]".into());
                }
            }
        }
        if self.scheme == Scheme::CarlemanFourier && self.b != one() {
            return bad("the Carleman-Fourier grid is defined for b = 1 only".into());
        }
        Ok(())
    }

    pub fn x_coords(&self) -> Vec<f64> {
        linspace(self.re_range, self.nx)
    }

    pub fn y_coords(&self) -> Vec<f64> {
        linspace(self.im_range, self.ny)
    }

    /// `(a, x0)` for the cell at column `ix`, row `iy`.
    pub fn cell(&self, ix: usize, iy: usize) -> (CScalar, CScalar) {
        let u = lerp(self.re_range, ix, self.nx);
        let v = lerp(self.im_range, iy, self.ny);
        match self.x_axis {
            XAxis::ReX0 => (self.a, CScalar::new(u, v)),
            XAxis::Phi => (CScalar::from_polar(1.0, u), CScalar::new(0.0, v)),
        }
    }

    fn time_grid(&self) -> Result<TimeGrid> {
        TimeGrid::span(self.t_star, TIME_SAMPLES - 1)
    }
}

fn lerp(r: [f64; 2], i: usize, n: usize) -> f64 {
    if i + 1 == n {
        r[1]
    } else {
        r[0] + (r[1] - r[0]) * i as f64 / (n - 1) as f64
    }
}

pub(crate) fn linspace(r: [f64; 2], n: usize) -> Vec<f64> {
    (0..n).map(|i| lerp(r, i, n)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellFlag {
    Ok,
    /// The exact solution blows up before `T*`.
    Blowup,
    /// The finite section left the representable range.
    Overflow,
}

impl CellFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CellFlag::Ok => "ok",
            CellFlag::Blowup => "blowup",
            CellFlag::Overflow => "overflow",
        }
    }
}

/// Where the reference solution of a cell came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    Rk45,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::Rk45 => "rk45",
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    raw: f64,
    value: f64,
    flag: CellFlag,
    provenance: Provenance,
    closed_form: Option<f64>,
}

/// Clamped `log10` errors on a grid, stored row-major with `Im x0`
/// increasing over rows.
#[derive(Debug, Clone)]
pub struct ErrorGrid {
    spec: GridSpec,
    raw: Vec<f64>,
    values: Vec<f64>,
    flags: Vec<CellFlag>,
    provenance: Vec<Provenance>,
    closed_form: Option<Vec<f64>>,
}

impl ErrorGrid {
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn nx(&self) -> usize {
        self.spec.nx
    }

    pub fn ny(&self) -> usize {
        self.spec.ny
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.spec.nx + ix]
    }

    /// Unclamped `log10` error; `-inf` for exact cells, NaN for flagged ones.
    pub fn raw_value(&self, ix: usize, iy: usize) -> f64 {
        self.raw[iy * self.spec.nx + ix]
    }

    pub fn flag(&self, ix: usize, iy: usize) -> CellFlag {
        self.flags[iy * self.spec.nx + ix]
    }

    pub fn flags(&self) -> &[CellFlag] {
        &self.flags
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    /// Clamped closed-form values, available for Carleman-Fourier grids.
    pub fn closed_form(&self) -> Option<&[f64]> {
        self.closed_form.as_deref()
    }

    /// Largest `|solver - closed form|` over unflagged cells.
    pub fn closed_form_gap(&self) -> Option<f64> {
        let cf = self.closed_form.as_ref()?;
        Some(
            self.values
                .iter()
                .zip(cf)
                .zip(&self.flags)
                .filter(|(_, f)| **f == CellFlag::Ok)
                .map(|((v, c), _)| (v - c).abs())
                .fold(0.0, f64::max),
        )
    }

    pub fn count(&self, flag: CellFlag) -> usize {
        self.flags.iter().filter(|f| **f == flag).count()
    }

    pub(crate) fn rows(&self) -> Vec<GridCsvRow> {
        let xs = self.spec.x_coords();
        let ys = self.spec.y_coords();
        let mut rows = Vec::with_capacity(self.values.len());
        for (iy, y) in ys.iter().enumerate() {
            for (ix, x) in xs.iter().enumerate() {
                let k = iy * self.spec.nx + ix;
                rows.push(GridCsvRow {
                    x: *x,
                    y: *y,
                    value: self.values[k],
                    flag: self.flags[k].as_str(),
                    provenance: self.provenance[k].as_str(),
                });
            }
        }
        rows
    }
}

/// `E_C` over the grid: the worst `log10 |e^{i(x_{1,N} - x)} - 1|` on
/// `[0, T*]`, clamped.
pub fn error_grid_carleman(spec: &GridSpec) -> Result<ErrorGrid> {
    if spec.scheme != Scheme::Carleman {
        return Err(Error::InvalidParameter("grid spec is not a Carleman grid".into()));
    }
    evaluate(spec, carleman_cell)
}

/// `E_CF` over the grid from the concise section, with the closed form
/// `N (-Im x0 log10 e + log10 max h / 2)` kept as a cross-check.
pub fn error_grid_cf(spec: &GridSpec) -> Result<ErrorGrid> {
    if spec.scheme != Scheme::CarlemanFourier {
        return Err(Error::InvalidParameter("grid spec is not a Carleman-Fourier grid".into()));
    }
    evaluate(spec, cf_cell)
}

pub fn error_grid(spec: &GridSpec) -> Result<ErrorGrid> {
    match spec.scheme {
        Scheme::Carleman => error_grid_carleman(spec),
        Scheme::CarlemanFourier => error_grid_cf(spec),
    }
}

fn evaluate(
    spec: &GridSpec,
    cell: fn(&GridSpec, &TimeGrid, CScalar, CScalar) -> Result<Cell>,
) -> Result<ErrorGrid> {
    spec.validate()?;
    let grid = spec.time_grid()?;
    let cells: Vec<Cell> = (0..spec.nx * spec.ny)
        .into_par_iter()
        .map(|k| {
            let (a, x0) = spec.cell(k % spec.nx, k / spec.nx);
            cell(spec, &grid, a, x0)
        })
        .collect::<Result<_>>()?;
    let closed_form = if cells.iter().all(|c| c.closed_form.is_some()) {
        Some(cells.iter().map(|c| c.closed_form.unwrap_or(f64::NAN)).collect())
    } else {
        None
    };
    Ok(ErrorGrid {
        spec: spec.clone(),
        raw: cells.iter().map(|c| c.raw).collect(),
        values: cells.iter().map(|c| c.value).collect(),
        flags: cells.iter().map(|c| c.flag).collect(),
        provenance: cells.iter().map(|c| c.provenance).collect(),
        closed_form,
    })
}

fn flagged(flag: CellFlag, provenance: Provenance) -> Cell {
    Cell {
        raw: f64::NAN,
        value: CLAMP_MAX,
        flag,
        provenance,
        closed_form: None,
    }
}

fn closed_form_params(a: CScalar, b: CScalar, x0: CScalar) -> Option<CaseParams> {
    if b != one() {
        return None;
    }
    CaseParams::new(a, x0).ok()
}

fn max_log10(values: impl Iterator<Item = f64>) -> f64 {
    let m = values.fold(f64::NEG_INFINITY, |m, v| if v.is_nan() { f64::NAN } else { m.max(v) });
    m.log10()
}

fn carleman_cell(spec: &GridSpec, grid: &TimeGrid, a: CScalar, x0: CScalar) -> Result<Cell> {
    let g = TrigPoly::shifted_case_study(a, spec.b);
    let section = build_carleman_section(&g.maclaurin(spec.order), spec.order)?;

    // e^{-ix(t)} on the time grid
    let (provenance, inv_exp) = match closed_form_params(a, spec.b, x0) {
        Some(p) => {
            if detect_blowup(&p, spec.t_star)?.is_some() {
                return Ok(flagged(CellFlag::Blowup, Provenance::ClosedForm));
            }
            let v = grid
                .samples()
                .into_iter()
                .map(|t| exact_exp_ix(&p, t).map(|e| 1.0 / e))
                .collect::<Result<Vec<_>>>();
            match v {
                Ok(v) => (Provenance::ClosedForm, v),
                Err(Error::BlowUpReached(_)) => {
                    return Ok(flagged(CellFlag::Blowup, Provenance::ClosedForm))
                }
                Err(e) => return Err(e),
            }
        }
        None => {
            let reference = rk45(
                |_, y, dy| dy[0] = g.eval(y[0]),
                &[x0],
                grid,
                SECTION_RTOL,
                SECTION_ATOL,
            );
            match reference {
                Ok(tr) if tr.is_complete() => (
                    Provenance::Rk45,
                    tr.states().iter().map(|s| (-I * s[0]).exp()).collect(),
                ),
                Ok(_) | Err(Error::StepSizeUnderflow { .. }) => {
                    return Ok(flagged(CellFlag::Blowup, Provenance::Rk45))
                }
                Err(e) => return Err(e),
            }
        }
    };

    let traj = match solve_finite_section(&section, x0, grid) {
        Ok(tr) if tr.is_complete() => tr,
        Ok(_) | Err(Error::StepSizeUnderflow { .. }) => {
            return Ok(flagged(CellFlag::Overflow, provenance))
        }
        Err(e) => return Err(e),
    };
    let raw = max_log10(
        traj.states()
            .iter()
            .zip(&inv_exp)
            .map(|(s, e)| ((I * s[0]).exp() * e - 1.0).norm()),
    );
    Ok(Cell {
        raw,
        value: clamp_log_error(raw),
        flag: CellFlag::Ok,
        provenance,
        closed_form: None,
    })
}

fn cf_cell(spec: &GridSpec, grid: &TimeGrid, a: CScalar, x0: CScalar) -> Result<Cell> {
    let p = CaseParams::new(a, x0)?;
    let phi = p.phi();
    let max_h = grid
        .samples()
        .into_iter()
        .map(|t| h_phi(phi, t))
        .fold(0.0, f64::max);
    let closed = clamp_log_error(
        spec.order as f64 * (-x0.im * LOG10_E + 0.5 * max_h.log10()),
    );
    if detect_blowup(&p, spec.t_star)?.is_some() {
        let mut c = flagged(CellFlag::Blowup, Provenance::ClosedForm);
        c.closed_form = Some(closed);
        return Ok(c);
    }
    let section = build_concise_cf(&p.governing_function(), spec.order)?;
    let traj = solve_concise_cf(&section, x0, grid)?;
    if !traj.is_complete() {
        let mut c = flagged(CellFlag::Overflow, Provenance::ClosedForm);
        c.closed_form = Some(closed);
        return Ok(c);
    }
    let mut errors = Vec::with_capacity(grid.len());
    for (t, s) in grid.samples().into_iter().zip(traj.states()) {
        match exact_exp_ix(&p, t) {
            Ok(e) => errors.push((s[0] / e - 1.0).norm()),
            Err(Error::BlowUpReached(_)) => {
                let mut c = flagged(CellFlag::Blowup, Provenance::ClosedForm);
                c.closed_form = Some(closed);
                return Ok(c);
            }
            Err(e) => return Err(e),
        }
    }
    let raw = max_log10(errors.into_iter());
    Ok(Cell {
        raw,
        value: clamp_log_error(raw),
        flag: CellFlag::Ok,
        provenance: Provenance::ClosedForm,
        closed_form: Some(closed),
    })
}

/// Runs `f` on a pool of `workers` threads, or on the global pool.
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::InvalidParameter("worker count must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}"))),
    }
}

#[derive(Serialize)]
struct GridMeta<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    figure: Option<&'a str>,
    panel: &'a str,
    columns: [&'a str; 5],
    spec: &'a GridSpec,
    time_samples: usize,
    clamp: [f64; 2],
    cells_ok: usize,
    cells_blowup: usize,
    cells_overflow: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form_max_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

/// Writes `<stem>.csv`, `<stem>.meta.json` and, if asked, `<stem>.png`
/// into `dir`.
pub fn write_error_grid(dir: &Path, stem: &str, grid: &ErrorGrid, png: bool) -> Result<Vec<PathBuf>> {
    write_error_grid_with(dir, stem, grid, png, None, None)
}

pub(crate) fn write_error_grid_with(
    dir: &Path,
    stem: &str,
    grid: &ErrorGrid,
    png: bool,
    figure: Option<&str>,
    note: Option<&str>,
) -> Result<Vec<PathBuf>> {
    let spec = grid.spec();
    let x_name = spec.x_axis.column_name();
    let csv = dir.join(format!("{stem}.csv"));
    write_grid_csv(&csv, x_name, "im_x0", &grid.rows())?;
    let meta = GridMeta {
        figure,
        panel: stem,
        columns: [x_name, "im_x0", "value", "flag", "provenance"],
        spec,
        time_samples: TIME_SAMPLES,
        clamp: [CLAMP_MIN, CLAMP_MAX],
        cells_ok: grid.count(CellFlag::Ok),
        cells_blowup: grid.count(CellFlag::Blowup),
        cells_overflow: grid.count(CellFlag::Overflow),
        closed_form_max_gap: grid.closed_form_gap(),
        note,
    };
    let json = dir.join(format!("{stem}.meta.json"));
    write_json(&json, &meta)?;
    let mut files = vec![csv, json];
    if png {
        let path = dir.join(format!("{stem}.png"));
        write_png(&path, grid.nx(), grid.ny(), grid.values(), CLAMP_MIN, CLAMP_MAX)?;
        files.push(path);
    }
    Ok(files)
}

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use super::output::{fmt, write_grid_csv, write_json, write_png, write_table, GridCsvRow};
use super::{
    error_grid, linspace, with_workers, write_error_grid_with, ErrorGrid, GridSpec, Scheme, XAxis,
    TIME_SAMPLES,
};
use crate::casestudy::{
    actual_time_range, cf_guaranteed_time_range, classify_trajectory, exact_at, h_phi, CaseParams,
    TrajectoryClass,
};
use crate::error::{Error, Result};
use crate::numerics::{CScalar, TimeGrid, I};
use crate::trigpoly::TrigPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3Left,
    Fig3Right,
    Fig4Top,
    Fig4Bottom,
    Fig5,
}

/// `a`, its label, file tag and the labelled seeds drawn for it.
type Fig5Panel = (CScalar, &'static str, &'static str, Vec<(&'static str, CScalar)>);

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3Left,
        FigureId::Fig3Right,
        FigureId::Fig4Top,
        FigureId::Fig4Bottom,
        FigureId::Fig5,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3Left => "fig3-left",
            FigureId::Fig3Right => "fig3-right",
            FigureId::Fig4Top => "fig4-top",
            FigureId::Fig4Bottom => "fig4-bottom",
            FigureId::Fig5 => "fig5",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownFigureId(s.to_string()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureOptions {
    /// Samples per axis of every surface.
    pub resolution: usize,
    pub png: bool,
    pub workers: Option<usize>,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            resolution: 101,
            png: cfg!(feature = "raster"),
            workers: None,
        }
    }
}

/// Writes the data behind one figure to `out_dir/<id>/` and returns the
/// emitted paths in the order written.
pub fn reproduce_figure(id: FigureId, out_dir: &Path, opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    if opts.resolution < 2 {
        return Err(Error::InvalidParameter("resolution must be at least 2".into()));
    }
    let mut fig = Figure {
        id,
        dir: out_dir.join(id.as_str()),
        opts,
        files: Vec::new(),
    };
    with_workers(opts.workers, || match id {
        FigureId::Fig1 => fig.fig1(),
        FigureId::Fig2 => fig.fig2(),
        FigureId::Fig3Left => fig.fig3_left(),
        FigureId::Fig3Right => fig.fig3_right(),
        FigureId::Fig4Top => fig.fig4_top(),
        FigureId::Fig4Bottom => fig.fig4_bottom(),
        FigureId::Fig5 => fig.fig5(),
    })??;
    Ok(fig.files)
}

const A_VALUES: [(CScalar, &str); 3] = [
    (CScalar::new(0.0, -1.0), "a_minus_i"),
    (CScalar::new(1.0, 0.0), "a_one"),
    (CScalar::new(0.0, 1.0), "a_i"),
];

#[derive(Serialize)]
struct SurfaceMeta<'a> {
    figure: &'a str,
    panel: &'a str,
    columns: [&'a str; 5],
    x_range: [f64; 2],
    y_range: [f64; 2],
    nx: usize,
    ny: usize,
    cap: f64,
}

struct Figure<'a> {
    id: FigureId,
    dir: PathBuf,
    opts: &'a FigureOptions,
    files: Vec<PathBuf>,
}

impl Figure<'_> {
    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.files.push(p.clone());
        p
    }

    fn square_spec(&self, scheme: Scheme, order: usize, t_star: f64, a: CScalar) -> GridSpec {
        GridSpec {
            scheme,
            x_axis: XAxis::ReX0,
            re_range: [-2.0, 2.0],
            im_range: [-2.0, 2.0],
            nx: self.opts.resolution,
            ny: self.opts.resolution,
            t_star,
            order,
            a,
            b: CScalar::new(1.0, 0.0),
        }
    }

    fn emit_grid(&mut self, stem: &str, grid: &ErrorGrid, note: Option<&str>) -> Result<()> {
        let files = write_error_grid_with(&self.dir, stem, grid, self.opts.png, Some(self.id.as_str()), note)?;
        self.files.extend(files);
        Ok(())
    }

    fn fig1(&mut self) -> Result<()> {
        for order in [1usize, 5, 10] {
            for (a, tag) in A_VALUES {
                let spec = self.square_spec(Scheme::Carleman, order, 0.5, a);
                let grid = error_grid(&spec)?;
                self.emit_grid(&format!("ec_n{order}_{tag}"), &grid, None)?;
            }
        }
        Ok(())
    }

    fn fig2(&mut self) -> Result<()> {
        for (b, btag) in [(2.0 / 3.0, "b_2_3"), (4.0 / 3.0, "b_4_3")] {
            for (a, atag) in A_VALUES {
                let mut spec = self.square_spec(Scheme::Carleman, 10, 0.5, a);
                spec.b = CScalar::new(b, 0.0);
                let grid = error_grid(&spec)?;
                self.emit_grid(&format!("ec_{btag}_{atag}"), &grid, None)?;
            }
        }
        Ok(())
    }

    fn fig3_left(&mut self) -> Result<()> {
        let n = self.opts.resolution;
        let x_range = [-FRAC_PI_2, FRAC_PI_2];
        let y_range = [0.0, 5.0];
        let cap = 10.0;
        let phis = linspace(x_range, n);
        let ts = linspace(y_range, n);
        let mut rows = Vec::with_capacity(n * n);
        let mut values = Vec::with_capacity(n * n);
        for &t in &ts {
            for &phi in &phis {
                let v = h_phi(phi, t).min(cap);
                values.push(v);
                rows.push(GridCsvRow {
                    x: phi,
                    y: t,
                    value: v,
                    flag: "ok",
                    provenance: "closed-form",
                });
            }
        }
        let csv = self.path("h_surface.csv");
        write_grid_csv(&csv, "phi", "t", &rows)?;
        let json = self.path("h_surface.meta.json");
        write_json(
            &json,
            &SurfaceMeta {
                figure: self.id.as_str(),
                panel: "h_surface",
                columns: ["phi", "t", "value", "flag", "provenance"],
                x_range,
                y_range,
                nx: n,
                ny: n,
                cap,
            },
        )?;
        if self.opts.png {
            let png = self.path("h_surface.png");
            write_png(&png, n, n, &values, 0.0, cap)?;
        }
        Ok(())
    }

    fn fig3_right(&mut self) -> Result<()> {
        let cap = 3.0;
        let phis = linspace([-FRAC_PI_2, 0.0], self.opts.resolution);
        let rows = phis
            .iter()
            .map(|&phi| {
                Ok(vec![
                    fmt(phi),
                    fmt(actual_time_range(phi, 0.0)?.min(cap)),
                    fmt(actual_time_range(phi, 2.0)?.min(cap)),
                    fmt(cf_guaranteed_time_range(0.0)),
                    fmt(cf_guaranteed_time_range(2.0)),
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        let csv = self.path("time_ranges.csv");
        write_table(
            &csv,
            &["phi", "t_star_im0", "t_star_im2", "t_cf_star_im0", "t_cf_star_im2"],
            &rows,
        )
    }

    fn fig4_top(&mut self) -> Result<()> {
        for (t_star, tag) in [(2.0, "tstar_2"), (0.5, "tstar_1_2"), (0.25, "tstar_1_4")] {
            let mut spec = self.square_spec(Scheme::CarlemanFourier, 10, t_star, CScalar::new(1.0, 0.0));
            spec.x_axis = XAxis::Phi;
            spec.re_range = [-FRAC_PI_2, FRAC_PI_2];
            let grid = error_grid(&spec)?;
            self.emit_grid(&format!("ecf_{tag}"), &grid, Some("Re x0 = 0; the surface does not depend on Re x0"))?;

            let times = TimeGrid::span(t_star, TIME_SAMPLES - 1)?.samples();
            let rows: Vec<Vec<String>> = spec
                .x_coords()
                .into_iter()
                .map(|phi| {
                    let max_h = times.iter().map(|&t| h_phi(phi, t)).fold(0.0, f64::max);
                    vec![fmt(phi), fmt(0.5 * max_h.ln())]
                })
                .collect();
            let csv = self.path(&format!("level_curve_{tag}.csv"));
            write_table(&csv, &["phi", "im_x0"], &rows)?;
        }
        Ok(())
    }

    fn fig4_bottom(&mut self) -> Result<()> {
        for (phi, tag) in [(-FRAC_PI_2, "phi_minus_pi_2"), (0.0, "phi_0"), (FRAC_PI_2, "phi_pi_2")] {
            let a = CScalar::from_polar(1.0, phi);
            let spec = self.square_spec(Scheme::CarlemanFourier, 10, 0.5, a);
            let grid = error_grid(&spec)?;
            self.emit_grid(&format!("ecf_{tag}"), &grid, Some("Re x0 range taken as [-2, 2]"))?;
        }
        Ok(())
    }

    fn fig5(&mut self) -> Result<()> {
        let seeds: [Fig5Panel; 3] = [
            (
                CScalar::new(1.0, 0.0),
                "1",
                "a_one",
                vec![("-1/2", CScalar::new(-0.5, 0.0)), ("-3/2", CScalar::new(-1.5, 0.0))],
            ),
            (CScalar::new(0.0, 1.0), "i", "a_i", vec![("-1/2", CScalar::new(-0.5, 0.0))]),
            (CScalar::new(0.0, -1.0), "-i", "a_minus_i", vec![("3/2", CScalar::new(1.5, 0.0))]),
        ];
        let mut class_rows = Vec::new();
        for (a, label, tag, extra) in seeds {
            self.vector_field(a, tag)?;
            let black = I * (1.0 - (I * a * FRAC_PI_2).exp()).ln();
            let mut all = vec![("black", black)];
            all.extend(extra);
            let mut traj_rows = Vec::new();
            for (name, x0) in all {
                let p = CaseParams::new(a, x0)?;
                let class = classify_trajectory(&p)?;
                let t0 = match class {
                    TrajectoryClass::BlowUp(t0) => Some(t0),
                    _ => None,
                };
                class_rows.push(vec![
                    label.to_string(),
                    name.to_string(),
                    fmt(x0.re),
                    fmt(x0.im),
                    class.name().to_string(),
                    t0.map(fmt).unwrap_or_default(),
                ]);
                let horizon = t0.map_or(4.0 * PI, |t0| 0.99 * t0);
                let times = linspace([0.0, horizon], 1001);
                for (t, x) in times.iter().zip(exact_at(&p, &times)?) {
                    traj_rows.push(vec![name.to_string(), fmt(*t), fmt(x.re), fmt(x.im)]);
                }
            }
            let csv = self.path(&format!("trajectories_{tag}.csv"));
            write_table(&csv, &["seed", "t", "re_x", "im_x"], &traj_rows)?;
        }
        let csv = self.path("classes.csv");
        write_table(&csv, &["a", "seed", "re_x0", "im_x0", "class", "t0"], &class_rows)
    }

    fn vector_field(&mut self, a: CScalar, tag: &str) -> Result<()> {
        let g = TrigPoly::case_study(a);
        let (nx, ny) = (41, 21);
        let mut rows = Vec::with_capacity(nx * ny);
        for y in linspace([-FRAC_PI_2, FRAC_PI_2], ny) {
            for x in linspace([-PI, PI], nx) {
                let v = g.eval(CScalar::new(x, y));
                rows.push(vec![fmt(x), fmt(y), fmt(v.re), fmt(v.im)]);
            }
        }
        let csv = self.path(&format!("vector_field_{tag}.csv"));
        write_table(&csv, &["re_x", "im_x", "re_g", "im_g"], &rows)
    }
}

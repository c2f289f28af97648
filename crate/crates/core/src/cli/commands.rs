use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use carleman_lift::carleman::{
    build_carleman_section, local_state_bound, solve_finite_section, CarlemanBoundReport,
    SECTION_ATOL, SECTION_RTOL,
};
use carleman_lift::carleman_fourier::{
    build_cf_section, build_concise_cf, global_rate, optimal_r, solve_cf_section, solve_concise_cf,
    CfBoundReport, MultiIndex,
};
use carleman_lift::casestudy::{
    cf_guaranteed_time_range, classify_trajectory, detect_blowup, exact_at, CaseParams,
};
use carleman_lift::experiments::{
    error_grid, reproduce_figure, with_workers, write_json, FigureId, FigureOptions, GridSpec,
    Scheme, XAxis,
};
use carleman_lift::numerics::{rk45, CMatrix, CScalar, TimeGrid, Trajectory};
use carleman_lift::trigpoly::TrigPoly;
use carleman_lift::{Error, Result};

use super::args::{Cli, Command, SchemeArg};
use super::config::{resolve_common, resolve_problem, Common, FileConfig, GridJob, Problem};
use super::EXIT_PRECONDITION;

const BOUND_CURVE_SAMPLES: usize = 64;

pub fn dispatch(cli: Cli) -> Result<i32> {
    let file = FileConfig::load(cli.global.config.as_deref())?;
    let common = resolve_common(&cli.global, &file);
    match cli.command {
        Command::Lift { problem } => lift(&common, &resolve_problem(&problem, &file)?),
        Command::Solve { problem, t1, steps } => {
            let p = resolve_problem(&problem, &file)?;
            let t1 = t1.or(file.t1).unwrap_or(p.tstar);
            let steps = steps.or(file.steps).unwrap_or(100);
            solve(&common, &p, t1, steps)
        }
        Command::Bounds { problem, n_list, r, m0 } => {
            let p = resolve_problem(&problem, &file)?;
            let n_list = n_list.or(file.n_list.clone()).unwrap_or(vec![1, 2, 5, 10]);
            bounds(&common, &p, &n_list, r.or(file.r), m0.or(file.m0))
        }
        Command::Grid { problem, nx, ny } => {
            let jobs = match (&file.grids, has_problem_flags(&problem)) {
                (Some(grids), false) => grids.clone(),
                _ => {
                    let p = resolve_problem(&problem, &file)?;
                    vec![single_grid(&p, nx.or(file.nx), ny.or(file.ny))?]
                }
            };
            grid(&common, &jobs)
        }
        Command::Figure { id, resolution } => {
            figure(&common, &id, resolution.or(file.resolution).unwrap_or(101))
        }
        Command::Classify { problem } => classify(&common, &resolve_problem(&problem, &file)?),
    }
}

fn has_problem_flags(p: &super::args::ProblemArgs) -> bool {
    p.g.is_some()
        || p.scheme.is_some()
        || p.order.is_some()
        || p.x0.is_some()
        || p.a.is_some()
        || p.b.is_some()
        || p.phi.is_some()
        || p.tstar.is_some()
}

#[derive(Serialize)]
struct Resolved<'a, T: Serialize> {
    command: &'a str,
    #[serde(flatten)]
    common: &'a Common,
    #[serde(flatten)]
    params: T,
}

fn write_resolved<T: Serialize>(dir: &Path, command: &str, common: &Common, params: T) -> Result<()> {
    write_json(
        &dir.join("resolved-config.json"),
        &Resolved {
            command,
            common,
            params,
        },
    )
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_complex(z: CScalar) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{sign}{:.16e}i", z.re, z.im.abs())
}

fn write_lines(path: &Path, lines: &[String]) -> Result<()> {
    let mut text = lines.join("\n");
    text.push('\n');
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| io_error(path, e))
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source: e,
    }
}

fn print_json(v: &impl Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn section_matrix(p: &Problem, g: &TrigPoly) -> Result<CMatrix> {
    Ok(match p.scheme {
        SchemeArg::Carleman => build_carleman_section(&g.maclaurin(p.order), p.order)?.matrix().clone(),
        SchemeArg::Cf => build_cf_section(g, p.order)?.matrix().clone(),
        SchemeArg::ConciseCf => build_concise_cf(g, p.order)?.matrix().clone(),
    })
}

fn lift(common: &Common, p: &Problem) -> Result<i32> {
    let g = p.trig_poly()?;
    let m = section_matrix(p, &g)?;
    let dir = common.out.join("lift");
    let rows: Vec<String> = (0..m.rows())
        .map(|r| m.row(r).iter().map(|z| fmt_complex(*z)).collect::<Vec<_>>().join(","))
        .collect();
    write_lines(&dir.join("matrix.csv"), &rows)?;
    let summary = json!({
        "scheme": p.scheme,
        "N": p.order,
        "dimension": m.rows(),
        "upper_bandwidth": m.upper_bandwidth(),
        "lower_bandwidth": m.lower_bandwidth(),
        "upper_triangular": m.is_upper_triangular(),
    });
    write_json(&dir.join("summary.json"), &summary)?;
    write_resolved(&dir, "lift", common, p)?;
    print_json(&summary)?;
    Ok(0)
}

/// Reference solution at each sample, `None` where it does not exist.
/// Per-sample reference values, the blow-up time and the reference's provenance.
type Reference = (Vec<Option<CScalar>>, Option<f64>, &'static str);

fn reference(p: &Problem, g: &TrigPoly, grid: &TimeGrid) -> Result<Reference> {
    let times = grid.samples();
    if p.case_study && p.b == CScalar::new(1.0, 0.0) {
        if let Ok(cp) = CaseParams::new(p.a, p.x0) {
            let t0 = detect_blowup(&cp, grid.t1())?;
            let cut = times.iter().position(|&t| t0.is_some_and(|t0| t >= t0)).unwrap_or(times.len());
            let mut out = vec![None; times.len()];
            match exact_at(&cp, &times[..cut]) {
                Ok(xs) => {
                    for (o, x) in out.iter_mut().zip(xs) {
                        *o = Some(x);
                    }
                }
                Err(Error::BlowUpReached(_)) => {
                    for (k, t) in times[..cut].iter().enumerate() {
                        match exact_at(&cp, &[*t]) {
                            Ok(x) => out[k] = Some(x[0]),
                            Err(_) => break,
                        }
                    }
                }
                Err(e) => return Err(e),
            }
            return Ok((out, t0, "closed-form"));
        }
    }
    let tr = match rk45(|_, y, dy| dy[0] = g.eval(y[0]), &[p.x0], grid, SECTION_RTOL, SECTION_ATOL) {
        Ok(tr) => tr,
        Err(Error::StepSizeUnderflow { t, .. }) => return Ok((vec![None; times.len()], Some(t), "rk45")),
        Err(e) => return Err(e),
    };
    let out = (0..tr.len()).map(|k| tr.is_valid(k).then(|| tr.state(k)[0])).collect();
    Ok((out, tr.overflow_time(), "rk45"))
}

fn solve(common: &Common, p: &Problem, t1: f64, steps: usize) -> Result<i32> {
    let g = p.trig_poly()?;
    let grid = TimeGrid::span(t1, steps)?;
    let (traj, names): (Trajectory, Vec<String>) = match p.scheme {
        SchemeArg::Carleman => {
            let sec = build_carleman_section(&g.maclaurin(p.order), p.order)?;
            (solve_finite_section(&sec, p.x0, &grid)?, (1..=p.order).map(|k| format!("x{k}")).collect())
        }
        SchemeArg::Cf => {
            let sec = build_cf_section(&g, p.order)?;
            let names = sec.indices().iter().map(|a: &MultiIndex| format!("y{}_{}", a.alpha1, a.alpha2)).collect();
            (solve_cf_section(&sec, p.x0, &grid)?, names)
        }
        SchemeArg::ConciseCf => {
            let sec = build_concise_cf(&g, p.order)?;
            (solve_concise_cf(&sec, p.x0, &grid)?, (1..=p.order).map(|k| format!("z{k}")).collect())
        }
    };
    let (reference, blowup, provenance) = reference(p, &g, &grid)?;

    let mut header = vec!["t".to_string()];
    for n in &names {
        header.push(format!("re_{n}"));
        header.push(format!("im_{n}"));
    }
    header.extend(["re_x_ref", "im_x_ref", "error", "flag"].map(String::from));
    let mut lines = vec![header.join(",")];
    for (k, &x_k) in reference.iter().enumerate() {
        let mut row = vec![fmt(traj.times()[k])];
        for z in traj.state(k) {
            row.push(fmt(z.re));
            row.push(fmt(z.im));
        }
        let (flag, x_ref, err) = match (traj.is_valid(k), x_k) {
            (false, _) => ("overflow", x_k, f64::NAN),
            (true, None) => ("blowup", None, f64::NAN),
            (true, Some(x)) => {
                let y = traj.state(k)[0];
                let err = match p.scheme {
                    SchemeArg::Carleman => (y - x).norm(),
                    _ => (y * (-CScalar::i() * x).exp() - 1.0).norm(),
                };
                ("ok", Some(x), err)
            }
        };
        let x = x_ref.unwrap_or(CScalar::new(f64::NAN, f64::NAN));
        row.extend([fmt(x.re), fmt(x.im), fmt(err), flag.to_string()]);
        lines.push(row.join(","));
    }
    let dir = common.out.join("solve");
    write_lines(&dir.join("trajectory.csv"), &lines)?;
    let summary = json!({
        "scheme": p.scheme,
        "N": p.order,
        "samples": traj.len(),
        "valid_samples": traj.valid_samples(),
        "overflow_time": traj.overflow_time(),
        "reference": provenance,
        "blowup_time": blowup,
    });
    write_json(&dir.join("summary.json"), &summary)?;
    write_resolved(&dir, "solve", common, json!({ "problem": p, "t1": t1, "steps": steps }))?;
    print_json(&summary)?;
    Ok(0)
}

fn curve(t_star: f64, n: usize, bound: impl Fn(usize, f64) -> Result<f64>) -> Result<Value> {
    let times: Vec<f64> = (0..BOUND_CURVE_SAMPLES)
        .map(|k| t_star * k as f64 / (BOUND_CURVE_SAMPLES - 1) as f64)
        .collect();
    let values = times.iter().map(|&t| bound(n, t)).collect::<Result<Vec<_>>>()?;
    Ok(json!({ "N": n, "t": times, "bound": values }))
}

fn bounds(common: &Common, p: &Problem, n_list: &[usize], r: Option<f64>, m0: Option<f64>) -> Result<i32> {
    if n_list.is_empty() || n_list.contains(&0) {
        return Err(Error::InvalidParameter("--n-list needs positive orders".into()));
    }
    let g = p.trig_poly()?;
    let mut violated = false;

    let (c0, r0) = g.growth_constants(64);
    let carleman = match CarlemanBoundReport::new(c0, r0, p.x0) {
        Ok(rep) => {
            let curves = n_list
                .iter()
                .map(|&n| curve(rep.t_star, n, |n, t| rep.bound(n, t)))
                .collect::<Result<Vec<_>>>()?;
            json!({
                "C0": rep.c0, "R0": rep.r0, "tilde_R0": rep.tilde_r0, "T_star": rep.t_star,
                "curves": curves,
            })
        }
        Err(e) => json!({ "error": e.to_string() }),
    };

    let case_study = p.case_study && p.b == CScalar::new(1.0, 0.0);
    let radius = r.unwrap_or_else(|| optimal_r(p.x0));
    let report = if case_study {
        CfBoundReport::with_d0(radius, p.x0, radius)
    } else {
        CfBoundReport::new(&g, p.x0, radius)
    };
    let cf = match report {
        Ok(rep) => {
            let curves = n_list
                .iter()
                .map(|&n| curve(rep.t_cf_star, n, |n, t| rep.bound(n, t)))
                .collect::<Result<Vec<_>>>()?;
            json!({
                "R": rep.r, "D0": rep.d0, "D0_rule": if case_study { "R" } else { "general" },
                "C0": rep.c0, "T_cf_star": rep.t_cf_star, "curves": curves,
            })
        }
        Err(e @ Error::InitialOutOfStrip { .. }) => {
            violated = true;
            json!({ "R": radius, "strip_violation": e.to_string() })
        }
        Err(e) => return Err(e),
    };

    let global = match global_rate(&g, p.x0, radius) {
        Ok(gr) => serde_json::to_value(gr)?,
        Err(e) => json!({ "error": e.to_string() }),
    };
    let mut report = json!({
        "x0": p.x0,
        "carleman": carleman,
        "carleman_fourier": cf,
        "global_rate": global,
    });
    if case_study {
        report["T_cf_star_optimal"] = json!(cf_guaranteed_time_range(p.x0.im));
    }
    if let Some(m0) = m0 {
        report["local_state_bound"] = match local_state_bound(c0, r0, p.x0, m0) {
            Ok(t) => json!({ "M0": m0, "T": t }),
            Err(e) => json!({ "M0": m0, "error": e.to_string() }),
        };
    }
    let dir = common.out.join("bounds");
    write_json(&dir.join("report.json"), &report)?;
    write_resolved(
        &dir,
        "bounds",
        common,
        json!({ "problem": p, "n_list": n_list, "R": radius, "m0": m0 }),
    )?;
    print_json(&report)?;
    if violated {
        eprintln!("error: initial value violates the strip condition");
        return Ok(EXIT_PRECONDITION);
    }
    Ok(0)
}

fn single_grid(p: &Problem, nx: Option<usize>, ny: Option<usize>) -> Result<GridJob> {
    let scheme = match p.scheme {
        SchemeArg::Carleman => Scheme::Carleman,
        SchemeArg::Cf | SchemeArg::ConciseCf => Scheme::CarlemanFourier,
    };
    if !p.case_study {
        return Err(Error::InvalidParameter("grids are defined for the case-study family a (1 - b e^{ix})".into()));
    }
    Ok(GridJob {
        name: None,
        spec: GridSpec {
            scheme,
            x_axis: XAxis::ReX0,
            re_range: [-2.0, 2.0],
            im_range: [-2.0, 2.0],
            nx: nx.unwrap_or(101),
            ny: ny.unwrap_or(101),
            t_star: p.tstar,
            order: p.order,
            a: p.a,
            b: p.b,
        },
    })
}

fn grid(common: &Common, jobs: &[GridJob]) -> Result<i32> {
    let dir = common.out.join("grid");
    let mut written = Vec::new();
    for (k, job) in jobs.iter().enumerate() {
        let name = job.name.clone().unwrap_or_else(|| format!("grid_{k:02}"));
        if name.is_empty() || name.contains(['/', '\\']) || name.starts_with('.') {
            return Err(Error::InvalidParameter(format!("invalid grid name `{name}`")));
        }
        let g = with_workers(common.workers, || error_grid(&job.spec))??;
        let files = carleman_lift::experiments::write_error_grid(&dir, &name, &g, common.png)?;
        written.extend(files);
    }
    write_resolved(&dir, "grid", common, json!({ "grids": jobs }))?;
    print_files(&written);
    Ok(0)
}

fn print_files(files: &[PathBuf]) {
    for f in files {
        println!("{}", f.display());
    }
}

fn figure(common: &Common, id: &str, resolution: usize) -> Result<i32> {
    let ids: Vec<FigureId> = if id == "all" {
        FigureId::ALL.to_vec()
    } else {
        vec![id.parse()?]
    };
    let opts = FigureOptions {
        resolution,
        png: common.png,
        workers: common.workers,
    };
    for id in ids {
        let files = reproduce_figure(id, &common.out, &opts)?;
        write_resolved(
            &common.out.join(id.as_str()),
            "figure",
            common,
            json!({ "id": id.as_str(), "resolution": resolution }),
        )?;
        print_files(&files);
    }
    Ok(0)
}

fn classify(common: &Common, p: &Problem) -> Result<i32> {
    if !(p.case_study && p.b == CScalar::new(1.0, 0.0)) {
        return Err(Error::InvalidParameter("classification needs the case study with b = 1".into()));
    }
    let cp = CaseParams::new(p.a, p.x0)?;
    let class = classify_trajectory(&cp)?;
    let result = json!({
        "a": p.a,
        "x0": p.x0,
        "class": class.name(),
        "t0": match class {
            carleman_lift::casestudy::TrajectoryClass::BlowUp(t0) => Some(t0),
            _ => None,
        },
    });
    let dir = common.out.join("classify");
    write_json(&dir.join("result.json"), &result)?;
    write_resolved(&dir, "classify", common, p)?;
    print_json(&result)?;
    Ok(0)
}

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use carleman_lift::experiments::GridSpec;
use carleman_lift::numerics::CScalar;
use carleman_lift::trigpoly::{TrigPoly, TrigPolyJson};
use carleman_lift::{Error, Result};

use super::args::{GlobalArgs, ProblemArgs, SchemeArg};

pub const OUT_ENV: &str = "CARLEMAN_LIFT_OUT";

/// Values read from `--config`; every field is optional and loses against
/// the corresponding flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub png: Option<bool>,
    pub scheme: Option<SchemeArg>,
    #[serde(rename = "N")]
    pub order: Option<usize>,
    pub x0: Option<[f64; 2]>,
    pub a: Option<[f64; 2]>,
    pub b: Option<[f64; 2]>,
    pub phi: Option<f64>,
    pub tstar: Option<f64>,
    /// Inline polynomial or a path to one.
    pub g: Option<GSource>,
    pub t1: Option<f64>,
    pub steps: Option<usize>,
    pub n_list: Option<Vec<usize>>,
    #[serde(rename = "R")]
    pub r: Option<f64>,
    pub m0: Option<f64>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub resolution: Option<usize>,
    pub grids: Option<Vec<GridJob>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GSource {
    Path(PathBuf),
    Inline(TrigPolyJson),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridJob {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub spec: GridSpec,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}

/// Settings shared by all commands after merging flags, config file and
/// environment.
#[derive(Debug, Clone, Serialize)]
pub struct Common {
    pub out: PathBuf,
    pub workers: Option<usize>,
    pub png: bool,
}

pub fn resolve_common(global: &GlobalArgs, file: &FileConfig) -> Common {
    let out = global
        .out
        .clone()
        .or_else(|| file.out.clone())
        .or_else(|| std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    Common {
        out,
        workers: global.workers.or(file.workers),
        png: global.png || file.png.unwrap_or(false),
    }
}

/// Fully resolved problem parameters.
#[derive(Debug, Clone, Serialize)]
pub struct Problem {
    pub scheme: SchemeArg,
    #[serde(rename = "N")]
    pub order: usize,
    pub x0: CScalar,
    pub a: CScalar,
    pub b: CScalar,
    pub tstar: f64,
    pub g: TrigPolyJson,
    /// True when `g` is `a (1 - b e^{ix})` built from `a` and `b`.
    pub case_study: bool,
}

fn complex(v: [f64; 2]) -> CScalar {
    CScalar::new(v[0], v[1])
}

pub fn resolve_problem(args: &ProblemArgs, file: &FileConfig) -> Result<Problem> {
    let a = args
        .a
        .map(complex)
        .or_else(|| args.phi.map(|p| CScalar::from_polar(1.0, p)))
        .or_else(|| file.a.map(complex))
        .or_else(|| file.phi.map(|p| CScalar::from_polar(1.0, p)))
        .unwrap_or(CScalar::new(1.0, 0.0));
    let b = args.b.or(file.b).map(complex).unwrap_or(CScalar::new(1.0, 0.0));
    let source = match (&args.g, &file.g) {
        (Some(p), _) => Some(GSource::Path(p.clone())),
        (None, g) => g.clone(),
    };
    let (g, case_study) = match source {
        Some(GSource::Path(p)) => {
            let text = fs::read_to_string(&p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            (TrigPoly::from_json_str(&text)?, false)
        }
        Some(GSource::Inline(json)) => (TrigPoly::from_json(&json)?, false),
        None => {
            if a == CScalar::new(0.0, 0.0) {
                return Err(Error::InvalidParameter("a must be nonzero".into()));
            }
            (TrigPoly::shifted_case_study(a, b), true)
        }
    };
    let order = args.order.or(file.order).unwrap_or(5);
    if order == 0 {
        return Err(Error::InvalidParameter("--N must be at least 1".into()));
    }
    let tstar = args.tstar.or(file.tstar).unwrap_or(0.5);
    if !(tstar > 0.0 && tstar.is_finite()) {
        return Err(Error::InvalidParameter(format!("--tstar = {tstar} must be positive")));
    }
    Ok(Problem {
        scheme: args.scheme.or(file.scheme).unwrap_or(SchemeArg::Carleman),
        order,
        x0: args.x0.or(file.x0).map(complex).unwrap_or(CScalar::new(0.1, 0.0)),
        a,
        b,
        tstar,
        g: g.to_json(),
        case_study,
    })
}

impl Problem {
    pub fn trig_poly(&self) -> Result<TrigPoly> {
        TrigPoly::from_json(&self.g)
    }
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "carleman-lift", version, about = "Carleman and Carleman-Fourier linearization toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON file with default values for any flag
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory [env: CARLEMAN_LIFT_OUT, default: out]
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for grid evaluation
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Also render PNG heatmaps
    #[arg(long, global = true)]
    pub png: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeArg {
    Carleman,
    Cf,
    ConciseCf,
}

/// Governing function and section parameters shared by most commands.
#[derive(Debug, Args, Default)]
pub struct ProblemArgs {
    /// JSON file with the governing function: {"M": 1, "coeffs": [[m, re, im], ...]}
    #[arg(long)]
    pub g: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
    /// Truncation order
    #[arg(long = "N")]
    pub order: Option<usize>,
    /// Initial value as `re,im`
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub x0: Option<[f64; 2]>,
    /// Case-study coefficient `a` as `re,im`
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub a: Option<[f64; 2]>,
    /// Shift `b` in a (1 - b e^{ix}) as `re,im`
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub b: Option<[f64; 2]>,
    /// Angle with a = e^{i phi}
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Time range T*
    #[arg(long, allow_hyphen_values = true)]
    pub tstar: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a finite section and dump its matrix
    Lift {
        #[command(flatten)]
        problem: ProblemArgs,
    },
    /// Solve a finite section on a uniform time grid
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        /// End time (defaults to --tstar)
        #[arg(long, allow_hyphen_values = true)]
        t1: Option<f64>,
        /// Number of time steps
        #[arg(long, allow_hyphen_values = true)]
        steps: Option<usize>,
    },
    /// Evaluate the a-priori error bounds
    Bounds {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Comma-separated truncation orders
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<usize>>,
        /// Radius R of the Carleman-Fourier bound
        #[arg(long = "R", allow_hyphen_values = true)]
        r: Option<f64>,
        /// Containment radius for the local state bound
        #[arg(long, allow_hyphen_values = true)]
        m0: Option<f64>,
    },
    /// Evaluate an error surface over a grid of initial values
    Grid {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        nx: Option<usize>,
        #[arg(long)]
        ny: Option<usize>,
    },
    /// Reproduce the data behind a figure
    Figure {
        /// fig1, fig2, fig3-left, fig3-right, fig4-top, fig4-bottom, fig5 or all
        id: String,
        /// Samples per axis of each surface
        #[arg(long)]
        resolution: Option<usize>,
    },
    /// Classify the long-time behaviour of a case-study trajectory
    Classify {
        #[command(flatten)]
        problem: ProblemArgs,
    },
}

pub fn parse_complex(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("`{p}`: {e}"));
    match parts.as_slice() {
        [re] => Ok([num(re)?, 0.0]),
        [re, im] => Ok([num(re)?, num(im)?]),
        _ => Err(format!("expected `re,im`, got `{s}`")),
    }
}

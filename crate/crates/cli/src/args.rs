use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "poncelet", version, about = "Poncelet billiard experiments")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Error radius of rotation-number estimates.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate the billiard map along an invariant circle.
    Orbit(OrbitArgs),
    /// Rotation number over a parameter grid.
    Staircase(StaircaseArgs),
    /// Locate and count n-Poncelet pairs.
    Count(CountArgs),
    /// Continued fractions, Gauss-map remainders and balanced convergent pairs.
    Cf(CfArgs),
    /// Second-order growth of the rotation number at an irrational value.
    Prop2(Prop2Args),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Geometry {
    /// Radius of the outer circle K.
    #[arg(long = "R", default_value_t = 1.0)]
    pub outer_radius: f64,
    /// Distance between the centres.
    #[arg(long = "c", default_value_t = 0.0)]
    pub offset: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub geometry: Geometry,
    /// Radius of the inner circle L.
    #[arg(long = "t")]
    pub inner_radius: f64,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    /// Starting angle on K, radians.
    #[arg(long, default_value_t = 0.0)]
    pub theta0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Poncelet,
    Arnold,
    Rigid,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StaircaseArgs {
    #[arg(long, value_enum, default_value_t = FamilyKind::Poncelet)]
    pub family: FamilyKind,
    #[command(flatten)]
    pub geometry: Geometry,
    /// Arnold coupling.
    #[arg(long = "K", default_value_t = 0.8)]
    pub coupling: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Grid start; defaults to the start of the parameter interval.
    #[arg(long)]
    pub t_min: Option<f64>,
    /// Grid end; defaults to the end of the parameter interval.
    #[arg(long)]
    pub t_max: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CountArgs {
    #[command(flatten)]
    pub geometry: Geometry,
    #[arg(long, default_value_t = 3)]
    pub n_min: u64,
    #[arg(long, default_value_t = 12)]
    pub n_max: u64,
    /// Random starting points per closure check.
    #[arg(long, default_value_t = 20)]
    pub starts: usize,
    /// Bisection tolerance on the inner radius.
    #[arg(long, default_value_t = 1e-12)]
    pub tol_t: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CfArgs {
    /// A decimal, a fraction `p/q` or `golden`.
    #[arg(long, conflicts_with = "random")]
    pub x: Option<String>,
    /// Number of random 53-bit dyadics in (0, 1).
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 35)]
    pub n_max: usize,
    /// Epsilons for the balanced-pair search.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.5])]
    pub eps: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Prop2Args {
    #[arg(long, value_enum, default_value_t = FamilyKind::Arnold)]
    pub family: FamilyKind,
    #[command(flatten)]
    pub geometry: Geometry,
    #[arg(long = "K", default_value_t = 0.7)]
    pub coupling: f64,
    /// Parameter at which to estimate; located from `--target` when absent.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Rotation value to locate: a decimal or `golden`.
    #[arg(long, default_value = "golden")]
    pub target: String,
    /// Number of halvings of the symmetric bracket, starting at 0.05.
    #[arg(long, default_value_t = 12)]
    pub deltas: u32,
}

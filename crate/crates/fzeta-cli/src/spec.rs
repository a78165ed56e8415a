//! Invocation structures.  The same types serve as the clap surface and
//! as the serializable run description, so any invocation can be saved
//! with `--emit-spec` and replayed later with `--spec`, reproducing its
//! output byte for byte.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, Parser)]
#[command(
    name = "fzeta",
    version,
    about = "Fractal zeta functions: catalog, pole tables, tube formulas, rasters, spectra"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    /// Worker threads (otherwise FZETA_WORKERS, then the machine).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Write the resolved run description to this path before running.
    #[arg(long, global = true, value_name = "PATH")]
    pub emit_spec: Option<PathBuf>,

    /// Replay a saved run description instead of giving a subcommand.
    #[arg(long, value_name = "PATH", conflicts_with = "emit_spec")]
    pub spec: Option<PathBuf>,
}

/// A complete, replayable description of one run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunSpec {
    /// Worker threads; zero means "decide at run time".
    #[serde(default)]
    pub workers: usize,
    #[serde(flatten)]
    pub command: Command,
}

impl RunSpec {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("run spec serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<RunSpec, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::usage(format!("run spec does not parse: {e}")))
    }

    pub fn load(path: &Path) -> Result<RunSpec, CliError> {
        RunSpec::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        Ok(std::fs::write(path, self.to_json())?)
    }
}

#[derive(Clone, Debug, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// List catalog entries, or show one in detail.
    Catalog(CatalogArgs),
    /// Evaluate a zeta function at spot values.
    Zeta(ZetaArgs),
    /// Complex dimensions (pole table) of a target in a window.
    Dims(DimsArgs),
    /// Predict tube volumes from the pole expansion.
    TubePredict(TubePredictArgs),
    /// Measure tube volumes on a rasterized set.
    TubeMeasure(TubeMeasureArgs),
    /// Predicted against reference tube volumes, with error summary.
    TubeCompare(TubeCompareArgs),
    /// Minkowski measurability and fractality verdict.
    Classify(ClassifyArgs),
    /// Frequency counts against the volume asymptotics.
    Spectral(SpectralArgs),
    /// Minkowski sum of two pole divisors, checked against a catalog
    /// entry when one is named.
    DivisorSum(DivisorSumArgs),
    /// Run the verification suite and summarize pass/fail per criterion.
    Report(ReportArgs),
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct CatalogArgs {
    /// Entry name; list all when absent.
    pub name: Option<String>,

    /// Emit JSON instead of the table.
    #[arg(long)]
    #[serde(default)]
    pub json: bool,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct ZetaArgs {
    /// riemann, a catalog entry, or string:<name>.
    pub target: String,

    /// Evaluation point, `re`, `re,im`, or `re+imi`; repeatable.
    #[arg(long = "at", value_name = "S", required = true)]
    pub at: Vec<String>,

    /// Ambient dimension for parametric entries.
    #[arg(long)]
    pub n: Option<u32>,

    /// Neighborhood depth for entries that take one.
    #[arg(long)]
    pub delta: Option<f64>,

    /// Write CSV here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct DimsArgs {
    /// Catalog entry, string:<name>, or moran:<ratios>.
    pub target: String,

    #[arg(long)]
    pub n: Option<u32>,

    #[arg(long)]
    pub delta: Option<f64>,

    /// Pole ladder rungs (conjugate pairs) the default window spans.
    #[arg(long, default_value_t = 5)]
    #[serde(default = "default_kmax_small")]
    pub kmax: u32,

    /// Window overrides; defaults come from the target's geometry.
    #[arg(long)]
    pub re_min: Option<f64>,
    #[arg(long)]
    pub re_max: Option<f64>,
    #[arg(long)]
    pub im_min: Option<f64>,
    #[arg(long)]
    pub im_max: Option<f64>,

    /// Write JSON here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct TubePredictArgs {
    /// Catalog entry with a closed form, or string:<name>.
    pub target: String,

    #[arg(long)]
    pub n: Option<u32>,

    #[arg(long)]
    pub delta: Option<f64>,

    /// Pole ladder rungs kept in the expansion.
    #[arg(long, default_value_t = 64)]
    #[serde(default = "default_kmax_large")]
    pub kmax: u32,

    /// Smallest width of the log-spaced grid.
    #[arg(long, default_value_t = 1e-4)]
    #[serde(default = "default_eps_min")]
    pub eps_min: f64,

    /// Largest width of the log-spaced grid.
    #[arg(long, default_value_t = 0.1)]
    #[serde(default = "default_eps_max")]
    pub eps_max: f64,

    /// Number of grid points.
    #[arg(long, default_value_t = 50)]
    #[serde(default = "default_points")]
    pub points: usize,

    /// Validity ceiling override for the expansion.
    #[arg(long)]
    pub valid_to: Option<f64>,

    /// Write CSV here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct TubeMeasureArgs {
    /// Raster family: gasket, carpet, staircase, square, or disk.
    pub raster: String,

    /// Prefractal depth for the self-similar rasters.
    #[arg(long, default_value_t = 8)]
    #[serde(default = "default_depth")]
    pub depth: u32,

    /// Cells per unit length.
    #[arg(long, default_value_t = 1024)]
    #[serde(default = "default_resolution")]
    pub resolution: usize,

    #[arg(long, default_value_t = 0.02)]
    #[serde(default = "default_eps_meas_min")]
    pub eps_min: f64,

    #[arg(long, default_value_t = 0.2)]
    #[serde(default = "default_eps_meas_max")]
    pub eps_max: f64,

    #[arg(long, default_value_t = 16)]
    #[serde(default = "default_points_meas")]
    pub points: usize,

    /// Also measure at double the resolution and extrapolate the
    /// cell-size bias away.
    #[arg(long)]
    #[serde(default)]
    pub richardson: bool,

    /// Write CSV here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct TubeCompareArgs {
    /// Target with both an expansion and a reference volume.
    pub target: String,

    #[arg(long)]
    pub n: Option<u32>,

    #[arg(long)]
    pub delta: Option<f64>,

    #[arg(long, default_value_t = 200)]
    #[serde(default = "default_kmax_compare")]
    pub kmax: u32,

    #[arg(long, default_value_t = 1e-4)]
    #[serde(default = "default_eps_min")]
    pub eps_min: f64,

    /// Defaults to the expansion's validity ceiling.
    #[arg(long)]
    pub eps_max: Option<f64>,

    #[arg(long, default_value_t = 50)]
    #[serde(default = "default_points")]
    pub points: usize,

    /// Raster resolution when the reference is a raster.
    #[arg(long, default_value_t = 1024)]
    #[serde(default = "default_resolution")]
    pub resolution: usize,

    /// Raster depth when the reference is a raster.
    #[arg(long, default_value_t = 8)]
    #[serde(default = "default_depth")]
    pub depth: u32,

    #[arg(long)]
    pub valid_to: Option<f64>,

    /// Fail (exit 1) when the worst relative error exceeds this.
    #[arg(long)]
    pub tolerance: Option<f64>,

    /// Write CSV here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct ClassifyArgs {
    /// Catalog entry or string:<name>.
    pub target: String,

    #[arg(long)]
    pub n: Option<u32>,

    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct SpectralArgs {
    /// A string target, string:<name>.
    pub target: String,

    #[arg(long, default_value_t = 10.0)]
    #[serde(default = "default_x_min")]
    pub x_min: f64,

    #[arg(long, default_value_t = 1e6)]
    #[serde(default = "default_x_max")]
    pub x_max: f64,

    #[arg(long, default_value_t = 40)]
    #[serde(default = "default_points")]
    pub points: usize,

    /// Write CSV here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct DivisorSumArgs {
    /// Left catalog entry.
    pub left: String,

    /// Right catalog entry.
    pub right: String,

    /// Entry whose divisor the sum should reproduce.
    #[arg(long)]
    pub expect: Option<String>,

    /// Vertical window size in oscillation periods.
    #[arg(long, default_value_t = 5.0)]
    #[serde(default = "default_periods")]
    pub periods: f64,

    /// Write JSON here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct ReportArgs {
    /// Criteria to run, comma separated; all when absent.
    #[arg(long, value_delimiter = ',')]
    pub criteria: Option<Vec<u32>>,

    /// Directory for JSON and CSV artifacts.
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,

    /// Seed for the randomized spot checks.
    #[arg(long, default_value_t = 7)]
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_kmax_small() -> u32 {
    5
}
fn default_kmax_large() -> u32 {
    64
}
fn default_kmax_compare() -> u32 {
    200
}
fn default_eps_min() -> f64 {
    1e-4
}
fn default_eps_max() -> f64 {
    0.1
}
fn default_points() -> usize {
    50
}
fn default_depth() -> u32 {
    8
}
fn default_resolution() -> usize {
    1024
}
fn default_eps_meas_min() -> f64 {
    0.02
}
fn default_eps_meas_max() -> f64 {
    0.2
}
fn default_points_meas() -> usize {
    16
}
fn default_x_min() -> f64 {
    10.0
}
fn default_x_max() -> f64 {
    1e6
}
fn default_periods() -> f64 {
    5.0
}
fn default_seed() -> u64 {
    7
}

//! Command-line arguments and value parsers.

use std::f64::consts::PI;
use std::path::PathBuf;

use catlab::wigner::GridSpec;
use catlab::{CatalysisParams, Complex64, ThermalChannel};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "catlab", version, about = "Photon-catalysed coherent states: statistics, Wigner functions, decoherence")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Q, g2, quadrature variances, S_opt and success probability on a parameter lattice
    Metrics(MetricsArgs),
    /// Photon-number distribution
    Pnd(PndArgs),
    /// Wigner function on a grid, with negative volume and minimum
    Wigner(WignerArgs),
    /// Negative-volume table for m in 1..=3, z in {1, 2}, theta in {pi/5, pi/4, pi/3}
    Table1(OutputArgs),
    /// Minimum and negative volume of the decohered Wigner function versus kt
    Decohere(DecohereArgs),
    /// Best quadrature squeezing over theta
    SqueezeOpt(SqueezeArgs),
    /// One-dimensional scan of a metric with extrema and zero crossings
    Scan(ScanArgs),
    /// Bundled reproduction recipes
    Repro(ReproArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct OutputArgs {
    /// Output file (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct StateArgs {
    /// Input amplitude as "re[,im]"; repeat for several values
    #[arg(long = "z", default_values = ["1"], allow_hyphen_values = true)]
    pub z: Vec<String>,
    /// Beam-splitter angle: radians or pi, pi/3, pi/4, pi/5, pi/6; comma lists allowed
    #[arg(long, default_values = ["pi/4"], value_delimiter = ',')]
    pub theta: Vec<String>,
    /// Catalysis photon number; comma lists allowed
    #[arg(long, default_values = ["1"], value_delimiter = ',')]
    pub m: Vec<u32>,
}

#[derive(Debug, Args, Serialize)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Per-mode truncation for the Fock-space simulation
    #[arg(long)]
    pub n_trunc: Option<usize>,
    /// Recompute every row with the Fock-space oracle and report the deviation
    #[arg(long)]
    pub oracle: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct PndArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Largest photon number listed (default: converged truncation)
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub n_trunc: Option<usize>,
    #[arg(long)]
    pub oracle: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ChannelArgs {
    /// Scaled decay time kt
    #[arg(long, default_value_t = 0.0)]
    pub kt: f64,
    /// Mean thermal occupation of the bath
    #[arg(long, default_value_t = 0.0)]
    pub nbar: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct WignerArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// "half_width,n" around the state or "q_min,q_max,p_min,p_max,n_q,n_p"
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long)]
    pub n_trunc: Option<usize>,
    #[arg(long)]
    pub oracle: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct DecohereArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Decay times; comma list (default 0 to 0.5 in steps of 0.025)
    #[arg(long, value_delimiter = ',')]
    pub kt: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub nbar: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct SqueezeArgs {
    /// Input amplitude as "re[,im]"; repeat for several values
    #[arg(long = "z", default_values = ["1"], allow_hyphen_values = true)]
    pub z: Vec<String>,
    /// Catalysis photon number; comma lists allowed
    #[arg(long, default_values = ["1"], value_delimiter = ',')]
    pub m: Vec<u32>,
    /// Coarse theta points before refinement
    #[arg(long, default_value_t = 2000)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variable {
    Theta,
    Z,
    Kt,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    /// q, g2, var_q, var_p, db_q, db_p, s_opt, mean_n, p<n>, min_w, delta
    #[arg(long)]
    pub metric: String,
    #[arg(long = "var", value_enum, default_value = "theta")]
    pub variable: Variable,
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<f64>,
    #[arg(long, default_value_t = 400)]
    pub points: usize,
    /// Skip golden-section refinement of extrema
    #[arg(long)]
    pub no_refine: bool,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Recipe {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Table1,
}

#[derive(Debug, Args, Serialize)]
pub struct ReproArgs {
    #[arg(value_enum)]
    pub recipe: Recipe,
    /// Output directory
    #[arg(long, default_value = "repro")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// Parses an angle: a literal in radians or one of the exact tokens
/// `pi`, `pi/3`, `pi/4`, `pi/5`, `pi/6`.
pub fn parse_theta(s: &str) -> Result<f64, CliError> {
    let t = s.trim();
    let value = match t {
        "pi" => PI,
        "pi/3" => PI / 3.0,
        "pi/4" => PI / 4.0,
        "pi/5" => PI / 5.0,
        "pi/6" => PI / 6.0,
        _ => t
            .parse::<f64>()
            .map_err(|_| CliError::input(format!("theta: cannot parse {s:?}")))?,
    };
    Ok(value)
}

/// Parses `re` or `re,im`.
pub fn parse_z(s: &str) -> Result<Complex64, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| {
        p.parse::<f64>()
            .map_err(|_| CliError::input(format!("z: cannot parse {s:?} (expected re[,im])")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(CliError::input(format!("z: expected re[,im], got {s:?}"))),
    }
}

impl StateArgs {
    /// All `(z, θ, m)` combinations in z-major order.
    pub fn lattice(&self) -> Result<Vec<CatalysisParams>, CliError> {
        let zs = self.z.iter().map(|s| parse_z(s)).collect::<Result<Vec<_>, _>>()?;
        let thetas = self.theta.iter().map(|s| parse_theta(s)).collect::<Result<Vec<_>, _>>()?;
        let mut out = Vec::new();
        for &z in &zs {
            for &theta in &thetas {
                for &m in &self.m {
                    out.push(CatalysisParams::new(z, theta, m)?);
                }
            }
        }
        Ok(out)
    }

    /// Exactly one parameter triple.
    pub fn single(&self) -> Result<CatalysisParams, CliError> {
        let all = self.lattice()?;
        match all.as_slice() {
            [p] => Ok(*p),
            _ => Err(CliError::input(format!(
                "this command takes a single z, theta and m ({} combinations given)",
                all.len()
            ))),
        }
    }
}

impl ChannelArgs {
    pub fn channel(&self) -> Result<ThermalChannel, CliError> {
        Ok(ThermalChannel::new(self.kt, self.nbar)?)
    }
}

/// `half_width,n` centred on `center`, or `q_min,q_max,p_min,p_max,n_q,n_p`.
pub fn parse_grid(s: Option<&str>, center: (f64, f64)) -> Result<GridSpec, CliError> {
    let Some(s) = s else {
        return Ok(GridSpec::around(center, 6.0, 301));
    };
    let nums = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::input(format!("grid: cannot parse {s:?}")))?;
    let count = |x: f64| -> Result<usize, CliError> {
        if x.fract() == 0.0 && x >= 2.0 {
            Ok(x as usize)
        } else {
            Err(CliError::input(format!("grid: resolution {x} must be an integer >= 2")))
        }
    };
    match nums.as_slice() {
        &[half, n] => {
            if !(half > 0.0) {
                return Err(CliError::input("grid: half width must be positive"));
            }
            let n = count(n)?;
            Ok(GridSpec::new(
                center.0 - half,
                center.0 + half,
                center.1 - half,
                center.1 + half,
                n,
                n,
            )?)
        }
        &[q0, q1, p0, p1, nq, np] => Ok(GridSpec::new(q0, q1, p0, p1, count(nq)?, count(np)?)?),
        _ => Err(CliError::input(format!(
            "grid: expected half_width,n or q_min,q_max,p_min,p_max,n_q,n_p, got {s:?}"
        ))),
    }
}

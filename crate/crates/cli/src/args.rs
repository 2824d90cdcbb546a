use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mumsteer_core::{CriterionId, TChoice, MU_MAX};

#[derive(Debug, Parser)]
#[command(
    name = "mumsteer",
    version,
    about = "EPR-steering detection with mutually unbiased measurements and general SIC-POVMs"
)]
pub struct Cli {
    /// Directory for reports when --out is not given (stdout otherwise).
    #[arg(long, env = "MUMSTEER_OUT_DIR", global = true)]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct and validate a measurement set.
    Build(BuildArgs),
    /// Evaluate a criterion on one state.
    Evaluate(EvaluateArgs),
    /// Evaluate a criterion over a 1-D or 2-D family grid and write CSV.
    Sweep(SweepArgs),
    /// Bisect the detection boundary along one family parameter.
    Boundary(BoundaryArgs),
    /// Estimate J from simulated measurement shots.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Mum,
    Gsic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Projective,
    Rank1,
    MaxT,
    Auto,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub d: usize,
    /// Explicit construction parameter.
    #[arg(long, conflicts_with = "target", allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long, value_enum)]
    pub target: Option<Target>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Density-matrix JSON file.
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    pub state: Option<PathBuf>,
    /// werner-derivative (wd), max-steerable (tau), munro, bloch.
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameter as name=value; repeatable.
    #[arg(long = "param", value_parser = parse_assignment, allow_hyphen_values = true)]
    pub params: Vec<(String, f64)>,
}

#[derive(Debug, Args)]
pub struct CriterionArgs {
    /// thm1-mum, thm2-mum, thm3-gsic, thm4-gsic or cor1-h. Defaults to
    /// cor1-h, or thm1-mum for `simulate`.
    #[arg(long)]
    pub criterion: Option<CriterionId>,
    #[arg(long, default_value_t = MU_MAX)]
    pub mu: f64,
    /// ideal, max-t, auto or a number.
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    pub qudit_t: TChoice,
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    pub qubit_t: TChoice,
    /// Use the qubit-side set as constructed instead of its complex conjugate.
    #[arg(long)]
    pub no_conjugate: bool,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub criterion: CriterionArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `name=min:max:steps`; `min`/`max` may be the literal words for the
/// parameter's range ends.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisArg {
    pub name: String,
    pub min: Bound,
    pub max: Bound,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    RangeMin,
    RangeMax,
    Value(f64),
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub family: String,
    /// Fixed family parameter as name=value; repeatable.
    #[arg(long = "param", value_parser = parse_assignment, allow_hyphen_values = true)]
    pub params: Vec<(String, f64)>,
    /// name=min:max:steps; give once or twice.
    #[arg(long = "axis", value_parser = parse_axis, required = true, allow_hyphen_values = true)]
    pub axes: Vec<AxisArg>,
    #[command(flatten)]
    pub criterion: CriterionArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    #[arg(long)]
    pub family: String,
    /// Free parameter to bisect.
    #[arg(long = "free")]
    pub free: String,
    #[arg(long = "param", value_parser = parse_assignment, allow_hyphen_values = true)]
    pub params: Vec<(String, f64)>,
    /// Bracket ends; default to the parameter's range.
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<f64>,
    #[arg(long, default_value_t = mumsteer_core::scan::DEFAULT_BOUNDARY_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub criterion: CriterionArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub criterion: CriterionArgs,
    #[arg(long, default_value_t = 100_000)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Half-width of the confidence band in standard errors.
    #[arg(long, default_value_t = 5.0)]
    pub z: f64,
    /// Also sample the padded settings instead of using their exact value.
    #[arg(long)]
    pub sample_padded: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_number(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("'{s}' is not a finite number"))
}

pub fn parse_assignment(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    Ok((name.trim().to_string(), parse_number(value)?))
}

pub fn parse_axis(s: &str) -> Result<AxisArg, String> {
    let (name, rest) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=min:max:steps, got '{s}'"))?;
    let parts: Vec<&str> = rest.split(':').collect();
    let [lo, hi, steps] = parts.as_slice() else {
        return Err(format!("expected name=min:max:steps, got '{s}'"));
    };
    let bound = |t: &str| match t.trim() {
        "min" => Ok(Bound::RangeMin),
        "max" => Ok(Bound::RangeMax),
        v => parse_number(v).map(Bound::Value),
    };
    let steps = steps
        .trim()
        .parse::<usize>()
        .map_err(|_| format!("bad step count '{steps}'"))?;
    Ok(AxisArg {
        name: name.trim().to_string(),
        min: bound(lo)?,
        max: bound(hi)?,
        steps,
    })
}

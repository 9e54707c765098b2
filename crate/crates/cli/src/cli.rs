use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thincubic::averages::{CubicFamily, DiscSign};
use thincubic::orbits::Space;
use thincubic::{HeightKind, LatticeClass};

/// Exact arithmetic for thin families of binary cubic forms.
#[derive(Debug, Parser)]
#[command(name = "thincubic", version)]
pub struct Cli {
    /// Worker threads; defaults to the number of logical cores.
    #[arg(long, global = true, env = "THINCUBIC_THREADS")]
    pub threads: Option<usize>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Indent the JSON envelope.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Class-group and Selmer average bounds, and the tables built from them.
    Avg(AvgArgs),
    /// Local densities at one prime, optionally against exhaustive enumeration.
    Densities(DensitiesArgs),
    /// Integral Δ-distinguished representatives.
    DeltaDist(DeltaDistArgs),
    /// Maximality of a single form.
    Maximality(MaximalityArgs),
    /// Splitting type of a form mod p, or the splitting counts of a family.
    Splitting(SplittingArgs),
    /// Ternary quadratic forms of fixed determinant in a skewed box.
    CountDetk(CountArgs),
    /// Real volume ratio Π_d.
    Pi(PiArgs),
    /// Forms of a family at bounded height, as JSON lines.
    Sample(SampleArgs),
    /// Oracle-versus-closed-form suites.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Height {
    #[value(alias = "balanced")]
    Bal,
    #[value(alias = "weighted")]
    Wei,
}

impl From<Height> for HeightKind {
    fn from(h: Height) -> Self {
        match h {
            Height::Bal => HeightKind::Balanced,
            Height::Wei => HeightKind::Weighted,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Sign {
    #[value(name = "+", alias = "pos")]
    #[serde(rename = "+")]
    Plus,
    #[value(name = "-", alias = "neg")]
    #[serde(rename = "-")]
    Minus,
}

impl From<Sign> for DiscSign {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Plus => DiscSign::Positive,
            Sign::Minus => DiscSign::Negative,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum SpaceArg {
    #[value(name = "W", alias = "w")]
    W,
    #[value(name = "Wvee", alias = "wvee")]
    Wvee,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::W => Space::W,
            SpaceArg::Wvee => Space::Wvee,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassArg {
    Half,
    Int,
}

impl From<ClassArg> for LatticeClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Half => LatticeClass::HalfIntegral,
            ClassArg::Int => LatticeClass::IntegerMatrix,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Full,
    Mono,
    Unit,
}

impl From<FamilyArg> for CubicFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Full => CubicFamily::Full,
            FamilyArg::Mono => CubicFamily::Monogenised,
            FamilyArg::Unit => CubicFamily::UnitMonogenised,
        }
    }
}

#[derive(Debug, Args, Serialize)]
#[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
pub struct AvgArgs {
    #[arg(long, allow_hyphen_values = true, required = true)]
    pub a: Option<i64>,
    #[arg(long, allow_hyphen_values = true, required = true)]
    pub d: Option<i64>,
    #[arg(long, allow_hyphen_values = true, required = true)]
    pub sign: Option<Sign>,
    #[serde(skip)]
    #[command(subcommand)]
    pub sub: Option<AvgSub>,
}

#[derive(Debug, Subcommand)]
pub enum AvgSub {
    /// The 5×5 grid of class-group bounds for (a, d) ∈ {1,…,5}².
    Table2(Table2Args),
    /// Averages over the full, monogenised and unit-monogenised families.
    Table1(Table1Args),
    /// Selmer bound for the monic family with d ≡ 1 mod 8.
    Sel2(Sel2Args),
}

#[derive(Debug, Args, Serialize)]
pub struct Table2Args {
    #[arg(long, conflicts_with = "json")]
    pub csv: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct Table1Args {
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
}

#[derive(Debug, Args, Serialize)]
pub struct Sel2Args {
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Sign,
    #[arg(long, value_enum, default_value = "wei")]
    pub height: Height,
    /// Attach a Monte Carlo estimate of Π_d.
    #[arg(long)]
    pub estimate: bool,
    #[arg(long, default_value_t = 200_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct DensitiesArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub a: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    /// Also enumerate (b, c) mod p².
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct DeltaDistArgs {
    /// Coefficients a,b,c,d.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_form)]
    pub form: [i64; 4],
    #[arg(long, value_enum, default_value = "W")]
    pub space: SpaceArg,
    /// Confirm by exhaustive search.
    #[arg(long)]
    pub search: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct MaximalityArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_form)]
    pub form: [i64; 4],
    /// Test a single prime.
    #[arg(long)]
    pub p: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SplittingArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_form, conflicts_with_all = ["a", "d"])]
    pub form: Option<[i64; 4]>,
    #[arg(long, allow_hyphen_values = true, requires = "d")]
    pub a: Option<i64>,
    #[arg(long, allow_hyphen_values = true, requires = "a")]
    pub d: Option<i64>,
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args, Serialize)]
#[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
pub struct CountArgs {
    #[arg(long, allow_hyphen_values = true, required = true)]
    pub k: Option<i64>,
    #[arg(long = "Y", alias = "y", required = true)]
    pub y: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub s1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub s2: f64,
    #[arg(long, value_enum, default_value = "half")]
    pub class: ClassArg,
    /// Recount with the six-loop brute force.
    #[arg(long)]
    pub oracle: bool,
    #[serde(skip)]
    #[command(subcommand)]
    pub sub: Option<CountSub>,
}

#[derive(Debug, Subcommand)]
pub enum CountSub {
    /// Least-squares growth exponent over several dilations.
    Fit(FitArgs),
    /// Counts under torus skews relative to the unskewed box.
    Skew(SkewArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct FitArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub k: i64,
    #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
    pub ys: Vec<f64>,
    #[arg(long, value_enum, default_value = "half")]
    pub class: ClassArg,
}

#[derive(Debug, Args, Serialize)]
pub struct SkewArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub k: i64,
    #[arg(long = "Y", alias = "y")]
    pub y: f64,
    /// Skews as s1:s2 pairs.
    #[arg(long, value_delimiter = ',', value_parser = parse_skew, default_value = "1:1,2:1,4:1")]
    pub s: Vec<(f64, f64)>,
    #[arg(long, value_enum, default_value = "half")]
    pub class: ClassArg,
}

#[derive(Debug, Args, Serialize)]
pub struct PiArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long, value_enum, default_value = "wei")]
    pub height: Height,
    #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
    pub ladder: Vec<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long = "X", alias = "x")]
    pub x: f64,
    #[arg(long, value_enum, default_value = "bal")]
    pub height: Height,
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Sign,
    /// Only print the stats trailer.
    #[arg(long)]
    pub stats_only: bool,
    /// Draw this many random (b, c) instead of scanning the whole box.
    #[arg(long)]
    pub draws: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Flag forms with an integral Δ-distinguished representative.
    #[arg(long)]
    pub delta: bool,
    /// Fix the residue class x³ + x²y + y³ mod 8 (requires a = 1).
    #[arg(long)]
    pub selmer: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SelftestArgs {
    /// Run a reduced set of checks.
    #[arg(long)]
    pub quick: bool,
}

pub fn parse_form(s: &str) -> Result<[i64; 4], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("expected four comma-separated integers, got {s:?}"));
    }
    let mut out = [0i64; 4];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|e| format!("{p:?}: {e}"))?;
    }
    Ok(out)
}

pub fn parse_skew(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected s1:s2, got {s:?}"))?;
    let p = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

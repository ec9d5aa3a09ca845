use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exponent in `[1, inf]`; accepts `inf`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Real(pub f64);

impl FromStr for Real {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.trim()
            .parse::<f64>()
            .map(Real)
            .map_err(|_| format!("expected a number or inf, got {s:?}"))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Real(v)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "treemax", version, about = "Fractional maximal operators on homogeneous trees")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct Global {
    /// Branching number: every vertex but the root has k children.
    #[arg(long, global = true, default_value_t = 2)]
    pub k: u32,
    /// Decimal digits of working precision.
    #[arg(long, global = true)]
    pub precision_digits: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON file of default flag values, keyed by flag name.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Write reports as JSON instead of CSV.
    #[arg(long, global = true)]
    pub json: bool,
    /// Report divergent quantities as results instead of failing.
    #[arg(long, global = true)]
    pub expect_divergence: bool,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lorentz, weak or Lebesgue norm of a function file.
    Norm(NormArgs),
    /// The fractional maximal function of a function file.
    Maximal(MaximalArgs),
    /// The boundedness map as an SVG figure.
    Region(RegionArgs),
    /// Run one of the named experiments.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug, Serialize, Deserialize)]
#[group(id = "source", required = true, multiple = false, args = ["radial", "finite"])]
pub struct Source {
    /// Radial table, CSV with header `norm,value`.
    #[arg(long)]
    pub radial: Option<PathBuf>,
    /// Finitely supported function, CSV with header `path,value`.
    #[arg(long)]
    pub finite: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct NormArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: Source,
    #[arg(long)]
    pub p: Real,
    /// Second Lorentz exponent; defaults to p, the Lebesgue norm.
    #[arg(long)]
    pub s: Option<Real>,
    /// The sequence-space surrogate ||f(n) k^(n/p)||_(l^s) of a radial table.
    #[arg(long)]
    pub surrogate: bool,
    /// log_k of the per-step ratio of a geometric tail after the table.
    #[arg(long, allow_hyphen_values = true)]
    pub tail_log_ratio: Option<f64>,
    /// Polynomial degree of that tail.
    #[arg(long, default_value_t = 0.0)]
    pub tail_degree: f64,
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct MaximalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: Source,
    #[arg(long)]
    pub gamma: f64,
    /// Radial input: largest norm to report.
    #[arg(long)]
    pub m_max: Option<usize>,
    /// Only radii up to this value enter the supremum.
    #[arg(long)]
    pub radius_cap: Option<usize>,
    /// Finite input: report on B_radius(o) with interior-safe radii.
    #[arg(long)]
    pub radius: Option<usize>,
    /// Finite input: untruncated supremum at each reported vertex.
    #[arg(long)]
    pub exact: bool,
    /// Finite input: the uncentered operator.
    #[arg(long)]
    pub uncentered: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Strong,
    Restricted,
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct RegionArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.25, 0.5, 0.6, 0.75, 1.0, 1.5])]
    pub gamma: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    #[arg(long, value_enum, default_value_t = Kind::Strong)]
    pub kind: Kind,
    /// Companion CSV; defaults to the output path with a .csv extension.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentName {
    Growth,
    DeltaDivergence,
    Veca,
    RadialBounded,
    RwtProbe,
    Zclass,
    RegionFigure,
    Invariants,
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub name: ExperimentName,
    #[arg(long, value_delimiter = ',')]
    pub gamma: Vec<f64>,
    #[arg(long)]
    pub p: Option<Real>,
    #[arg(long)]
    pub q: Option<Real>,
    #[arg(long)]
    pub s: Option<Real>,
    #[arg(long)]
    pub t: Option<Real>,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Truncation N of the delta-divergence and veca experiments.
    #[arg(long = "n")]
    pub big_n: Option<usize>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub family_size: Option<usize>,
    #[arg(long)]
    pub count: Option<usize>,
    /// Truncation radius R of the invariant suite.
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long)]
    pub support: Option<usize>,
    #[arg(long)]
    pub direct_n: Option<usize>,
    #[arg(long)]
    pub direct_m: Option<usize>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

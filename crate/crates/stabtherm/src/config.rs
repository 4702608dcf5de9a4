//! Run configuration: a TOML file and command-line flags share one key set,
//! and flags override file values.
//!
//! ```toml
//! command = "thermo"
//! model = "haah"
//! L = 3
//! a = 1.0
//! b = 1.0
//! beta = "0.1:2.0:50"
//! spacing = "linear"
//! out = "haah.csv"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, ValueEnum};
use serde::Deserialize;
use stabtherm_core::enumerate::DEFAULT_CAP;
use stabtherm_core::models::ModelKind;
use stabtherm_core::Side;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Ground-state degeneracy and generator ranks.
    Gsd,
    /// Constraint-kernel weight enumerator of one side.
    Enumerate,
    /// Partition function and densities over a beta grid.
    Thermo,
    /// One of the duality checks selected by `--check`.
    Duality,
    /// Pipeline partition function against a brute-force oracle.
    OracleCompare,
    /// Logical-operator verification.
    Logicals,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Linear,
    Log,
}

/// What the densities in `thermo` output are divided by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `L^D` lattice sites.
    Site,
    /// Number of qubits (spins for the Ising model).
    Qubit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeMode {
    /// Central differences around each point with a step relative to beta.
    Stencil,
    /// Differences between neighbouring grid points.
    Grid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SideArg {
    A,
    B,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::A => Side::A,
            SideArg::B => Side::B,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// 4D toric code constraints against 4D Ising broken-bond classes.
    #[value(name = "4dtc-ising")]
    #[serde(rename = "4dtc-ising")]
    FourDtcIsing,
    /// 3-cycles against contractible 3-cycles on the 4-torus.
    Homology,
    /// Pointwise and total bounds between those two distributions.
    Bound,
    /// A-side against B-side enumerator of the 4D toric code.
    AbIdentity,
    /// 3D toric code star constraints against a periodic chain.
    #[value(name = "3dtc-stars")]
    #[serde(rename = "3dtc-stars")]
    ThreeDtcStars,
    /// 3D toric code plaquette constraints against 3D Ising classes.
    #[value(name = "3dtc-plaquettes")]
    #[serde(rename = "3dtc-plaquettes")]
    ThreeDtcPlaquettes,
    /// Both Haah constraint enumerators against a periodic chain.
    HaahChains,
    /// Bond algebra of the open 2D toric code with a sigma-x bath.
    BathVx,
    /// Bond algebra of the open 2D toric code with a sigma-y bath.
    BathVy,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::FourDtcIsing => "4dtc-ising",
            Check::Homology => "homology",
            Check::Bound => "bound",
            Check::AbIdentity => "ab-identity",
            Check::ThreeDtcStars => "3dtc-stars",
            Check::ThreeDtcPlaquettes => "3dtc-plaquettes",
            Check::HaahChains => "haah-chains",
            Check::BathVx => "bath-vx",
            Check::BathVy => "bath-vy",
        }
    }
}

/// `min:max:count`, or a single value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl BetaGrid {
    pub fn values(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Linear => stabtherm_core::thermo::linear_grid(self.min, self.max, self.count),
            Spacing::Log => stabtherm_core::thermo::log_grid(self.min, self.max, self.count),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl FromStr for BetaSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |t: &str| t.parse::<f64>().map_err(|_| format!("{t:?} is not a number"));
        match parts.as_slice() {
            [v] => {
                let v = num(v)?;
                Ok(BetaSpec { min: v, max: v, count: 1 })
            }
            [lo, hi, n] => Ok(BetaSpec {
                min: num(lo)?,
                max: num(hi)?,
                count: n.parse().map_err(|_| format!("{n:?} is not a point count"))?,
            }),
            _ => Err(format!("expected MIN:MAX:COUNT or a single value, got {s:?}")),
        }
    }
}

impl fmt::Display for BetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.count)
    }
}

impl<'de> Deserialize<'de> for BetaSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Every key of the file format, all optional. Command-line flags parse into
/// the same structure so the two can be layered.
#[derive(Clone, Debug, Default, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Only read from files; on the command line it is the positional argument.
    #[arg(skip)]
    pub command: Option<Command>,
    /// Model family.
    #[arg(long, value_parser = parse_model)]
    #[serde(default, deserialize_with = "de_model")]
    pub model: Option<ModelKind>,
    /// Linear lattice size.
    #[arg(long = "L", short = 'L')]
    #[serde(rename = "L", alias = "l")]
    pub l: Option<usize>,
    /// Lattice dimension of the classical Ising model.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Coupling of the X-type terms (or the Ising coupling J).
    #[arg(long)]
    pub a: Option<f64>,
    /// Coupling of the Z-type terms.
    #[arg(long)]
    pub b: Option<f64>,
    /// Inverse temperatures as MIN:MAX:COUNT or a single value.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<BetaSpec>,
    #[arg(long, value_enum)]
    pub spacing: Option<Spacing>,
    /// CSV output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest kernel dimension walked exhaustively.
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long, value_enum)]
    pub check: Option<Check>,
    #[arg(long, value_enum)]
    pub side: Option<SideArg>,
    /// Track only weights up to this value (meet-in-the-middle enumeration).
    #[arg(long)]
    pub max_weight: Option<usize>,
    #[arg(long, value_enum)]
    pub normalization: Option<Normalization>,
    #[arg(long, value_enum)]
    pub derivatives: Option<DerivativeMode>,
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    s.parse().map_err(|e: stabtherm_core::Error| e.to_string())
}

fn de_model<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<ModelKind>, D::Error> {
    let s = String::deserialize(d)?;
    parse_model(&s).map(Some).map_err(serde::de::Error::custom)
}

impl Settings {
    /// Values present in `over` replace those in `self`.
    pub fn overlay(self, over: Settings) -> Settings {
        Settings {
            command: over.command.or(self.command),
            model: over.model.or(self.model),
            l: over.l.or(self.l),
            dim: over.dim.or(self.dim),
            a: over.a.or(self.a),
            b: over.b.or(self.b),
            beta: over.beta.or(self.beta),
            spacing: over.spacing.or(self.spacing),
            out: over.out.or(self.out),
            cap: over.cap.or(self.cap),
            check: over.check.or(self.check),
            side: over.side.or(self.side),
            max_weight: over.max_weight.or(self.max_weight),
            normalization: over.normalization.or(self.normalization),
            derivatives: over.derivatives.or(self.derivatives),
        }
    }
}

/// Contents of a configuration file.
pub type FileConfig = Settings;

impl Settings {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::input(format!("configuration error: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::input(format!("{}: {}", path.display(), e.message)))
    }
}

#[derive(Debug, Parser)]
#[command(name = "stabtherm", version, about = "Exact thermodynamics and duality checks for CSS stabilizer Hamiltonians")]
pub struct Cli {
    /// What to compute.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// TOML file supplying any of the settings below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub settings: Settings,
}

impl Cli {
    /// Layers the flags over the optional configuration file.
    pub fn resolve(self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(p) => Settings::load(p)?,
            None => Settings::default(),
        };
        let mut flags = self.settings;
        flags.command = self.command;
        let merged = file.overlay(flags);
        let command = merged
            .command
            .ok_or_else(|| CliError::input("no command given (gsd, enumerate, thermo, duality, oracle-compare, logicals)"))?;
        RunConfig::new(command, merged)
    }
}

/// A validated run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub model: ModelKind,
    pub l: usize,
    pub dim: usize,
    pub coupling_a: f64,
    pub coupling_b: f64,
    pub beta: BetaGrid,
    pub out: Option<PathBuf>,
    pub cap: usize,
    pub check: Option<Check>,
    pub side: Side,
    pub max_weight: Option<usize>,
    pub normalization: Normalization,
    pub derivatives: DerivativeMode,
}

impl RunConfig {
    /// Fills defaults and checks ranges.
    pub fn new(command: Command, s: Settings) -> Result<Self, CliError> {
        let model = s.model.unwrap_or(ModelKind::Toric2d);
        let l = s.l.unwrap_or(if command == Command::Duality { 2 } else { 3 });
        if l < 2 {
            return Err(CliError::input(format!("L must be at least 2, got {l}")));
        }
        let dim = s.dim.unwrap_or(1);
        if !(1..=8).contains(&dim) {
            return Err(CliError::input(format!("dim must be between 1 and 8, got {dim}")));
        }
        let coupling_a = s.a.unwrap_or(1.0);
        let coupling_b = s.b.unwrap_or(1.0);
        for (key, v) in [("a", coupling_a), ("b", coupling_b)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::input(format!("{key} must be positive and finite, got {v}")));
            }
        }
        let spec = s.beta.unwrap_or(BetaSpec {
            min: 0.1,
            max: 2.0,
            count: 50,
        });
        if !(spec.min > 0.0 && spec.min.is_finite() && spec.max.is_finite()) {
            return Err(CliError::input(format!("beta minimum must be positive, got {spec}")));
        }
        if spec.count == 0 {
            return Err(CliError::input("beta count must be at least 1"));
        }
        if spec.count > 1 && spec.max.partial_cmp(&spec.min) != Some(std::cmp::Ordering::Greater) {
            return Err(CliError::input(format!("beta maximum must exceed the minimum, got {spec}")));
        }
        let cap = s.cap.unwrap_or(DEFAULT_CAP);
        if cap > 62 {
            return Err(CliError::input(format!("cap must be at most 62, got {cap}")));
        }
        if command == Command::Duality && s.check.is_none() {
            return Err(CliError::input("duality needs --check"));
        }
        Ok(RunConfig {
            command,
            model,
            l,
            dim,
            coupling_a,
            coupling_b,
            beta: BetaGrid {
                min: spec.min,
                max: spec.max,
                count: spec.count,
                spacing: s.spacing.unwrap_or(Spacing::Linear),
            },
            out: s.out,
            cap,
            check: s.check,
            side: s.side.map_or(Side::A, Side::from),
            max_weight: s.max_weight,
            normalization: s.normalization.unwrap_or(Normalization::Site),
            derivatives: s.derivatives.unwrap_or(DerivativeMode::Stencil),
        })
    }
}

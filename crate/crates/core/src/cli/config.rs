//! Experiment configuration: command-line flags merged over a flat
//! `key=value` file whose keys are the flag names.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};

use crate::halfcircle::CommutatorOrder;
use crate::linalg::BasisMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    Halfcircle,
    Wh,
    Circle,
    Canonical,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::Halfcircle => "halfcircle",
            Construction::Wh => "wh",
            Construction::Circle => "circle",
            Construction::Canonical => "canonical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    OneSided,
    TwoSided,
    Cyclic,
}

impl From<Mode> for BasisMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::OneSided => BasisMode::OneSided,
            Mode::TwoSided => BasisMode::TwoSided,
            Mode::Cyclic => BasisMode::Cyclic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Order {
    AngleFirst,
    NumberFirst,
}

/// Flags shared by every command. Each may also be given in the `--config`
/// file as `name = value`; flags win over the file.
#[derive(Debug, Clone, Default, Args)]
pub struct RawConfig {
    /// Flat key=value file; keys are the long flag names
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Angle operator family [default: halfcircle]
    #[arg(long, value_enum)]
    pub construction: Option<Construction>,

    /// Truncation dimension D [default: 64]
    #[arg(long)]
    pub dim: Option<usize>,

    /// Basis labelling for halfcircle and canonical [default: cyclic]
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,

    /// Thermal weight parameter t in [0, 1) for wh [default: 0]
    #[arg(long)]
    pub t: Option<f64>,

    /// Gaussian width sigma > 0 for circle [default: 1]
    #[arg(long)]
    pub sigma: Option<f64>,

    /// Radial quadrature nodes for wh quantization [default: 120]
    #[arg(long = "n-j")]
    pub n_j: Option<usize>,

    /// Angular quadrature nodes for wh quantization [default: 16]
    #[arg(long = "n-gamma")]
    pub n_gamma: Option<usize>,

    /// Action values for lower-symbol, comma separated [default: 10]
    #[arg(long = "J", value_delimiter = ',')]
    pub j: Option<Vec<f64>>,

    /// Angles per action value for lower-symbol [default: 64]
    #[arg(long = "gamma-grid")]
    pub gamma_grid: Option<usize>,

    /// Dimensions swept by commutator, comma separated [default: 64,128]
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,

    /// Window sizes for commutator, comma separated [default: 8,16]
    #[arg(long, value_delimiter = ',')]
    pub windows: Option<Vec<usize>>,

    /// Fourier cutoff Q for canonical [default: D/2 - 1]
    #[arg(long = "q-cutoff")]
    pub q_cutoff: Option<usize>,

    /// Operand order of the halfcircle commutator [default: angle-first]
    #[arg(long, value_enum)]
    pub order: Option<Order>,

    /// Output file [default: standard output]
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// csv (check: one line per invariant) or json [default: csv]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// A fully resolved configuration with every field in range.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub construction: Construction,
    pub dim: usize,
    pub mode: BasisMode,
    pub t: f64,
    pub sigma: f64,
    pub n_j: usize,
    pub n_gamma: usize,
    pub j_values: Vec<f64>,
    pub gamma_grid: usize,
    pub dims: Vec<usize>,
    pub windows: Vec<usize>,
    pub q_cutoff: Option<usize>,
    pub order: CommutatorOrder,
    pub output: Option<PathBuf>,
    pub format: Format,
}

pub const MAX_DIM: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

const KEYS: [&str; 15] = [
    "construction",
    "dim",
    "mode",
    "t",
    "sigma",
    "n-j",
    "n-gamma",
    "J",
    "gamma-grid",
    "dims",
    "windows",
    "q-cutoff",
    "order",
    "output",
    "format",
];

/// Reads `key = value` lines; `#` starts a comment. Underscores in keys are
/// accepted for hyphens.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("config line {}: expected key = value", lineno + 1)))?;
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError(format!("unknown config key `{}`", k.trim())));
        }
        if map.insert(key, v.trim().to_string()).is_some() {
            return Err(ConfigError(format!("config key `{}` given twice", k.trim())));
        }
    }
    Ok(map)
}

fn from_file<T: FromStr>(file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, ConfigError> {
    file.get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| ConfigError(format!("config key `{key}`: cannot parse `{v}`")))
        })
        .transpose()
}

fn enum_from_file<T: ValueEnum>(file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, ConfigError> {
    file.get(key)
        .map(|v| T::from_str(v, true).map_err(|_| ConfigError(format!("config key `{key}`: unknown value `{v}`"))))
        .transpose()
}

fn list_from_file<T: FromStr>(file: &BTreeMap<String, String>, key: &str) -> Result<Option<Vec<T>>, ConfigError> {
    file.get(key)
        .map(|v| {
            v.split(',')
                .map(|x| x.trim().parse::<T>())
                .collect::<Result<Vec<T>, _>>()
                .map_err(|_| ConfigError(format!("config key `{key}`: cannot parse list `{v}`")))
        })
        .transpose()
}

fn bad(key: &str, why: impl fmt::Display) -> ConfigError {
    ConfigError(format!("`{key}` {why}"))
}

impl RawConfig {
    /// Merges the flags over the config file, fills defaults and checks
    /// ranges. Errors name the offending key.
    pub fn resolve(&self) -> Result<ExperimentConfig, ConfigError> {
        let file = match &self.config {
            Some(p) => read_config(p)?,
            None => BTreeMap::new(),
        };
        let construction = pick(
            self.construction,
            enum_from_file(&file, "construction")?,
            Construction::Halfcircle,
        );
        let dim = pick(self.dim, from_file(&file, "dim")?, 64);
        let mode: Mode = pick(self.mode, enum_from_file(&file, "mode")?, Mode::Cyclic);
        let t = pick(self.t, from_file(&file, "t")?, 0.0);
        let sigma = pick(self.sigma, from_file(&file, "sigma")?, 1.0);
        let n_j = pick(self.n_j, from_file(&file, "n-j")?, 120);
        let n_gamma = pick(self.n_gamma, from_file(&file, "n-gamma")?, 16);
        let j_values = pick(self.j.clone(), list_from_file(&file, "J")?, vec![10.0]);
        let gamma_grid = pick(self.gamma_grid, from_file(&file, "gamma-grid")?, 64);
        let dims = pick(self.dims.clone(), list_from_file(&file, "dims")?, vec![64, 128]);
        let windows = pick(self.windows.clone(), list_from_file(&file, "windows")?, vec![8, 16]);
        let q_cutoff = self.q_cutoff.or(from_file(&file, "q-cutoff")?);
        let order = pick(self.order, enum_from_file(&file, "order")?, Order::AngleFirst);
        let output = self.output.clone().or(from_file::<PathBuf>(&file, "output")?);
        let format = pick(self.format, enum_from_file(&file, "format")?, Format::Csv);

        if !(4..=MAX_DIM).contains(&dim) {
            return Err(bad("dim", format!("= {dim} must lie in 4..={MAX_DIM}")));
        }
        if !(0.0..1.0).contains(&t) {
            return Err(bad("t", format!("= {t} must lie in [0, 1)")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(bad("sigma", format!("= {sigma} must be positive")));
        }
        if n_j < 8 {
            return Err(bad("n-j", format!("= {n_j} must be at least 8")));
        }
        if n_gamma < 8 {
            return Err(bad("n-gamma", format!("= {n_gamma} must be at least 8")));
        }
        if j_values.is_empty() || j_values.iter().any(|j| !j.is_finite()) {
            return Err(bad("J", "needs finite values"));
        }
        if construction == Construction::Wh && j_values.iter().any(|&j| j < 0.0) {
            return Err(bad("J", "must be non-negative for wh"));
        }
        if gamma_grid == 0 {
            return Err(bad("gamma-grid", "must be positive"));
        }
        if dims.is_empty() || dims.iter().any(|d| !(4..=MAX_DIM).contains(d)) {
            return Err(bad("dims", format!("entries must lie in 4..={MAX_DIM}")));
        }
        if windows.is_empty() {
            return Err(bad("windows", "needs at least one entry"));
        }
        if let Some(q) = q_cutoff {
            if q == 0 || 2 * q >= dim {
                return Err(bad("q-cutoff", format!("= {q} must satisfy 0 < 2Q < D")));
            }
        }
        Ok(ExperimentConfig {
            construction,
            dim,
            mode: mode.into(),
            t,
            sigma,
            n_j,
            n_gamma,
            j_values,
            gamma_grid,
            dims,
            windows,
            q_cutoff,
            order: match order {
                Order::AngleFirst => CommutatorOrder::AngleFirst,
                Order::NumberFirst => CommutatorOrder::NumberFirst,
            },
            output,
            format,
        })
    }
}

fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config `{}`: {e}", path.display())))?;
    parse_config_file(&text)
}

impl ExperimentConfig {
    /// `Q = D/2 − 1` unless set.
    pub fn q_cutoff_or_default(&self) -> usize {
        self.q_cutoff.unwrap_or(self.dim / 2 - 1)
    }

    pub fn order_name(&self) -> &'static str {
        match self.order {
            CommutatorOrder::AngleFirst => "angle-first",
            CommutatorOrder::NumberFirst => "number-first",
        }
    }
}

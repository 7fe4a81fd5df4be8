//! JSON run configuration.
//!
//! ```json
//! {
//!   "dimensionless": {"alpha": 0.01, "beta": 1.15, "gammaE1": 10,
//!                     "gammaS1": 10, "eta": 1, "mu": 1},
//!   "solver": {"n": 201, "dt": 0.001},
//!   "output": {"csv": "out.csv", "svg": "out.svg"}
//! }
//! ```
//!
//! A `"dimensional"` block (keys `C_g_star`, `C_ox_star`, `D_g`, `D_ox`,
//! `D_a`, `K_g`, `K_ox`, `V_max`, `l`) may replace `"dimensionless"`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use super::csv::format_sig;
use crate::error::Error;
use crate::model::{nondimensionalize, DimensionalParams, DimensionlessParams};
use crate::solver::{Grid, SolverConfig};

pub const DEFAULT_GRID: usize = 201;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema: {0}")]
    Schema(String),
    /// A value violates its documented range; the message names the field.
    #[error("{0}")]
    Field(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl From<ConfigError> for Error {
    fn from(e: ConfigError) -> Self {
        Error::Config(e.to_string())
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    n: Option<usize>,
    dt: Option<f64>,
    #[serde(rename = "newtonTol")]
    newton_tol: Option<f64>,
    #[serde(rename = "newtonMaxIters")]
    newton_max_iters: Option<usize>,
    #[serde(rename = "steadyTol")]
    steady_tol: Option<f64>,
    #[serde(rename = "dampingMin")]
    damping_min: Option<f64>,
}

/// Output file locations; command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    dimensionless: Option<DimensionlessParams>,
    dimensional: Option<DimensionalParams>,
    #[serde(default)]
    solver: RawSolver,
    #[serde(default)]
    output: OutputPaths,
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: DimensionlessParams,
    /// The physical block, when the parameters were derived from one.
    pub dimensional: Option<DimensionalParams>,
    pub grid_n: usize,
    pub solver: SolverConfig,
    pub output: OutputPaths,
}

impl RunConfig {
    pub fn from_params(params: DimensionlessParams) -> Self {
        Self {
            params,
            dimensional: None,
            grid_n: DEFAULT_GRID,
            solver: SolverConfig::default(),
            output: OutputPaths::default(),
        }
    }

    pub fn grid(&self) -> Result<Grid, Error> {
        Grid::new(self.grid_n)
    }

    /// Provenance line embedded in every artifact.
    pub fn metadata(&self) -> String {
        let s = &self.solver;
        let mut line = format!(
            "{} n={} dt={} newtonTol={} newtonMaxIters={} steadyTol={} dampingMin={}",
            self.params,
            self.grid_n,
            format_sig(s.dt, 6),
            format_sig(s.newton_tol, 6),
            s.newton_max_iters,
            format_sig(s.steady_tol, 6),
            format_sig(s.damping_min, 6)
        );
        if self.dimensional.is_some() {
            line.push_str(" source=dimensional");
        }
        line
    }
}

fn field_error(e: Error) -> ConfigError {
    match e {
        Error::Domain {
            field, requirement, ..
        } => ConfigError::Field(format!("{field} {requirement}")),
        other => ConfigError::Field(other.to_string()),
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| {
        use serde_json::error::Category;
        match e.classify() {
            Category::Syntax | Category::Eof | Category::Io => ConfigError::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            },
            Category::Data => ConfigError::Schema(e.to_string()),
        }
    })?;

    let (params, dimensional) = match (raw.dimensionless, raw.dimensional) {
        (Some(p), None) => {
            p.validate().map_err(field_error)?;
            (p, None)
        }
        (None, Some(d)) => (nondimensionalize(&d).map_err(field_error)?, Some(d)),
        (Some(_), Some(_)) => {
            return Err(ConfigError::Schema(
                "exactly one of `dimensionless` and `dimensional` may be given, found both".into(),
            ))
        }
        (None, None) => {
            return Err(ConfigError::Schema(
                "one of `dimensionless` or `dimensional` is required".into(),
            ))
        }
    };

    let d = SolverConfig::default();
    let s = raw.solver;
    let solver = SolverConfig {
        dt: s.dt.unwrap_or(d.dt),
        newton_tol: s.newton_tol.unwrap_or(d.newton_tol),
        newton_max_iters: s.newton_max_iters.unwrap_or(d.newton_max_iters),
        steady_tol: s.steady_tol.unwrap_or(d.steady_tol),
        damping_min: s.damping_min.unwrap_or(d.damping_min),
    };
    solver.validate().map_err(field_error)?;
    let grid_n = s.n.unwrap_or(DEFAULT_GRID);
    Grid::new(grid_n)
        .map_err(|_| ConfigError::Field(format!("n must be at least 3 (got {grid_n})")))?;

    Ok(RunConfig {
        params,
        dimensional,
        grid_n,
        solver,
        output: raw.output,
    })
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

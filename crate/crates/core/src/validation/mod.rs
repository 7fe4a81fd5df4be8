//! Reproduction of the comparison tables, closed-form profile sweeps, local
//! sensitivity shares and the steady-state invariant audit.

mod audit;
mod sensitivity;
mod sweep;
mod tables;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;

pub use audit::{check_steady_invariants, InvariantAudit};
pub use sensitivity::{
    sensitivity_analysis, Functional, SensitivityEntry, SensitivityReport, SensitivityStatus,
};
pub use sweep::{profile_sweep, ProfileSeries, SweepParam};
pub use tables::{
    relative_deviation, reproduce_table, table_scenarios, ErrorReport, ErrorRow, Scenario, TableId,
    TABLE_POSITIONS,
};

/// One of the three transported species.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Species {
    /// Glucose.
    #[serde(rename = "u")]
    U,
    /// Oxygen.
    #[serde(rename = "v")]
    V,
    /// Gluconic acid.
    #[serde(rename = "w")]
    W,
}

impl Species {
    pub const ALL: [Species; 3] = [Species::U, Species::V, Species::W];

    pub fn name(self) -> &'static str {
        match self {
            Species::U => "u",
            Species::V => "v",
            Species::W => "w",
        }
    }

    pub(crate) fn pick(self, (u, v, w): (f64, f64, f64)) -> f64 {
        match self {
            Species::U => u,
            Species::V => v,
            Species::W => w,
        }
    }

    pub(crate) fn column(self, field: &crate::solver::ConcentrationField) -> &[f64] {
        match self {
            Species::U => &field.u,
            Species::V => &field.v,
            Species::W => &field.w,
        }
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Species {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "u" => Ok(Species::U),
            "v" => Ok(Species::V),
            "w" => Ok(Species::W),
            _ => Err(Error::Contract(format!(
                "unknown species `{s}` (valid: u, v, w)"
            ))),
        }
    }
}

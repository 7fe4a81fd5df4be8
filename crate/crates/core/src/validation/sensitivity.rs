//! Normalized local sensitivities.
//!
//! For each parameter `q` the normalized coefficient is
//! `S_q = |(f(q(1+δ)) − f(q(1−δ))) / (2δ f(q))|`, where `f` is a scalar
//! functional of the steady solution. Shares are `100 S_q / Σ S`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::Species;
use crate::error::{Error, Result};
use crate::model::{DimensionlessParams, Param};
use crate::solver::{solve_steady, Grid, SolverConfig};

/// Scalar summary of a steady profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Functional {
    /// Value at the symmetry plane `X = 0`.
    #[serde(rename = "center")]
    Center,
    /// Trapezoidal mean over `[0, 1]`.
    #[serde(rename = "mean")]
    Mean,
}

impl Functional {
    pub fn name(self) -> &'static str {
        match self {
            Functional::Center => "center",
            Functional::Mean => "mean",
        }
    }

    fn evaluate(self, values: &[f64]) -> f64 {
        match self {
            Functional::Center => values[0],
            Functional::Mean => {
                let n = values.len();
                let inner: f64 = values[1..n - 1].iter().sum();
                (inner + 0.5 * (values[0] + values[n - 1])) / (n - 1) as f64
            }
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Functional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "center" => Ok(Functional::Center),
            "mean" => Ok(Functional::Mean),
            _ => Err(Error::Contract(format!(
                "unknown functional `{s}` (valid: center, mean)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SensitivityStatus {
    Computed,
    /// The target cannot depend on this parameter (or it is zero, so a
    /// relative perturbation is undefined).
    NotApplicable,
    /// The solver failed at a perturbed point.
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityEntry {
    pub param: Param,
    pub coefficient: Option<f64>,
    pub share_percent: f64,
    pub status: SensitivityStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub target: Species,
    pub params: DimensionlessParams,
    pub delta: f64,
    pub functional: Functional,
    /// Functional at the unperturbed point.
    pub baseline: f64,
    pub entries: Vec<SensitivityEntry>,
}

impl SensitivityReport {
    pub fn share(&self, param: Param) -> f64 {
        self.entries
            .iter()
            .find(|e| e.param == param)
            .map_or(0.0, |e| e.share_percent)
    }

    pub fn total_share(&self) -> f64 {
        self.entries.iter().map(|e| e.share_percent).sum()
    }
}

/// Glucose and oxygen decouple from the acid equation, so `μ` cannot move
/// them.
fn structurally_relevant(target: Species, param: Param) -> bool {
    !(param == Param::Mu && target != Species::W)
}

fn steady_functional(
    target: Species,
    functional: Functional,
    p: &DimensionlessParams,
    grid: &Grid,
    cfg: &SolverConfig,
) -> Result<f64> {
    let s = solve_steady(p, grid, cfg)?;
    Ok(functional.evaluate(target.column(&s.field)))
}

pub fn sensitivity_analysis(
    target: Species,
    p: &DimensionlessParams,
    delta: f64,
    functional: Functional,
    grid: &Grid,
    cfg: &SolverConfig,
) -> Result<SensitivityReport> {
    if !(delta > 0.0 && delta <= 0.1) {
        return Err(Error::domain("delta", "must lie in (0, 0.1]", delta));
    }
    p.validate()?;
    let baseline = steady_functional(target, functional, p, grid, cfg)?;
    if baseline == 0.0 {
        return Err(Error::Contract(format!(
            "{target} {functional} is zero at the base point; relative sensitivity undefined"
        )));
    }

    let mut entries: Vec<SensitivityEntry> = Param::ALL
        .par_iter()
        .map(|&param| {
            let q = p.get(param);
            if !structurally_relevant(target, param) || q == 0.0 {
                return SensitivityEntry {
                    param,
                    coefficient: None,
                    share_percent: 0.0,
                    status: SensitivityStatus::NotApplicable,
                };
            }
            let eval = |scale: f64| -> Result<f64> {
                let perturbed = p.with(param, q * scale)?;
                steady_functional(target, functional, &perturbed, grid, cfg)
            };
            match eval(1.0 + delta).and_then(|plus| Ok((plus, eval(1.0 - delta)?))) {
                Ok((plus, minus)) => SensitivityEntry {
                    param,
                    coefficient: Some(((plus - minus) / (2.0 * delta * baseline)).abs()),
                    share_percent: 0.0,
                    status: SensitivityStatus::Computed,
                },
                Err(e) => SensitivityEntry {
                    param,
                    coefficient: None,
                    share_percent: 0.0,
                    status: SensitivityStatus::Failed(e.to_string()),
                },
            }
        })
        .collect();

    let total: f64 = entries.iter().filter_map(|e| e.coefficient).sum();
    if total > 0.0 {
        for e in &mut entries {
            if let Some(c) = e.coefficient {
                e.share_percent = 100.0 * c / total;
            }
        }
    }
    Ok(SensitivityReport {
        target,
        params: *p,
        delta,
        functional,
        baseline,
        entries,
    })
}

/// `f` for a closed-form field; used by tests as an independent route.
#[cfg(test)]
pub(crate) fn closed_form_functional(
    target: Species,
    functional: Functional,
    p: &DimensionlessParams,
    grid: &Grid,
) -> f64 {
    let f = crate::solver::ConcentrationField::closed_form(grid, p).unwrap();
    functional.evaluate(target.column(&f))
}

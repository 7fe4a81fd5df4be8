use rayon::prelude::*;
use serde::Serialize;

use super::audit::{check_steady_invariants, InvariantAudit};
use super::Species;
use crate::closed_form::{
    steady_u_with, steady_v_with, steady_w_with, ClosedFormCoefficients, SteadyForm,
};
use crate::error::{Error, Result};
use crate::model::DimensionlessParams;
use crate::solver::{solve_steady, Grid, SolverConfig};

/// Positions at which the comparison tables are tabulated.
pub const TABLE_POSITIONS: [f64; 6] = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TableId {
    /// Glucose, varying `γ_E1`.
    Glucose = 1,
    /// Oxygen, varying `γ_S1`.
    Oxygen = 2,
    /// Gluconic acid, varying `γ_S1`.
    GluconicAcid = 3,
}

impl TableId {
    pub fn from_number(n: u32) -> Result<Self> {
        match n {
            1 => Ok(TableId::Glucose),
            2 => Ok(TableId::Oxygen),
            3 => Ok(TableId::GluconicAcid),
            _ => Err(Error::Contract(format!(
                "unknown table {n} (valid: 1, 2, 3)"
            ))),
        }
    }

    pub fn number(self) -> u32 {
        self as u32
    }

    pub fn species(self) -> Species {
        match self {
            TableId::Glucose => Species::U,
            TableId::Oxygen => Species::V,
            TableId::GluconicAcid => Species::W,
        }
    }
}

/// A parameter point of one table column group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub label: String,
    pub params: DimensionlessParams,
    /// Reproduced for completeness only; no quantitative agreement expected.
    pub qualitative_only: bool,
}

fn scenario(label: String, params: DimensionlessParams, qualitative_only: bool) -> Scenario {
    Scenario {
        label,
        params,
        qualitative_only,
    }
}

/// Parameter points for each table.
///
/// * Table 1: `γ_E1 ∈ {10, 210, 350}`, `α = 0.01`, `β = 1.15`, with
///   `γ_S1 = 10`, `η = μ = 1`.
/// * Table 2: `γ_S1 ∈ {10, 30, 35}`, `γ_E1 = 10`, `α = 0.01`, `β = 1.15`,
///   `η = μ = 1`; only the first column is quantitative.
/// * Table 3: `γ_S1 ∈ {5, 20, 40}`, `γ_E1 = 5`, `α = 0.1`, `β = 1`,
///   `η = μ = 1`.
pub fn table_scenarios(table: TableId) -> Vec<Scenario> {
    let mk = |alpha, beta, ge, gs| {
        DimensionlessParams::new(alpha, beta, ge, gs, 1.0, 1.0).expect("table parameters are valid")
    };
    match table {
        TableId::Glucose => [10.0, 210.0, 350.0]
            .into_iter()
            .map(|ge| scenario(format!("gammaE1={ge}"), mk(0.01, 1.15, ge, 10.0), false))
            .collect(),
        TableId::Oxygen => [10.0, 30.0, 35.0]
            .into_iter()
            .map(|gs| {
                scenario(
                    format!("gammaS1={gs}"),
                    mk(0.01, 1.15, 10.0, gs),
                    gs != 10.0,
                )
            })
            .collect(),
        TableId::GluconicAcid => [5.0, 20.0, 40.0]
            .into_iter()
            .map(|gs| scenario(format!("gammaS1={gs}"), mk(0.1, 1.0, 5.0, gs), false))
            .collect(),
    }
}

/// `|numerical − approx| / numerical` as a fraction.
///
/// Both zero gives 0; a zero numerical value with a nonzero approximation
/// has no relative deviation and yields `None`.
pub fn relative_deviation(numerical: f64, approx: f64) -> Option<f64> {
    if numerical == 0.0 {
        return (approx == 0.0).then_some(0.0);
    }
    Some(((numerical - approx) / numerical).abs())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRow {
    pub x: f64,
    pub numerical: f64,
    pub vim: f64,
    pub agm: f64,
    /// `None` marks a flagged row (zero numerical value).
    pub dev_vim: Option<f64>,
    pub dev_agm: Option<f64>,
}

/// One scenario of a comparison table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub table: TableId,
    pub species: Species,
    pub scenario: Scenario,
    pub rows: Vec<ErrorRow>,
    /// Arithmetic means over unflagged rows.
    pub mean_dev_vim: f64,
    pub mean_dev_agm: f64,
    pub residual: f64,
    pub audit: InvariantAudit,
}

fn mean(values: impl Iterator<Item = Option<f64>>) -> f64 {
    let (sum, count) = values
        .flatten()
        .fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

fn closed_form_at(
    species: Species,
    x: f64,
    p: &DimensionlessParams,
    c: &ClosedFormCoefficients,
    form: SteadyForm,
) -> Result<f64> {
    match species {
        Species::U => steady_u_with(x, c, form),
        Species::V => steady_v_with(x, p, c, form),
        Species::W => steady_w_with(x, p, c, form),
    }
}

fn run_scenario(
    table: TableId,
    sc: &Scenario,
    grid: &Grid,
    cfg: &SolverConfig,
) -> Result<ErrorReport> {
    let species = table.species();
    let p = &sc.params;
    let steady = solve_steady(p, grid, cfg)?;
    let coeffs = ClosedFormCoefficients::new(p)?;
    let mut rows = Vec::with_capacity(TABLE_POSITIONS.len());
    for x in TABLE_POSITIONS {
        let numerical = species.pick(steady.field.sample(grid, x)?);
        let vim = closed_form_at(species, x, p, &coeffs, SteadyForm::Vim)?;
        let agm = closed_form_at(species, x, p, &coeffs, SteadyForm::Agm)?;
        rows.push(ErrorRow {
            x,
            numerical,
            vim,
            agm,
            dev_vim: relative_deviation(numerical, vim),
            dev_agm: relative_deviation(numerical, agm),
        });
    }
    Ok(ErrorReport {
        table,
        species,
        scenario: sc.clone(),
        mean_dev_vim: mean(rows.iter().map(|r| r.dev_vim)),
        mean_dev_agm: mean(rows.iter().map(|r| r.dev_agm)),
        rows,
        residual: steady.residual,
        audit: check_steady_invariants(&steady.field, p),
    })
}

/// Solves every scenario of `table` and compares with the closed forms.
///
/// Scenarios run in parallel; the output keeps the fixed scenario order.
pub fn reproduce_table(
    table: TableId,
    grid: &Grid,
    cfg: &SolverConfig,
) -> Result<Vec<ErrorReport>> {
    table_scenarios(table)
        .par_iter()
        .map(|sc| {
            run_scenario(table, sc, grid, cfg).map_err(|e| Error::Scenario {
                scenario: format!("table {} {}", table.number(), sc.label),
                source: Box::new(e),
            })
        })
        .collect()
}

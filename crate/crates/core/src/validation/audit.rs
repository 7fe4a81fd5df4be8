use serde::Serialize;

use crate::model::DimensionlessParams;
use crate::solver::ConcentrationField;

/// Steady-state consistency checks.
///
/// Eliminating the shared reaction term between the three steady equations
/// (with zero flux at `X = 0` and the `X = 1` values) gives two exact linear
/// relations:
///
/// ```text
/// γ_S1 u − 2ηγ_E1 v = γ_S1 − 2ηγ_E1
/// γ_S1 u + μγ_E1 w  = γ_S1
/// ```
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantAudit {
    /// Max-norm violation of the glucose/oxygen relation.
    pub oxygen_coupling: f64,
    /// Max-norm violation of the glucose/acid relation.
    pub acid_coupling: f64,
    /// Largest deviation from the `X = 1` values.
    pub boundary: f64,
    pub u_nondecreasing: bool,
    pub v_nondecreasing: bool,
    pub w_nonincreasing: bool,
    pub min_u: f64,
    pub min_v: f64,
    pub min_w: f64,
    /// Some concentration is negative (model breakdown, e.g. oxygen
    /// exhaustion in the linearized profile).
    pub negative_concentration: bool,
}

impl InvariantAudit {
    pub fn max_coupling_violation(&self) -> f64 {
        self.oxygen_coupling.max(self.acid_coupling)
    }

    pub fn monotone(&self) -> bool {
        self.u_nondecreasing && self.v_nondecreasing && self.w_nonincreasing
    }
}

const MONOTONE_SLACK: f64 = 1e-12;

fn min(a: &[f64]) -> f64 {
    a.iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn check_steady_invariants(
    field: &ConcentrationField,
    p: &DimensionlessParams,
) -> InvariantAudit {
    let (ge, gs) = (p.gamma_e1, p.gamma_s1);
    let mut oxygen: f64 = 0.0;
    let mut acid: f64 = 0.0;
    for i in 0..field.len() {
        let (u, v, w) = (field.u[i], field.v[i], field.w[i]);
        oxygen = oxygen.max((gs * u - 2.0 * p.eta * ge * v - (gs - 2.0 * p.eta * ge)).abs());
        acid = acid.max((gs * u + p.mu * ge * w - gs).abs());
    }
    let up = |a: &[f64]| a.windows(2).all(|w| w[1] >= w[0] - MONOTONE_SLACK);
    let down = |a: &[f64]| a.windows(2).all(|w| w[1] <= w[0] + MONOTONE_SLACK);
    let (min_u, min_v, min_w) = (min(&field.u), min(&field.v), min(&field.w));
    InvariantAudit {
        oxygen_coupling: oxygen,
        acid_coupling: acid,
        boundary: field.boundary_violation(),
        u_nondecreasing: up(&field.u),
        v_nondecreasing: up(&field.v),
        w_nonincreasing: down(&field.w),
        min_u,
        min_v,
        min_w,
        negative_concentration: min_u < 0.0 || min_v < 0.0 || min_w < 0.0,
    }
}

//! Method-of-lines semi-discretization.
//!
//! Second-order central differences in the interior and a reflected ghost
//! node (`y_{-1} = y_1`) at the symmetry plane. The `X = 1` node is a
//! Dirichlet node and has zero time derivative.

use serde::Serialize;

use super::banded::BandedMatrix;
use super::grid::{ConcentrationField, Grid, SPECIES};
use crate::error::Result;
use crate::model::{rate, rate_with_partials, DimensionlessParams};

/// Half-bandwidth of the node-interleaved Jacobian.
pub const HALF_BANDWIDTH: usize = SPECIES;

/// Dirichlet values `(u, v, w)` at `X = 1`.
pub const BOUNDARY: [f64; SPECIES] = [1.0, 1.0, 0.0];

/// Per-node time derivatives of each species.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Derivatives {
    pub du: Vec<f64>,
    pub dv: Vec<f64>,
    pub dw: Vec<f64>,
}

impl Derivatives {
    pub fn norm_inf(&self) -> f64 {
        self.du
            .iter()
            .chain(&self.dv)
            .chain(&self.dw)
            .fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Time derivatives `(du/dτ, dv/dτ, dw/dτ)` of the semi-discrete system.
pub fn semidiscrete_rhs(
    field: &ConcentrationField,
    p: &DimensionlessParams,
    grid: &Grid,
) -> Result<Derivatives> {
    field.check_grid(grid)?;
    let y = field.to_state();
    let mut out = vec![0.0; y.len()];
    rhs_state(&y, p, grid, &mut out);
    let f = ConcentrationField::from_state(&out, field.tau);
    Ok(Derivatives {
        du: f.u,
        dv: f.v,
        dw: f.w,
    })
}

#[inline]
fn diffusivities(p: &DimensionlessParams) -> [f64; SPECIES] {
    [1.0, p.eta, p.mu]
}

/// Reaction source coefficients per species, multiplying `g(u, v)`.
#[inline]
fn sources(p: &DimensionlessParams) -> [f64; SPECIES] {
    [-p.gamma_e1, -0.5 * p.gamma_s1, p.gamma_s1]
}

/// Discrete Laplacian of species `s` at node `i` (the last node excluded).
#[inline]
fn laplacian(y: &[f64], i: usize, s: usize, inv_h2: f64) -> f64 {
    let c = y[SPECIES * i + s];
    let right = y[SPECIES * (i + 1) + s];
    let left = if i == 0 {
        right
    } else {
        y[SPECIES * (i - 1) + s]
    };
    (left - 2.0 * c + right) * inv_h2
}

pub(crate) fn rhs_state(y: &[f64], p: &DimensionlessParams, grid: &Grid, out: &mut [f64]) {
    let n = grid.len();
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let diff = diffusivities(p);
    let src = sources(p);
    for i in 0..n - 1 {
        let g = rate(y[SPECIES * i], y[SPECIES * i + 1], p.alpha, p.beta);
        for s in 0..SPECIES {
            out[SPECIES * i + s] = diff[s] * laplacian(y, i, s, inv_h2) + src[s] * g;
        }
    }
    out[SPECIES * (n - 1)..].fill(0.0);
}

/// Analytic Jacobian of [`rhs_state`]; Dirichlet rows are zero.
pub(crate) fn rhs_jacobian(y: &[f64], p: &DimensionlessParams, grid: &Grid) -> BandedMatrix {
    let n = grid.len();
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let diff = diffusivities(p);
    let src = sources(p);
    let mut jac = BandedMatrix::zeros(SPECIES * n, HALF_BANDWIDTH, HALF_BANDWIDTH);
    for i in 0..n - 1 {
        let (_, gu, gv) = rate_with_partials(y[SPECIES * i], y[SPECIES * i + 1], p.alpha, p.beta);
        for s in 0..SPECIES {
            let row = SPECIES * i + s;
            let d = diff[s] * inv_h2;
            jac.add(row, row, -2.0 * d);
            let right = SPECIES * (i + 1) + s;
            if i == 0 {
                jac.add(row, right, 2.0 * d);
            } else {
                jac.add(row, SPECIES * (i - 1) + s, d);
                jac.add(row, right, d);
            }
            jac.add(row, SPECIES * i, src[s] * gu);
            jac.add(row, SPECIES * i + 1, src[s] * gv);
        }
    }
    jac
}

/// Round-off floor of the residual `rhs(y)` in max-norm.
pub(crate) fn rhs_noise_floor(y: &[f64], p: &DimensionlessParams, grid: &Grid) -> f64 {
    let h = grid.spacing();
    let ymax = y.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let dmax = p.eta.max(p.mu).max(1.0);
    16.0 * f64::EPSILON * (4.0 * dmax * ymax / (h * h) + p.gamma_e1 + p.gamma_s1)
}

//! Finite-difference solver for the dimensionless transport system.
//!
//! ```text
//! u_τ = u_XX     − γ_E1 g(u, v)
//! v_τ = η v_XX   − (γ_S1/2) g(u, v)
//! w_τ = μ w_XX   + γ_S1 g(u, v)
//! ```
//!
//! with zero flux at `X = 0` and `u = v = 1`, `w = 0` at `X = 1`. Unknowns
//! are stored node-interleaved so every Newton system is banded with
//! half-bandwidth 3.

pub mod banded;
mod grid;
mod newton;
mod system;

use serde::Serialize;

pub use banded::{banded_solve, BandedMatrix};
pub use grid::{ConcentrationField, Grid, SolverConfig, SPECIES};
pub use newton::NewtonReport;
pub use system::{semidiscrete_rhs, Derivatives, BOUNDARY, HALF_BANDWIDTH};

use crate::error::{Error, Result};
use crate::model::DimensionlessParams;
use system::{rhs_jacobian, rhs_noise_floor, rhs_state};

fn pin_boundary(y: &mut [f64]) {
    let n = y.len();
    y[n - SPECIES..].copy_from_slice(&BOUNDARY);
}

/// One implicit Euler step of length `dt`.
///
/// Solves `y⁺ − y − dt·rhs(y⁺) = 0` by damped Newton starting from `y`.
pub fn step_implicit(
    field: &ConcentrationField,
    p: &DimensionlessParams,
    grid: &Grid,
    cfg: &SolverConfig,
) -> Result<ConcentrationField> {
    step_with_dt(field, p, grid, cfg, cfg.dt).map(|(f, _)| f)
}

fn step_with_dt(
    field: &ConcentrationField,
    p: &DimensionlessParams,
    grid: &Grid,
    cfg: &SolverConfig,
    dt: f64,
) -> Result<(ConcentrationField, NewtonReport)> {
    field.check_grid(grid)?;
    let old = field.to_state();
    let mut y = old.clone();
    pin_boundary(&mut y);
    let floor = 16.0 * f64::EPSILON * old.iter().fold(1.0_f64, |m, x| m.max(x.abs()))
        + dt * rhs_noise_floor(&old, p, grid);
    let mut rhs = vec![0.0; y.len()];
    let dirichlet = old.len() - SPECIES;
    let report = newton::solve(
        &mut y,
        cfg,
        floor,
        |y, r| {
            rhs_state(y, p, grid, &mut rhs);
            for i in 0..dirichlet {
                r[i] = y[i] - old[i] - dt * rhs[i];
            }
            for s in 0..SPECIES {
                r[dirichlet + s] = y[dirichlet + s] - BOUNDARY[s];
            }
        },
        |y| {
            let mut jac = rhs_jacobian(y, p, grid);
            jac.scale_add_identity(1.0, -dt);
            jac
        },
    )?;
    Ok((ConcentrationField::from_state(&y, field.tau + dt), report))
}

/// Result of [`solve_transient`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransientRun {
    /// One field per requested sample time, in order.
    pub samples: Vec<ConcentrationField>,
    /// Time at which `‖rhs‖∞ < steady_tol` ended the run early.
    pub steady_at: Option<f64>,
    pub steps: usize,
}

/// Integrates from the initial profile to `tau_end`.
///
/// Steps are shortened to land exactly on each sample time. Once the time
/// derivative falls below `cfg.steady_tol` the run stops, and later sample
/// times receive the steady field.
pub fn solve_transient(
    p: &DimensionlessParams,
    grid: &Grid,
    cfg: &SolverConfig,
    tau_end: f64,
    sample_times: &[f64],
) -> Result<TransientRun> {
    cfg.validate()?;
    if !(tau_end > 0.0 && tau_end.is_finite()) {
        return Err(Error::domain("tau_end", "must be positive", tau_end));
    }
    if sample_times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Contract("sample times must be sorted".into()));
    }
    if let Some(&t) = sample_times
        .iter()
        .find(|&&t| !(0.0..=tau_end).contains(&t))
    {
        return Err(Error::domain("sample time", "must lie in [0, tau_end]", t));
    }

    let eps = 1e-12 * tau_end.max(1.0);
    let mut field = ConcentrationField::initial(grid);
    let mut samples = Vec::with_capacity(sample_times.len());
    let mut next = 0;
    let mut steps = 0;
    let mut steady_at = None;
    let mut rates = vec![0.0; SPECIES * grid.len()];

    let take_due = |field: &ConcentrationField, next: &mut usize, samples: &mut Vec<_>| {
        while *next < sample_times.len() && sample_times[*next] <= field.tau + eps {
            let mut s: ConcentrationField = field.clone();
            s.tau = sample_times[*next];
            samples.push(s);
            *next += 1;
        }
    };
    take_due(&field, &mut next, &mut samples);

    while field.tau < tau_end - eps {
        let target = sample_times
            .get(next)
            .copied()
            .unwrap_or(tau_end)
            .min(tau_end);
        let mut dt = cfg.dt.min(target - field.tau);
        if target - (field.tau + dt) < eps {
            dt = target - field.tau;
        }
        let (mut new, _) = step_with_dt(&field, p, grid, cfg, dt)?;
        if (new.tau - target).abs() < eps {
            new.tau = target;
        }
        field = new;
        steps += 1;
        take_due(&field, &mut next, &mut samples);

        rhs_state(&field.to_state(), p, grid, &mut rates);
        let norm = rates.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if norm < cfg.steady_tol {
            steady_at = Some(field.tau);
            break;
        }
    }
    while next < sample_times.len() {
        let mut s = field.clone();
        s.tau = sample_times[next];
        samples.push(s);
        next += 1;
    }
    Ok(TransientRun {
        samples,
        steady_at,
        steps,
    })
}

/// Result of [`solve_steady`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteadySolution {
    pub field: ConcentrationField,
    /// Max-norm of the discrete steady residual at the solution.
    pub residual: f64,
    pub iterations: usize,
}

/// Starting point for the steady Newton iteration.
fn steady_guess(p: &DimensionlessParams, grid: &Grid) -> ConcentrationField {
    let mut f = if p.gamma_e1 > 0.0 {
        ConcentrationField::closed_form(grid, p)
            .unwrap_or_else(|_| ConcentrationField::from_fn(grid, 0.0, |_| (1.0, 1.0, 0.0)))
    } else {
        ConcentrationField::from_fn(grid, 0.0, |_| (1.0, 1.0, 0.0))
    };
    // the linearized oxygen profile goes negative when consumption dominates
    for v in &mut f.v {
        *v = v.max(1e-3);
    }
    f.tau = f64::INFINITY;
    f
}

/// Solves the discrete steady system directly.
pub fn solve_steady(
    p: &DimensionlessParams,
    grid: &Grid,
    cfg: &SolverConfig,
) -> Result<SteadySolution> {
    cfg.validate()?;
    p.validate()?;
    let mut y = steady_guess(p, grid).to_state();
    pin_boundary(&mut y);
    let floor = rhs_noise_floor(&y, p, grid);
    let dirichlet = y.len() - SPECIES;
    let report = newton::solve(
        &mut y,
        cfg,
        floor,
        |y, r| {
            rhs_state(y, p, grid, r);
            for s in 0..SPECIES {
                r[dirichlet + s] = y[dirichlet + s] - BOUNDARY[s];
            }
        },
        |y| {
            let mut jac = rhs_jacobian(y, p, grid);
            for s in 0..SPECIES {
                jac.set_identity_row(dirichlet + s);
            }
            jac
        },
    )?;
    Ok(SteadySolution {
        field: ConcentrationField::from_state(&y, f64::INFINITY),
        residual: report.residual,
        iterations: report.iterations,
    })
}

/// Observed spatial order from three nested grids.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ConvergenceOrder {
    /// Coarse and fine differences are both at round-off.
    Exact,
    Observed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceEstimate {
    pub grids: [usize; 3],
    /// `‖y_h − y_{h/2}‖∞` and `‖y_{h/2} − y_{h/4}‖∞` on the coarse nodes.
    pub coarse_difference: f64,
    pub fine_difference: f64,
    pub order: ConvergenceOrder,
}

const EXACT_THRESHOLD: f64 = 1e-11;

/// Richardson estimate `log2(‖y_h − y_{h/2}‖ / ‖y_{h/2} − y_{h/4}‖)`.
///
/// `sizes` must hold three nested grids `n, 2n − 1, 4n − 3`.
pub fn estimate_convergence_order(
    p: &DimensionlessParams,
    cfg: &SolverConfig,
    sizes: &[usize],
) -> Result<ConvergenceEstimate> {
    let &[n0, n1, n2] = sizes else {
        return Err(Error::Contract(format!(
            "need exactly three nested grids, got {}",
            sizes.len()
        )));
    };
    if n1 != 2 * n0 - 1 || n2 != 2 * n1 - 1 {
        return Err(Error::Contract(format!(
            "grids {n0}, {n1}, {n2} are not nested (expected n, 2n-1, 4n-3)"
        )));
    }
    let grids = [Grid::new(n0)?, Grid::new(n1)?, Grid::new(n2)?];
    let sols = grids
        .iter()
        .map(|g| solve_steady(p, g, cfg))
        .collect::<Result<Vec<_>>>()?;

    let diff = |a: &ConcentrationField, b: &ConcentrationField, stride: usize| {
        let mut m = 0.0_f64;
        for i in 0..n0 {
            let j = i * stride;
            let k = i * stride * 2;
            m = m
                .max((a.u[j] - b.u[k]).abs())
                .max((a.v[j] - b.v[k]).abs())
                .max((a.w[j] - b.w[k]).abs());
        }
        m
    };
    let coarse = diff(&sols[0].field, &sols[1].field, 1);
    let fine = diff(&sols[1].field, &sols[2].field, 2);
    let order = if coarse < EXACT_THRESHOLD && fine < EXACT_THRESHOLD {
        ConvergenceOrder::Exact
    } else {
        ConvergenceOrder::Observed((coarse / fine).log2())
    };
    Ok(ConvergenceEstimate {
        grids: [n0, n1, n2],
        coarse_difference: coarse,
        fine_difference: fine,
        order,
    })
}

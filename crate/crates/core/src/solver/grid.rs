use serde::{Deserialize, Serialize};

use crate::closed_form::{steady_u, steady_v, steady_w, ClosedFormCoefficients};
use crate::error::{Error, Result};
use crate::model::{initial_profile, DimensionlessParams};

/// Number of species carried per node.
pub const SPECIES: usize = 3;

/// Uniform grid on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Contract(format!(
                "grid needs at least 3 points, got {n}"
            )));
        }
        Ok(Self { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        1.0 / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i == self.n - 1 {
            1.0
        } else {
            i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.point(i))
    }

    /// Index of the node at `x`, if `x` coincides with one.
    pub fn node_at(&self, x: f64) -> Option<usize> {
        let s = x * (self.n - 1) as f64;
        let i = s.round();
        if (s - i).abs() < 1e-9 && i >= 0.0 && (i as usize) < self.n {
            Some(i as usize)
        } else {
            None
        }
    }
}

/// Dimensionless concentrations sampled on a [`Grid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationField {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub tau: f64,
}

impl ConcentrationField {
    pub fn from_fn(grid: &Grid, tau: f64, mut f: impl FnMut(f64) -> (f64, f64, f64)) -> Self {
        let n = grid.len();
        let (mut u, mut v, mut w) = (
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
        );
        for x in grid.points() {
            let (a, b, c) = f(x);
            u.push(a);
            v.push(b);
            w.push(c);
        }
        Self { u, v, w, tau }
    }

    /// The initial state at `τ = 0`.
    pub fn initial(grid: &Grid) -> Self {
        Self::from_fn(grid, 0.0, |x| {
            initial_profile(x).expect("grid points lie in [0, 1]")
        })
    }

    /// Steady closed-form profiles sampled on the grid.
    pub fn closed_form(grid: &Grid, p: &DimensionlessParams) -> Result<Self> {
        let c = ClosedFormCoefficients::new(p)?;
        let mut out = Self::from_fn(grid, f64::INFINITY, |_| (0.0, 0.0, 0.0));
        for (i, x) in grid.points().enumerate() {
            out.u[i] = steady_u(x, &c)?;
            out.v[i] = steady_v(x, p, &c)?;
            out.w[i] = steady_w(x, p, &c)?;
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub(crate) fn check_grid(&self, grid: &Grid) -> Result<()> {
        let n = grid.len();
        if self.u.len() != n || self.v.len() != n || self.w.len() != n {
            return Err(Error::Contract(format!(
                "field lengths ({}, {}, {}) do not match grid size {n}",
                self.u.len(),
                self.v.len(),
                self.w.len()
            )));
        }
        Ok(())
    }

    /// Largest deviation from `u = v = 1`, `w = 0` at `X = 1`.
    pub fn boundary_violation(&self) -> f64 {
        let last = self.len() - 1;
        (self.u[last] - 1.0)
            .abs()
            .max((self.v[last] - 1.0).abs())
            .max(self.w[last].abs())
    }

    /// Linear interpolation at `x` (exact at nodes).
    pub fn sample(&self, grid: &Grid, x: f64) -> Result<(f64, f64, f64)> {
        self.check_grid(grid)?;
        crate::model::check_position(x)?;
        if let Some(i) = grid.node_at(x) {
            return Ok((self.u[i], self.v[i], self.w[i]));
        }
        let s = x / grid.spacing();
        let i = (s.floor() as usize).min(grid.len() - 2);
        let t = s - i as f64;
        let lerp = |a: &[f64]| a[i] * (1.0 - t) + a[i + 1] * t;
        Ok((lerp(&self.u), lerp(&self.v), lerp(&self.w)))
    }

    /// Node-interleaved state `(u_0, v_0, w_0, u_1, ...)`.
    pub(crate) fn to_state(&self) -> Vec<f64> {
        let mut y = Vec::with_capacity(SPECIES * self.len());
        for i in 0..self.len() {
            y.extend([self.u[i], self.v[i], self.w[i]]);
        }
        y
    }

    pub(crate) fn from_state(y: &[f64], tau: f64) -> Self {
        let n = y.len() / SPECIES;
        let mut f = Self {
            u: Vec::with_capacity(n),
            v: Vec::with_capacity(n),
            w: Vec::with_capacity(n),
            tau,
        };
        for node in y.chunks_exact(SPECIES) {
            f.u.push(node[0]);
            f.v.push(node[1]);
            f.w.push(node[2]);
        }
        f
    }

    /// Max-norm distance over all three species.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let d = |a: &[f64], b: &[f64]| {
            a.iter()
                .zip(b)
                .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
        };
        d(&self.u, &other.u)
            .max(d(&self.v, &other.v))
            .max(d(&self.w, &other.w))
    }
}

/// Numerical settings shared by the transient and steady solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct SolverConfig {
    /// Implicit Euler time step.
    pub dt: f64,
    /// Newton stops once the residual max-norm drops below this (or below
    /// the round-off floor of the residual evaluation, whichever is larger).
    pub newton_tol: f64,
    pub newton_max_iters: usize,
    /// Max-norm of the time derivative regarded as steady.
    pub steady_tol: f64,
    /// Smallest damping factor tried by the Newton line search.
    pub damping_min: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            newton_tol: 1e-10,
            newton_max_iters: 50,
            steady_tol: 1e-8,
            damping_min: 1.0 / 64.0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("dt", self.dt),
            ("newtonTol", self.newton_tol),
            ("steadyTol", self.steady_tol),
            ("dampingMin", self.damping_min),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::domain(name, "must be positive", value));
            }
        }
        if self.damping_min > 1.0 {
            return Err(Error::domain(
                "dampingMin",
                "must not exceed 1",
                self.damping_min,
            ));
        }
        if self.newton_max_iters == 0 {
            return Err(Error::domain("newtonMaxIters", "must be positive", 0.0));
        }
        Ok(())
    }
}

//! Closed-form approximations.
//!
//! Linearizing the reaction term about the external state `u = v = 1`
//! replaces `γ_E1 g(u, v)` by `k u` with `k = γ_E1 / (1 + 1/α + 1/β)`, and
//! the steady glucose profile becomes `cosh(√k X) / cosh √k`. Oxygen and
//! gluconic acid follow from the linear coupling between the three steady
//! equations. The Akbar–Ganji trial solution `A sinh(mX) + B cosh(mX)`
//! reduces to the same profile once its residual is collocated at `X = 1`.
//!
//! The VIM expressions are first-order corrections to the initial profile
//! and are only meaningful for small `τ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{check_position, rate, DimensionlessParams};

/// Default absolute tolerance on the collocation residual for [`agm_m`].
pub const AGM_TOL: f64 = 1e-12;

const AGM_MAX_ITERS: usize = 100;

/// Derived constants of the analytic steady profiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormCoefficients {
    pub k: f64,
    pub sqrt_k: f64,
    /// Akbar–Ganji constant (equal to `√k` up to the root tolerance).
    pub m: f64,
    /// Oxygen amplitude `γ_S1 / (2 η γ_E1)`.
    pub a_v: f64,
    /// Gluconic-acid amplitude `γ_S1 / (μ γ_E1)`.
    pub b_w: f64,
}

impl ClosedFormCoefficients {
    pub fn new(p: &DimensionlessParams) -> Result<Self> {
        Self::with_tolerance(p, AGM_TOL)
    }

    pub fn with_tolerance(p: &DimensionlessParams, tol: f64) -> Result<Self> {
        let k = thiele_k(p.gamma_e1, p.alpha, p.beta)?;
        let m = agm_m(p.gamma_e1, p.alpha, p.beta, tol)?;
        Ok(Self::from_parts(p, k, m))
    }

    /// Coefficients with `k` imposed directly (profile sweeps over `k`).
    pub fn with_k(p: &DimensionlessParams, k: f64) -> Result<Self> {
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::domain("k", "must be nonnegative", k));
        }
        Ok(Self::from_parts(p, k, k.sqrt()))
    }

    fn from_parts(p: &DimensionlessParams, k: f64, m: f64) -> Self {
        Self {
            k,
            sqrt_k: k.sqrt(),
            m,
            a_v: p.gamma_s1 / (2.0 * p.eta * p.gamma_e1),
            b_w: p.gamma_s1 / (p.mu * p.gamma_e1),
        }
    }
}

/// Which decay constant the steady profile uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteadyForm {
    /// `√k` from the linearized equation.
    Vim,
    /// `m` from the Akbar–Ganji collocation.
    Agm,
}

impl ClosedFormCoefficients {
    fn decay(&self, form: SteadyForm) -> f64 {
        match form {
            SteadyForm::Vim => self.sqrt_k,
            SteadyForm::Agm => self.m,
        }
    }
}

/// `k = γ_E1 / (1 + 1/α + 1/β)`.
pub fn thiele_k(gamma_e1: f64, alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::domain("alpha", "must be positive", alpha));
    }
    if !(beta > 0.0) {
        return Err(Error::domain("beta", "must be positive", beta));
    }
    if !(gamma_e1 >= 0.0) {
        return Err(Error::domain("gammaE1", "must be nonnegative", gamma_e1));
    }
    Ok(gamma_e1 / (1.0 + 1.0 / alpha + 1.0 / beta))
}

/// Akbar–Ganji constant `m`.
///
/// Substituting `u = cosh(mX)/cosh(m)` into the glucose equation and
/// evaluating the residual at `X = 1` (where `u = v = 1`) leaves
/// `F(m) = m² − γ_E1 g(1, 1)`. The nonnegative root is found by Newton's
/// method safeguarded by bisection on `[0, √γ_E1 + 1]`.
pub fn agm_m(gamma_e1: f64, alpha: f64, beta: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::domain("tol", "must be positive", tol));
    }
    // validates alpha, beta, gamma_e1
    thiele_k(gamma_e1, alpha, beta)?;
    let c = gamma_e1 * rate(1.0, 1.0, alpha, beta);
    if c == 0.0 {
        return Ok(0.0);
    }
    let f = |m: f64| m * m - c;

    let (mut lo, mut hi) = (0.0_f64, gamma_e1.sqrt() + 1.0);
    let mut m = hi;
    for _ in 0..AGM_MAX_ITERS {
        let fm = f(m);
        if fm.abs() < tol {
            return Ok(m);
        }
        if fm > 0.0 {
            hi = m;
        } else {
            lo = m;
        }
        let newton = m - fm / (2.0 * m);
        m = if m > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::RootNotConverged {
        iterations: AGM_MAX_ITERS,
        last: m,
    })
}

fn shape(x: f64, decay: f64) -> f64 {
    (decay * x).cosh() / decay.cosh()
}

fn check_amplitude(p: &DimensionlessParams) -> Result<()> {
    if p.gamma_e1 > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(
            "gammaE1",
            "must be positive for the oxygen and acid profiles",
            p.gamma_e1,
        ))
    }
}

/// Steady glucose `cosh(√k X) / cosh √k`.
pub fn steady_u(x: f64, coeffs: &ClosedFormCoefficients) -> Result<f64> {
    steady_u_with(x, coeffs, SteadyForm::Vim)
}

/// Steady oxygen `A_v cosh(√k X)/cosh √k − (A_v − 1)`.
pub fn steady_v(x: f64, p: &DimensionlessParams, coeffs: &ClosedFormCoefficients) -> Result<f64> {
    steady_v_with(x, p, coeffs, SteadyForm::Vim)
}

/// Steady gluconic acid `B_w (1 − cosh(√k X)/cosh √k)`, zero at `X = 1`.
pub fn steady_w(x: f64, p: &DimensionlessParams, coeffs: &ClosedFormCoefficients) -> Result<f64> {
    steady_w_with(x, p, coeffs, SteadyForm::Vim)
}

pub fn steady_u_with(x: f64, coeffs: &ClosedFormCoefficients, form: SteadyForm) -> Result<f64> {
    check_position(x)?;
    Ok(shape(x, coeffs.decay(form)))
}

pub fn steady_v_with(
    x: f64,
    p: &DimensionlessParams,
    coeffs: &ClosedFormCoefficients,
    form: SteadyForm,
) -> Result<f64> {
    check_position(x)?;
    check_amplitude(p)?;
    let c = shape(x, coeffs.decay(form));
    Ok(coeffs.a_v * c - (coeffs.a_v - 1.0))
}

pub fn steady_w_with(
    x: f64,
    p: &DimensionlessParams,
    coeffs: &ClosedFormCoefficients,
    form: SteadyForm,
) -> Result<f64> {
    check_position(x)?;
    check_amplitude(p)?;
    let c = shape(x, coeffs.decay(form));
    Ok(coeffs.b_w * (1.0 - c))
}

fn check_time(tau: f64) -> Result<()> {
    if tau >= 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("tau", "must be nonnegative", tau))
    }
}

/// `cosh X / cosh 1` and the shared VIM reaction fraction
/// `αβ cosh X / (αβ cosh X + (α + β) cosh 1)` (without the Thiele factor).
fn vim_parts(x: f64, p: &DimensionlessParams) -> (f64, f64) {
    let c1 = 1f64.cosh();
    let cx = x.cosh();
    let ab = p.alpha * p.beta;
    (cx / c1, ab * cx / (ab * cx + (p.alpha + p.beta) * c1))
}

pub fn vim_u(x: f64, tau: f64, p: &DimensionlessParams) -> Result<f64> {
    check_position(x)?;
    check_time(tau)?;
    let (c, frac) = vim_parts(x, p);
    Ok(c * (1.0 + tau) - p.gamma_e1 * frac * tau)
}

pub fn vim_v(x: f64, tau: f64, p: &DimensionlessParams) -> Result<f64> {
    check_position(x)?;
    check_time(tau)?;
    let (c, frac) = vim_parts(x, p);
    Ok(c * (1.0 + p.eta * tau) - 0.5 * p.gamma_s1 * frac * tau)
}

pub fn vim_w(x: f64, tau: f64, p: &DimensionlessParams) -> Result<f64> {
    check_position(x)?;
    check_time(tau)?;
    let (c, frac) = vim_parts(x, p);
    Ok(1.0 - c * (1.0 + p.mu * tau) + p.gamma_s1 * frac * tau)
}

//! Membrane parameters, reaction kinetics and the reduction to dimensionless
//! variables.
//!
//! Glucose oxidation inside the membrane follows a two-substrate
//! Michaelis–Menten law
//!
//! ```text
//! R = V_max C_g C_ox / (C_ox (K_g + C_g) + C_g K_ox)
//! ```
//!
//! with stoichiometry −1 (glucose), −1/2 (oxygen), +1 (gluconic acid).
//! Concentrations are scaled by the external values, distance by the
//! half-thickness `l` and time by `l² / D_g`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants of the membrane system (CGS units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionalParams {
    /// Glucose concentration in the external solution (mol/cm³).
    #[serde(rename = "C_g_star")]
    pub c_g_star: f64,
    /// Oxygen concentration in the external solution (mol/cm³).
    #[serde(rename = "C_ox_star")]
    pub c_ox_star: f64,
    /// Diffusion coefficients (cm²/s).
    #[serde(rename = "D_g")]
    pub d_g: f64,
    #[serde(rename = "D_ox")]
    pub d_ox: f64,
    #[serde(rename = "D_a")]
    pub d_a: f64,
    /// Michaelis–Menten constants (mol/cm³).
    #[serde(rename = "K_g")]
    pub k_g: f64,
    #[serde(rename = "K_ox")]
    pub k_ox: f64,
    /// Maximal reaction rate (mol/(s·cm³)).
    #[serde(rename = "V_max")]
    pub v_max: f64,
    /// Membrane half-thickness (cm).
    #[serde(rename = "l")]
    pub half_thickness: f64,
}

impl DimensionalParams {
    /// Checks that every field is strictly positive and finite.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("C_g_star", self.c_g_star),
            ("C_ox_star", self.c_ox_star),
            ("D_g", self.d_g),
            ("D_ox", self.d_ox),
            ("D_a", self.d_a),
            ("K_g", self.k_g),
            ("K_ox", self.k_ox),
            ("V_max", self.v_max),
            ("l", self.half_thickness),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::domain(name, "must be positive", value));
            }
        }
        Ok(())
    }
}

/// Stoichiometric coefficients of glucose oxidation.
pub struct Stoichiometry;

impl Stoichiometry {
    pub const GLUCOSE: f64 = -1.0;
    pub const OXYGEN: f64 = -0.5;
    pub const GLUCONIC_ACID: f64 = 1.0;
}

/// Names of the six reduced parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Param {
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "beta")]
    Beta,
    #[serde(rename = "gammaE1")]
    GammaE1,
    #[serde(rename = "gammaS1")]
    GammaS1,
    #[serde(rename = "eta")]
    Eta,
    #[serde(rename = "mu")]
    Mu,
}

impl Param {
    pub const ALL: [Param; 6] = [
        Param::Alpha,
        Param::Beta,
        Param::GammaE1,
        Param::GammaS1,
        Param::Eta,
        Param::Mu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::Alpha => "alpha",
            Param::Beta => "beta",
            Param::GammaE1 => "gammaE1",
            Param::GammaS1 => "gammaS1",
            Param::Eta => "eta",
            Param::Mu => "mu",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Param::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Param::ALL.iter().map(|p| p.name()).collect();
                Error::Contract(format!(
                    "unknown parameter `{s}` (valid: {})",
                    names.join(", ")
                ))
            })
    }
}

/// The reduced parameter set driving every solver.
///
/// * `alpha = C_g*/K_g`, `beta = C_ox*/K_ox`
/// * `gamma_e1`, `gamma_s1`: Thiele moduli for glucose and for oxygen/acid
/// * `eta = D_ox/D_g`, `mu = D_a/D_g`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessParams {
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "gammaE1")]
    pub gamma_e1: f64,
    #[serde(rename = "gammaS1")]
    pub gamma_s1: f64,
    pub eta: f64,
    pub mu: f64,
}

impl DimensionlessParams {
    pub fn new(
        alpha: f64,
        beta: f64,
        gamma_e1: f64,
        gamma_s1: f64,
        eta: f64,
        mu: f64,
    ) -> Result<Self> {
        let p = Self {
            alpha,
            beta,
            gamma_e1,
            gamma_s1,
            eta,
            mu,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (param, value) in self.entries() {
            if !value.is_finite() {
                return Err(Error::domain(param.name(), "must be finite", value));
            }
            match param {
                Param::GammaE1 | Param::GammaS1 => {
                    if value < 0.0 {
                        return Err(Error::domain(param.name(), "must be nonnegative", value));
                    }
                }
                _ => {
                    if value <= 0.0 {
                        return Err(Error::domain(param.name(), "must be positive", value));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, param: Param) -> f64 {
        match param {
            Param::Alpha => self.alpha,
            Param::Beta => self.beta,
            Param::GammaE1 => self.gamma_e1,
            Param::GammaS1 => self.gamma_s1,
            Param::Eta => self.eta,
            Param::Mu => self.mu,
        }
    }

    /// Returns a copy with one parameter replaced, re-validated.
    pub fn with(&self, param: Param, value: f64) -> Result<Self> {
        let mut p = *self;
        match param {
            Param::Alpha => p.alpha = value,
            Param::Beta => p.beta = value,
            Param::GammaE1 => p.gamma_e1 = value,
            Param::GammaS1 => p.gamma_s1 = value,
            Param::Eta => p.eta = value,
            Param::Mu => p.mu = value,
        }
        p.validate()?;
        Ok(p)
    }

    pub fn entries(&self) -> [(Param, f64); 6] {
        Param::ALL.map(|q| (q, self.get(q)))
    }
}

impl fmt::Display for DimensionlessParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries()
            .iter()
            .map(|(q, v)| format!("{q}={v}"))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Reduces the physical constants to the six dimensionless groups.
pub fn nondimensionalize(p: &DimensionalParams) -> Result<DimensionlessParams> {
    p.validate()?;
    let l2 = p.half_thickness * p.half_thickness;
    DimensionlessParams::new(
        p.c_g_star / p.k_g,
        p.c_ox_star / p.k_ox,
        l2 * p.v_max / (p.d_g * p.c_g_star),
        l2 * p.v_max / (p.d_g * p.c_ox_star),
        p.d_ox / p.d_g,
        p.d_a / p.d_g,
    )
}

/// Two-substrate Michaelis–Menten rate in mol/(s·cm³).
///
/// Only the concentrations are checked; the constants may be zero (the
/// saturated limit `R → V_max`).
pub fn reaction_rate_dimensional(c_g: f64, c_ox: f64, p: &DimensionalParams) -> Result<f64> {
    if !(c_g >= 0.0) {
        return Err(Error::domain("C_g", "must be nonnegative", c_g));
    }
    if !(c_ox >= 0.0) {
        return Err(Error::domain("C_ox", "must be nonnegative", c_ox));
    }
    let num = p.v_max * c_g * c_ox;
    if num == 0.0 {
        return Ok(0.0);
    }
    Ok(num / (c_ox * (p.k_g + c_g) + c_g * p.k_ox))
}

/// Dimensionless reaction term `g(u, v) = uv / (uv + v/α + u/β)`.
pub fn reaction_term(u: f64, v: f64, alpha: f64, beta: f64) -> Result<f64> {
    if !(u >= 0.0) {
        return Err(Error::domain("u", "must be nonnegative", u));
    }
    if !(v >= 0.0) {
        return Err(Error::domain("v", "must be nonnegative", v));
    }
    Ok(rate(u, v, alpha, beta))
}

/// Unchecked `g(u, v)`; `g(0, 0) = 0`.
///
/// Newton iterates may wander slightly below zero, so the solver uses this
/// form directly.
#[inline]
pub(crate) fn rate(u: f64, v: f64, alpha: f64, beta: f64) -> f64 {
    let num = u * v;
    if num == 0.0 {
        return 0.0;
    }
    num / (num + v / alpha + u / beta)
}

/// `(g, ∂g/∂u, ∂g/∂v)`.
///
/// With `d = uv + v/α + u/β` the partials collapse to `∂g/∂u = v²/(α d²)`
/// and `∂g/∂v = u²/(β d²)`.
#[inline]
pub(crate) fn rate_with_partials(u: f64, v: f64, alpha: f64, beta: f64) -> (f64, f64, f64) {
    let d = u * v + v / alpha + u / beta;
    if d == 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let d2 = d * d;
    (u * v / d, v * v / (alpha * d2), u * u / (beta * d2))
}

/// Initial state `u = v = cosh X / cosh 1`, `w = 1 − cosh X / cosh 1`.
pub fn initial_profile(x: f64) -> Result<(f64, f64, f64)> {
    check_position(x)?;
    let c = x.cosh() / 1f64.cosh();
    Ok((c, c, 1.0 - c))
}

pub(crate) fn check_position(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain("X", "must lie in [0, 1]", x))
    }
}

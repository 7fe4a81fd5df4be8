use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::Species;
use crate::closed_form::{steady_u, steady_v, steady_w, ClosedFormCoefficients};
use crate::error::{Error, Result};
use crate::model::{DimensionlessParams, Param};

/// Quantity varied across the series of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepParam {
    Model(Param),
    /// The linearized Thiele group `k`, imposed directly.
    K,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Model(p) => p.name(),
            SweepParam::K => "k",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "k" {
            return Ok(SweepParam::K);
        }
        s.parse::<Param>().map(SweepParam::Model).map_err(|_| {
            let mut names: Vec<_> = Param::ALL.iter().map(|p| p.name()).collect();
            names.push("k");
            Error::Contract(format!(
                "unknown sweep parameter `{s}` (valid: {})",
                names.join(", ")
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileSeries {
    pub label: String,
    pub value: f64,
    /// `(X, concentration)` pairs.
    pub points: Vec<(f64, f64)>,
}

/// Closed-form steady profiles of `species`, one series per parameter value.
///
/// `resolution` is the number of equally spaced `X` samples on `[0, 1]`.
pub fn profile_sweep(
    species: Species,
    param: SweepParam,
    values: &[f64],
    fixed: &DimensionlessParams,
    resolution: usize,
) -> Result<Vec<ProfileSeries>> {
    if values.is_empty() {
        return Err(Error::Contract("sweep needs at least one value".into()));
    }
    if resolution < 2 {
        return Err(Error::Contract(format!(
            "sweep resolution must be at least 2, got {resolution}"
        )));
    }
    fixed.validate()?;
    values
        .iter()
        .map(|&value| {
            let (p, coeffs) = match param {
                SweepParam::Model(q) => {
                    let p = fixed.with(q, value)?;
                    (p, ClosedFormCoefficients::new(&p)?)
                }
                SweepParam::K => (*fixed, ClosedFormCoefficients::with_k(fixed, value)?),
            };
            let points = (0..resolution)
                .map(|i| {
                    let x = if i + 1 == resolution {
                        1.0
                    } else {
                        i as f64 / (resolution - 1) as f64
                    };
                    let y = match species {
                        Species::U => steady_u(x, &coeffs)?,
                        Species::V => steady_v(x, &p, &coeffs)?,
                        Species::W => steady_w(x, &p, &coeffs)?,
                    };
                    Ok((x, y))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ProfileSeries {
                label: format!("{}={value}", param.name()),
                value,
                points,
            })
        })
        .collect()
}

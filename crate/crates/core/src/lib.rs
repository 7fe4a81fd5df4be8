//! Glucose, oxygen and gluconic-acid transport in a glucose-sensitive
//! enzymatic membrane.
//!
//! The membrane half-thickness is reduced to `X ∈ [0, 1]` with a symmetry
//! (zero-flux) plane at `X = 0` and the external solution at `X = 1`. The
//! crate provides
//!
//! * [`model`]: parameters, two-substrate Michaelis–Menten kinetics and the
//!   reduction to dimensionless form,
//! * [`closed_form`]: the short-time VIM expressions, the steady analytic
//!   profiles and the Akbar–Ganji trial-solution constant,
//! * [`solver`]: a finite-difference method-of-lines solver (implicit Euler
//!   in time, damped Newton, banded elimination) for the transient and
//!   steady nonlinear systems,
//! * [`validation`]: table reproduction, profile sweeps, local sensitivity
//!   shares and the steady invariant audit,
//! * [`cli`]: configuration, CSV/SVG emitters and the command-line driver.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod closed_form;
pub mod error;
pub mod model;
pub mod solver;
pub mod validation;

pub use error::{Error, Result};

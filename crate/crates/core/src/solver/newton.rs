use super::banded::{banded_solve, BandedMatrix};
use super::grid::SolverConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonReport {
    pub iterations: usize,
    pub residual: f64,
    /// Residual max-norm before each iteration, and after the last.
    pub trace: Vec<f64>,
}

fn norm_inf(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Damped Newton iteration on `F(y) = 0`.
///
/// Each step is halved until the residual max-norm decreases; if no factor
/// down to `cfg.damping_min` does, the iteration fails. `floor` raises the
/// stopping tolerance to the round-off level of the residual evaluation.
pub(crate) fn solve<R, J>(
    y: &mut [f64],
    cfg: &SolverConfig,
    floor: f64,
    mut residual: R,
    mut jacobian: J,
) -> Result<NewtonReport>
where
    R: FnMut(&[f64], &mut [f64]),
    J: FnMut(&[f64]) -> BandedMatrix,
{
    let tol = cfg.newton_tol.max(floor);
    let mut r = vec![0.0; y.len()];
    let mut trial_r = vec![0.0; y.len()];
    let mut trial = vec![0.0; y.len()];
    residual(y, &mut r);
    let mut norm = norm_inf(&r);
    let mut trace = vec![norm];

    for iter in 0..cfg.newton_max_iters {
        if !norm.is_finite() {
            break;
        }
        if norm < tol {
            return Ok(NewtonReport {
                iterations: iter,
                residual: norm,
                trace,
            });
        }
        let jac = jacobian(y);
        let neg: Vec<f64> = r.iter().map(|x| -x).collect();
        let step = banded_solve(&jac, &neg)?;

        let mut lambda = 1.0;
        loop {
            for ((t, yi), si) in trial.iter_mut().zip(y.iter()).zip(&step) {
                *t = yi + lambda * si;
            }
            residual(&trial, &mut trial_r);
            let trial_norm = norm_inf(&trial_r);
            if trial_norm < norm {
                y.copy_from_slice(&trial);
                std::mem::swap(&mut r, &mut trial_r);
                norm = trial_norm;
                break;
            }
            lambda *= 0.5;
            if lambda < cfg.damping_min {
                trace.push(trial_norm);
                return Err(Error::NewtonFailed {
                    iterations: iter + 1,
                    trace,
                });
            }
        }
        trace.push(norm);
    }

    if norm < tol {
        return Ok(NewtonReport {
            iterations: cfg.newton_max_iters,
            residual: norm,
            trace,
        });
    }
    Err(Error::NewtonFailed {
        iterations: trace.len() - 1,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_quadratic() {
        let mut y = vec![3.0];
        let cfg = SolverConfig::default();
        let rep = solve(
            &mut y,
            &cfg,
            0.0,
            |y, r| r[0] = y[0] * y[0] - 2.0,
            |y| {
                let mut j = BandedMatrix::zeros(1, 0, 0);
                j.set(0, 0, 2.0 * y[0]);
                j
            },
        )
        .unwrap();
        assert!((y[0] - 2f64.sqrt()).abs() < 1e-12);
        assert!(rep.iterations < 10);
        assert!(rep.trace.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn failure_carries_trace() {
        // no real root: residual y² + 1 cannot reach zero
        let mut y = vec![0.5];
        let cfg = SolverConfig {
            newton_max_iters: 5,
            ..Default::default()
        };
        let err = solve(
            &mut y,
            &cfg,
            0.0,
            |y, r| r[0] = y[0] * y[0] + 1.0,
            |y| {
                let mut j = BandedMatrix::zeros(1, 0, 0);
                j.set(0, 0, 2.0 * y[0]);
                j
            },
        )
        .unwrap_err();
        match err {
            Error::NewtonFailed { trace, .. } => assert!(!trace.is_empty()),
            Error::SingularPivot { .. } => {}
            other => panic!("{other:?}"),
        }
    }
}

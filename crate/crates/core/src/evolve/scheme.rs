//! Integrating-factor Runge-Kutta steps.
//!
//! With `y' = L y + N(y)` and `E_t = exp(tL)`, the Lawson schemes advance
//! `w = E_{-t} y` by a classical Runge-Kutta method, so the linear part is
//! integrated exactly.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{ConservedState, PerturbationState};

/// Vector-space operations the steppers need.
pub trait LinearSpace: Clone {
    /// `alpha * self + beta * other`.
    fn lin_comb(&self, alpha: f64, other: &Self, beta: f64) -> Self;
}

impl LinearSpace for PerturbationState {
    fn lin_comb(&self, alpha: f64, other: &Self, beta: f64) -> Self {
        PerturbationState::lin_comb(self, alpha, other, beta)
    }
}

impl LinearSpace for ConservedState {
    fn lin_comb(&self, alpha: f64, other: &Self, beta: f64) -> Self {
        ConservedState::lin_comb(self, alpha, other, beta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Fourth-order Lawson.
    #[default]
    Ifrk4,
    /// Second-order Lawson (Heun).
    Ifrk2,
    /// Classical RK4 on the full right-hand side; validation only.
    Rk4,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Ifrk4 => "ifrk4",
            Scheme::Ifrk2 => "ifrk2",
            Scheme::Rk4 => "rk4",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ifrk4" => Ok(Scheme::Ifrk4),
            "ifrk2" => Ok(Scheme::Ifrk2),
            "rk4" => Ok(Scheme::Rk4),
            other => Err(Error::Config(format!(
                "unknown scheme '{other}' (expected ifrk4, ifrk2 or rk4)"
            ))),
        }
    }
}

/// One fourth-order Lawson step. `half` and `full` apply `E_{h/2}` and `E_h`.
pub fn lawson4<S: LinearSpace>(
    y: &S,
    h: f64,
    nonlinear: impl Fn(&S) -> Result<S>,
    half: impl Fn(&S) -> S,
    full: impl Fn(&S) -> S,
) -> Result<S> {
    let k1 = nonlinear(y)?;
    let ey_half = half(y);
    let k2 = nonlinear(&half(&y.lin_comb(1.0, &k1, 0.5 * h)))?;
    let k3 = nonlinear(&ey_half.lin_comb(1.0, &k2, 0.5 * h))?;
    let ey = full(y);
    let k4 = nonlinear(&ey.lin_comb(1.0, &half(&k3), h))?;
    let mid = half(&k2.lin_comb(1.0, &k3, 1.0));
    let acc = full(&k1).lin_comb(1.0, &mid, 2.0).lin_comb(1.0, &k4, 1.0);
    Ok(ey.lin_comb(1.0, &acc, h / 6.0))
}

/// One second-order Lawson step.
pub fn lawson2<S: LinearSpace>(
    y: &S,
    h: f64,
    nonlinear: impl Fn(&S) -> Result<S>,
    full: impl Fn(&S) -> S,
) -> Result<S> {
    let k1 = nonlinear(y)?;
    let k2 = nonlinear(&full(&y.lin_comb(1.0, &k1, h)))?;
    Ok(full(&y.lin_comb(1.0, &k1, 0.5 * h)).lin_comb(1.0, &k2, 0.5 * h))
}

/// One classical RK4 step on `y' = f(y)`.
pub fn rk4<S: LinearSpace>(y: &S, h: f64, rhs: impl Fn(&S) -> Result<S>) -> Result<S> {
    let k1 = rhs(y)?;
    let k2 = rhs(&y.lin_comb(1.0, &k1, 0.5 * h))?;
    let k3 = rhs(&y.lin_comb(1.0, &k2, 0.5 * h))?;
    let k4 = rhs(&y.lin_comb(1.0, &k3, h))?;
    let acc = k1.lin_comb(1.0, &k2, 2.0).lin_comb(1.0, &k3, 2.0).lin_comb(1.0, &k4, 1.0);
    Ok(y.lin_comb(1.0, &acc, h / 6.0))
}

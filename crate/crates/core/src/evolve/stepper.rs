use std::sync::Arc;

use super::linear::{LameFlow, LinearPropagator};
use super::scheme::{lawson2, lawson4, rk4, Scheme};
use crate::error::{Error, Result};
use crate::model::{nonlinear_part, rhs_conserved, rhs_mm3, ConservedState, FluidParams, PerturbationState};
use crate::spectral::ops::lame_operator;
use crate::spectral::Grid;

/// Advances the perturbation system by a fixed step.
#[derive(Clone, Debug)]
pub struct Stepper {
    params: FluidParams,
    scheme: Scheme,
    dt: f64,
    full: LinearPropagator,
    half: LinearPropagator,
}

impl Stepper {
    pub fn new(grid: &Arc<Grid>, params: &FluidParams, scheme: Scheme, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Config(format!("time step must be positive, got {dt}")));
        }
        Ok(Stepper {
            params: *params,
            scheme,
            dt,
            full: LinearPropagator::new(grid, params, dt),
            half: LinearPropagator::new(grid, params, 0.5 * dt),
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn propagator(&self) -> &LinearPropagator {
        &self.full
    }

    /// One step. A state leaving the admissible set (floor, positivity,
    /// non-finite values) is reported as `Error::State`.
    pub fn step(&self, state: &PerturbationState) -> Result<PerturbationState> {
        let p = &self.params;
        let h = self.dt;
        let next = match self.scheme {
            Scheme::Ifrk4 => lawson4(
                state,
                h,
                |s| nonlinear_part(s, p),
                |s| self.half.apply(s),
                |s| self.full.apply(s),
            )?,
            Scheme::Ifrk2 => lawson2(state, h, |s| nonlinear_part(s, p), |s| self.full.apply(s))?,
            Scheme::Rk4 => rk4(state, h, |s| rhs_mm3(s, p))?,
        };
        if !next.is_finite() {
            return Err(Error::State("non-finite coefficients".into()));
        }
        next.check_admissible(p)?;
        Ok(next)
    }
}

/// Advances the divergence-form system in `(rho, u, rho theta)`, with the
/// viscous term integrated exactly and everything else by fourth-order
/// Lawson stages. Used as a consistency reference.
#[derive(Clone, Debug)]
pub struct ConservedStepper {
    params: FluidParams,
    dt: f64,
    full: LameFlow,
    half: LameFlow,
}

impl ConservedStepper {
    pub fn new(grid: &Arc<Grid>, params: &FluidParams, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Config(format!("time step must be positive, got {dt}")));
        }
        Ok(ConservedStepper {
            params: *params,
            dt,
            full: LameFlow::new(grid, params, dt),
            half: LameFlow::new(grid, params, 0.5 * dt),
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn nonlinear(&self, s: &ConservedState) -> Result<ConservedState> {
        let mut t = rhs_conserved(s, &self.params)?;
        t.u.axpy(-1.0, &lame_operator(&s.u, self.params.mu, self.params.lambda)?);
        Ok(t)
    }

    fn flow(lame: &LameFlow, s: &ConservedState) -> ConservedState {
        ConservedState {
            rho: s.rho.clone(),
            u: lame.apply(&s.u),
            s: s.s.clone(),
        }
    }

    pub fn step(&self, state: &ConservedState) -> Result<ConservedState> {
        let next = lawson4(
            state,
            self.dt,
            |s| self.nonlinear(s),
            |s| Self::flow(&self.half, s),
            |s| Self::flow(&self.full, s),
        )?;
        if !next.is_finite() {
            return Err(Error::State("non-finite coefficients".into()));
        }
        Ok(next)
    }
}

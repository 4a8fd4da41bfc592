use std::sync::Arc;

use super::scheme::Scheme;
use super::stepper::Stepper;
use crate::error::{Error, Result};
use crate::lp::{besov_norm, FilterBank};
use crate::model::{FluidParams, PerturbationState};
use crate::spectral::Grid;

/// Instantaneous Besov size above which a run is declared blown up.
pub const BLOWUP_NORM: f64 = 1e6;
/// Regularization of the advective time-step bound.
pub const CFL_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_end: f64,
    pub cfl_safety: f64,
    pub scheme: Scheme,
    /// Steps between ledger samples.
    pub snapshot_interval: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            dt: 1e-3,
            t_end: 10.0,
            cfl_safety: 0.5,
            scheme: Scheme::Ifrk4,
            snapshot_interval: 10,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        // T = 0 is accepted and returns the initial state
        if !(self.t_end == 0.0 || self.t_end >= self.dt) || !self.t_end.is_finite() {
            return Err(Error::Config(format!(
                "horizon T = {} must be zero or at least dt = {}",
                self.t_end, self.dt
            )));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(Error::Config(format!(
                "cfl_safety must lie in (0, 1], got {}",
                self.cfl_safety
            )));
        }
        if self.snapshot_interval == 0 {
            return Err(Error::Config("snapshot_interval must be at least 1".into()));
        }
        Ok(())
    }
}

/// Largest step allowed by advection: `cfl / (k_nyq max|u| + eps)`.
pub fn cfl_dt(state: &PerturbationState, grid: &Grid, cfl_safety: f64) -> f64 {
    let umax = state.u.to_physical().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    cfl_safety / (grid.k_nyquist() * umax + CFL_EPS)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Termination {
    Completed,
    Blowup { t: f64, reason: String },
}

/// State handed to the ledger callback.
#[derive(Clone, Copy, Debug)]
pub struct Snapshot<'a> {
    pub step: usize,
    pub t: f64,
    /// Step size in use when the sample was taken.
    pub dt: f64,
    pub state: &'a PerturbationState,
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    /// Last admissible state.
    pub state: PerturbationState,
    pub t: f64,
    pub steps: usize,
    pub samples: usize,
    pub termination: Termination,
}

impl RunSummary {
    pub fn blew_up(&self) -> bool {
        matches!(self.termination, Termination::Blowup { .. })
    }
}

/// `‖a‖_{B^{n/2}} + ‖u‖_{B^{n/2-1}} + ‖b‖_{B^{n/2}}`, the size watched for blowup.
pub fn instantaneous_size(bank: &FilterBank, state: &PerturbationState) -> f64 {
    let s = bank.grid().dim() as f64 / 2.0;
    besov_norm(bank, &state.a, s, 1.0)
        + besov_norm(bank, &state.u, s - 1.0, 1.0)
        + besov_norm(bank, &state.b, s, 1.0)
}

fn watch_bank(grid: &Arc<Grid>) -> Option<FilterBank> {
    // any j0 inside the block range gives the same full-field norms
    (-64..64).find_map(|j0| FilterBank::new(grid, j0).ok())
}

/// Integrates from `t = 0` to `config.t_end`.
pub fn run(
    initial: &PerturbationState,
    config: &IntegratorConfig,
    params: &FluidParams,
    callback: impl FnMut(&Snapshot) -> Result<()>,
) -> Result<RunSummary> {
    run_from(initial, 0.0, config, params, callback)
}

/// Integrates from `t0` to `config.t_end`; the step schedule depends only on
/// the state at snapshot times, so a run resumed from a snapshot checkpoint
/// reproduces the uninterrupted run.
pub fn run_from(
    initial: &PerturbationState,
    t0: f64,
    config: &IntegratorConfig,
    params: &FluidParams,
    mut callback: impl FnMut(&Snapshot) -> Result<()>,
) -> Result<RunSummary> {
    config.validate()?;
    let grid = initial.grid().clone();
    params.validate(grid.dim())?;
    initial.check_admissible(params)?;
    let bank = watch_bank(&grid);

    let mut state = initial.clone();
    let mut t = t0;
    let mut steps = 0usize;
    let mut samples = 0usize;
    let mut stepper: Option<Stepper> = None;
    let mut dt_reg = config.dt;
    let tol = 1e-12 * config.t_end.max(1.0);

    loop {
        let at_sample = steps % config.snapshot_interval == 0;
        let finished = t >= config.t_end - tol;
        if at_sample {
            if let Some(bank) = &bank {
                let size = instantaneous_size(bank, &state);
                if !(size <= BLOWUP_NORM) {
                    return Ok(RunSummary {
                        state,
                        t,
                        steps,
                        samples,
                        termination: Termination::Blowup {
                            t,
                            reason: format!("Besov size {size:e} exceeds {BLOWUP_NORM:e}"),
                        },
                    });
                }
            }
            dt_reg = config.dt.min(cfl_dt(&state, &grid, config.cfl_safety));
        }
        if at_sample || finished {
            callback(&Snapshot {
                step: steps,
                t,
                dt: dt_reg,
                state: &state,
            })?;
            samples += 1;
        }
        if finished {
            break;
        }
        let h = dt_reg.min(config.t_end - t);
        if stepper.as_ref().map_or(true, |s| s.dt() != h) {
            stepper = Some(Stepper::new(&grid, params, config.scheme, h)?);
        }
        match stepper.as_ref().expect("built above").step(&state) {
            Ok(next) => state = next,
            Err(Error::State(reason)) => {
                return Ok(RunSummary {
                    state,
                    t,
                    steps,
                    samples,
                    termination: Termination::Blowup { t, reason },
                })
            }
            Err(e) => return Err(e),
        }
        t += h;
        steps += 1;
    }
    Ok(RunSummary {
        state,
        t,
        steps,
        samples,
        termination: Termination::Completed,
    })
}

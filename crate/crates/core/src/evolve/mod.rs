//! Time integration: exact per-mode linear flow, Lawson Runge-Kutta stages
//! for the nonlinearity, step-size control and checkpoints.

mod checkpoint;
mod linear;
mod run;
mod scheme;
mod stepper;

pub use checkpoint::{checkpoint_load, checkpoint_save, decode, encode};
pub use linear::{linear_exponential, linear_matrix, linear_roots, LameFlow, LinearPropagator, Mat3};
pub use run::{
    cfl_dt, instantaneous_size, run, run_from, IntegratorConfig, RunSummary, Snapshot, Termination,
    BLOWUP_NORM, CFL_EPS,
};
pub use scheme::{lawson2, lawson4, rk4, LinearSpace, Scheme};
pub use stepper::{ConservedStepper, Stepper};

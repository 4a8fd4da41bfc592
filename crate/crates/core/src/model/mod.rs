//! State representations, nonlinearities and derived unknowns.

mod nonlinear;
mod params;
mod residual;
mod state;
mod unknowns;

pub use nonlinear::{
    linear_part, nonlinear_force, nonlinear_part, rational_density_fn, rhs_conserved, rhs_mm1,
    rhs_mm3,
};
pub use params::FluidParams;
pub use residual::{
    residual_damped_b, residual_g_equation, residual_phi_equation, trapezoid_residual, GResidual,
    Residual,
};
pub use state::{
    conserved_integrals, from_perturbation, grid_min, pressure_law, primitive_from_pressure,
    to_perturbation, to_pressure_form, ConservedState, PerturbationState, PressureState,
    PrimitiveState,
};
pub use unknowns::{compressible_scalar, effective_velocity, good_unknown_phi, low_freq_sources};

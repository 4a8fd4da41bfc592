use crate::error::{Error, Result};

/// Physical constants of the model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluidParams {
    /// Shear viscosity.
    pub mu: f64,
    /// Second viscosity.
    pub lambda: f64,
    /// Adiabatic index.
    pub gamma: f64,
    /// Constant `A` in `P = A (rho theta)^gamma`.
    pub pressure_const: f64,
    /// Lower bound enforced on `1 + a` (no vacuum).
    pub density_floor: f64,
}

impl Default for FluidParams {
    fn default() -> Self {
        FluidParams {
            mu: 1.0,
            lambda: 0.0,
            gamma: 1.4,
            pressure_const: 1.0,
            density_floor: 0.1,
        }
    }
}

impl FluidParams {
    /// Viscosity acting on the potential part: `lambda + 2 mu`.
    pub fn nu_q(&self) -> f64 {
        self.lambda + 2.0 * self.mu
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if !(self.mu > 0.0) {
            return Err(Error::Parameter(format!("mu must be positive, got {}", self.mu)));
        }
        if !(dim as f64 * self.lambda + 2.0 * self.mu > 0.0) {
            return Err(Error::Parameter(format!(
                "n*lambda + 2*mu must be positive (n = {dim}, lambda = {}, mu = {})",
                self.lambda, self.mu
            )));
        }
        if !(self.gamma > 1.0) {
            return Err(Error::Parameter(format!(
                "adiabatic index gamma must exceed 1, got {}",
                self.gamma
            )));
        }
        if !(self.pressure_const > 0.0) {
            return Err(Error::Parameter(format!(
                "pressure constant A must be positive, got {}",
                self.pressure_const
            )));
        }
        if !(self.density_floor > 0.0 && self.density_floor < 1.0) {
            return Err(Error::Parameter(format!(
                "density floor must lie in (0, 1), got {}",
                self.density_floor
            )));
        }
        Ok(())
    }
}

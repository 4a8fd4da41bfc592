//! Periodic grid, transforms and Fourier-multiplier operators.

mod field;
mod grid;
pub mod random;
pub mod ops;

pub use field::SpectralField;
pub use grid::{dft_index, Grid};
pub use ops::{
    advection, dealias, derivative, divergence, fractional_laplacian, gradient, helmholtz,
    inverse_laplacian, lame_operator, laplacian, product,
};

use std::sync::Arc;

use crate::error::Result;

/// Physical samples to coefficients.
pub fn fft_forward(grid: &Arc<Grid>, samples: &[f64]) -> Result<SpectralField> {
    SpectralField::from_physical(grid, 1, samples)
}

/// Coefficients to physical samples.
pub fn fft_inverse(field: &SpectralField) -> Vec<f64> {
    field.to_physical()
}

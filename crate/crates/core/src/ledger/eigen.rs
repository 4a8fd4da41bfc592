use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolve::{linear_matrix, linear_roots};
use crate::model::FluidParams;

/// Spectrum of the per-mode linear matrix acting on `(a, b, v)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinEigen {
    pub r: f64,
    /// Slow root: the one with the smaller decay rate, `+im` first when complex.
    pub plus: Complex64,
    pub minus: Complex64,
    /// Zero-eigenvalue direction, unit length.
    pub kernel: [f64; 3],
}

/// Roots of `l^2 + nu r^2 l + gamma r^2 = 0` and the kernel `(1, 0, 0)`.
pub fn lin_eigenvalues(r: f64, params: &FluidParams) -> Result<LinEigen> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Precondition(format!("wavenumber must be positive, got {r}")));
    }
    let (plus, minus) = linear_roots(r, params);
    Ok(LinEigen {
        r,
        plus,
        minus,
        kernel: [1.0, 0.0, 0.0],
    })
}

/// Eigenvalues of the dense matrix by a general real eigensolver.
pub fn dense_eigenvalues(r: f64, params: &FluidParams) -> [Complex64; 3] {
    let m = linear_matrix(r, params);
    let mat = Matrix3::from_fn(|i, j| m[i][j]);
    let ev = mat.complex_eigenvalues();
    [ev[0], ev[1], ev[2]]
}

/// Largest distance between the closed-form spectrum `{0, plus, minus}` and
/// the dense one, after optimal matching.
pub fn eigen_agreement(e: &LinEigen, params: &FluidParams) -> f64 {
    let dense = dense_eigenvalues(e.r, params);
    let closed = [Complex64::new(0.0, 0.0), e.plus, e.minus];
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    perms
        .iter()
        .map(|p| (0..3).map(|i| (closed[i] - dense[p[i]]).norm()).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

/// `‖M(r) x‖` for the kernel vector; zero up to rounding.
pub fn kernel_defect(e: &LinEigen, params: &FluidParams) -> f64 {
    let m = linear_matrix(e.r, params);
    (0..3)
        .map(|i| (0..3).map(|j| m[i][j] * e.kernel[j]).sum::<f64>().abs())
        .fold(0.0, f64::max)
}

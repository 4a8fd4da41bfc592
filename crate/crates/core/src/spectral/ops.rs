//! Fourier-multiplier operators on [`SpectralField`]s.
//!
//! Odd symbols (`i k`, `i k/|k|`) are zeroed on Nyquist modes so that real
//! fields stay real; even symbols act on every mode.

use num_complex::Complex64;

use super::{Grid, SpectralField};
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn require_vector(u: &SpectralField, what: &str) -> Result<()> {
    if u.ncomp() != u.grid().dim() {
        return Err(Error::Precondition(format!(
            "{what} expects a vector field with {} components, got {}",
            u.grid().dim(),
            u.ncomp()
        )));
    }
    Ok(())
}

fn require_zero_mean(f: &SpectralField, what: &str) -> Result<()> {
    let scale = f.coeff_norm_sqr().sqrt();
    for c in 0..f.ncomp() {
        let z = f.comp(c)[0];
        if z.norm() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Precondition(format!(
                "{what} requires a zero-mean field (component {c} has mean {})",
                z.re
            )));
        }
    }
    Ok(())
}

/// `d/dx_axis`: multiplies mode `k` by `i k_axis`.
pub fn derivative(f: &SpectralField, axis: usize) -> Result<SpectralField> {
    let grid = f.grid().clone();
    if axis >= grid.dim() {
        return Err(Error::Precondition(format!(
            "axis {axis} out of range for dimension {}",
            grid.dim()
        )));
    }
    let mut out = f.clone();
    let m = grid.len();
    for c in 0..f.ncomp() {
        for (mode, z) in out.coeffs_mut()[c * m..(c + 1) * m].iter_mut().enumerate() {
            *z = if grid.is_nyquist(mode) {
                Complex64::new(0.0, 0.0)
            } else {
                *z * I * grid.k(mode)[axis]
            };
        }
    }
    Ok(out)
}

/// Gradient of a scalar.
pub fn gradient(f: &SpectralField) -> Result<SpectralField> {
    if f.ncomp() != 1 {
        return Err(Error::Precondition("gradient expects a scalar field".into()));
    }
    let parts = (0..f.grid().dim())
        .map(|axis| derivative(f, axis))
        .collect::<Result<Vec<_>>>()?;
    SpectralField::stack(&parts)
}

/// Divergence of a vector field.
pub fn divergence(u: &SpectralField) -> Result<SpectralField> {
    require_vector(u, "divergence")?;
    let grid = u.grid().clone();
    let m = grid.len();
    let mut out = SpectralField::scalar_zeros(&grid);
    for axis in 0..grid.dim() {
        let comp = u.comp(axis);
        for (mode, z) in out.coeffs_mut().iter_mut().enumerate() {
            if !grid.is_nyquist(mode) {
                *z += comp[mode] * I * grid.k(mode)[axis];
            }
        }
    }
    debug_assert_eq!(out.coeffs().len(), m);
    Ok(out)
}

/// `Lambda^s = |D|^s`. The zero mode maps to zero for every `s != 0`.
pub fn fractional_laplacian(f: &SpectralField, s: f64) -> Result<SpectralField> {
    if s == 0.0 {
        return Ok(f.clone());
    }
    if s < 0.0 {
        require_zero_mean(f, "negative-order Lambda^s")?;
    }
    let grid = f.grid().clone();
    Ok(f.map_symbol(|mode| {
        let k = grid.kmod(mode);
        if k == 0.0 {
            0.0
        } else {
            k.powf(s)
        }
    }))
}

/// `Delta^{-1}` with symbol `-1/|k|^2`, zero on the zero mode.
pub fn inverse_laplacian(f: &SpectralField) -> Result<SpectralField> {
    require_zero_mean(f, "inverse Laplacian")?;
    let grid = f.grid().clone();
    Ok(f.map_symbol(|mode| {
        let k2 = grid.kmod(mode).powi(2);
        if k2 == 0.0 {
            0.0
        } else {
            -1.0 / k2
        }
    }))
}

/// `Delta`.
pub fn laplacian(f: &SpectralField) -> SpectralField {
    let grid = f.grid().clone();
    f.map_symbol(|mode| -grid.kmod(mode).powi(2))
}

/// `Delta^{-1} grad b`, applied as the single symbol `-i k / |k|^2`.
///
/// The zero mode of `b` never enters, so no mean condition is imposed.
pub fn inverse_laplacian_gradient(b: &SpectralField) -> Result<SpectralField> {
    if b.ncomp() != 1 {
        return Err(Error::Precondition("expects a scalar field".into()));
    }
    let grid = b.grid().clone();
    let dim = grid.dim();
    let m = grid.len();
    let mut out = SpectralField::vector_zeros(&grid);
    let src = b.comp(0);
    for axis in 0..dim {
        let dst = &mut out.coeffs_mut()[axis * m..(axis + 1) * m];
        for mode in 0..m {
            let k2 = grid.kmod(mode).powi(2);
            if k2 > 0.0 && !grid.is_nyquist(mode) {
                dst[mode] = -I * grid.k(mode)[axis] / k2 * src[mode];
            }
        }
    }
    Ok(out)
}

/// `Lambda^{-1} div u`, symbol `i k . u / |k|`.
pub fn lambda_inv_div(u: &SpectralField) -> Result<SpectralField> {
    require_vector(u, "Lambda^-1 div")?;
    let grid = u.grid().clone();
    let m = grid.len();
    let mut out = SpectralField::scalar_zeros(&grid);
    for axis in 0..grid.dim() {
        let comp = u.comp(axis);
        let dst = out.coeffs_mut();
        for mode in 0..m {
            let k = grid.kmod(mode);
            if k > 0.0 && !grid.is_nyquist(mode) {
                dst[mode] += I * grid.k(mode)[axis] / k * comp[mode];
            }
        }
    }
    Ok(out)
}

/// Inverse of [`lambda_inv_div`] on gradients: the potential vector field
/// `-i k/|k| v` whose `Lambda^{-1} div` is `v`.
pub fn compressive_from_scalar(v: &SpectralField) -> Result<SpectralField> {
    if v.ncomp() != 1 {
        return Err(Error::Precondition("expects a scalar field".into()));
    }
    let grid = v.grid().clone();
    let m = grid.len();
    let mut out = SpectralField::vector_zeros(&grid);
    let src = v.comp(0);
    for axis in 0..grid.dim() {
        let dst = &mut out.coeffs_mut()[axis * m..(axis + 1) * m];
        for mode in 0..m {
            let k = grid.kmod(mode);
            if k > 0.0 && !grid.is_nyquist(mode) {
                dst[mode] = -I * grid.k(mode)[axis] / k * src[mode];
            }
        }
    }
    Ok(out)
}

/// Helmholtz split `u = Pu + Qu` with `Q = grad Delta^{-1} div`.
///
/// The zero mode goes entirely to `Pu`. `Qu` is computed from the symbol
/// `k k^T / |k|^2` and `Pu` as the remainder, so `Pu + Qu = u` exactly.
pub fn helmholtz(u: &SpectralField) -> Result<(SpectralField, SpectralField)> {
    require_vector(u, "Helmholtz projection")?;
    let grid = u.grid().clone();
    let dim = grid.dim();
    let m = grid.len();
    let mut q = SpectralField::vector_zeros(&grid);
    for mode in 1..m {
        let k = grid.k(mode);
        let k2 = grid.kmod(mode).powi(2);
        let mut kdotu = Complex64::new(0.0, 0.0);
        for axis in 0..dim {
            kdotu += k[axis] * u.comp(axis)[mode];
        }
        for axis in 0..dim {
            q.comp_mut(axis)[mode] = k[axis] * kdotu / k2;
        }
    }
    let p = u.sub(&q);
    Ok((p, q))
}

/// Lame operator `mu Delta u + (lambda + mu) grad div u`.
pub fn lame_operator(u: &SpectralField, mu: f64, lambda: f64) -> Result<SpectralField> {
    require_vector(u, "Lame operator")?;
    let grid = u.grid().clone();
    let dim = grid.dim();
    if !(mu > 0.0) || !(dim as f64 * lambda + 2.0 * mu > 0.0) {
        return Err(Error::Parameter(format!(
            "Lame operator requires mu > 0 and n*lambda + 2*mu > 0 (mu = {mu}, lambda = {lambda})"
        )));
    }
    let m = grid.len();
    let mut out = SpectralField::vector_zeros(&grid);
    for mode in 1..m {
        let k = grid.k(mode);
        let k2 = grid.kmod(mode).powi(2);
        let mut kdotu = Complex64::new(0.0, 0.0);
        for axis in 0..dim {
            kdotu += k[axis] * u.comp(axis)[mode];
        }
        for axis in 0..dim {
            out.comp_mut(axis)[mode] =
                -mu * k2 * u.comp(axis)[mode] - (lambda + mu) * k[axis] * kdotu;
        }
    }
    Ok(out)
}

/// Keeps modes with `|m_axis| <= N/3` on every axis.
pub fn dealias_mask(f: &SpectralField) -> Vec<bool> {
    let grid = f.grid();
    (0..grid.len()).map(|mode| grid.dealias_keeps(mode)).collect()
}

/// 2/3-rule truncation.
pub fn dealias(f: &SpectralField) -> SpectralField {
    let mut out = f.clone();
    dealias_in_place(&mut out);
    out
}

pub fn dealias_in_place(f: &mut SpectralField) {
    let grid = f.grid().clone();
    let m = grid.len();
    for chunk in f.coeffs_mut().chunks_mut(m) {
        dealias_coeffs(&grid, chunk);
    }
}

pub(crate) fn dealias_coeffs(grid: &Grid, coeffs: &mut [Complex64]) {
    for (mode, z) in coeffs.iter_mut().enumerate() {
        if !grid.dealias_keeps(mode) {
            *z = Complex64::new(0.0, 0.0);
        }
    }
}

/// Coefficients of `d/dx_axis` applied to one component.
pub(crate) fn derivative_coeffs(grid: &Grid, src: &[Complex64], axis: usize) -> Vec<Complex64> {
    src.iter()
        .enumerate()
        .map(|(mode, z)| {
            if grid.is_nyquist(mode) {
                Complex64::new(0.0, 0.0)
            } else {
                z * I * grid.k(mode)[axis]
            }
        })
        .collect()
}

/// Pointwise product of two fields, 2/3-dealiased. A scalar times a vector
/// multiplies each component.
pub fn product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    let grid = f.grid().clone();
    if **g.grid() != *grid {
        return Err(Error::Config("product of fields on different grids".into()));
    }
    let m = grid.len();
    let pf = f.to_physical();
    let pg = g.to_physical();
    let (ncomp, samples) = match (f.ncomp(), g.ncomp()) {
        (a, b) if a == b => (a, pf.iter().zip(&pg).map(|(x, y)| x * y).collect::<Vec<_>>()),
        (1, b) => (
            b,
            (0..b * m).map(|i| pf[i % m] * pg[i]).collect::<Vec<_>>(),
        ),
        (a, 1) => (
            a,
            (0..a * m).map(|i| pf[i] * pg[i % m]).collect::<Vec<_>>(),
        ),
        (a, b) => {
            return Err(Error::Config(format!(
                "cannot multiply fields with {a} and {b} components"
            )))
        }
    };
    let mut out = SpectralField::from_physical(&grid, ncomp, &samples)?;
    dealias_in_place(&mut out);
    Ok(out)
}

/// `(u . grad) w` for a scalar or vector `w`, dealiased.
pub fn advection(u: &SpectralField, w: &SpectralField) -> Result<SpectralField> {
    require_vector(u, "advection")?;
    let grid = u.grid().clone();
    let dim = grid.dim();
    let m = grid.len();
    let pu = u.to_physical();
    let mut acc = vec![0.0; w.ncomp() * m];
    for axis in 0..dim {
        let dw = derivative(w, axis)?.to_physical();
        for (i, v) in acc.iter_mut().enumerate() {
            *v += pu[axis * m + i % m] * dw[i];
        }
    }
    let mut out = SpectralField::from_physical(&grid, w.ncomp(), &acc)?;
    dealias_in_place(&mut out);
    Ok(out)
}

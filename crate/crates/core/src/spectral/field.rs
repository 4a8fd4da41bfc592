use std::sync::Arc;

use num_complex::Complex64;

use super::Grid;
use crate::error::{Error, Result};

/// Real periodic field stored by its Fourier coefficients.
///
/// Components are stored one after the other; scalars have one component,
/// vector fields `n`.
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Arc<Grid>,
    ncomp: usize,
    coeffs: Vec<Complex64>,
}

impl PartialEq for SpectralField {
    fn eq(&self, other: &Self) -> bool {
        *self.grid == *other.grid && self.ncomp == other.ncomp && self.coeffs == other.coeffs
    }
}

impl SpectralField {
    pub fn zeros(grid: &Arc<Grid>, ncomp: usize) -> Self {
        SpectralField {
            grid: grid.clone(),
            ncomp,
            coeffs: vec![Complex64::new(0.0, 0.0); ncomp * grid.len()],
        }
    }

    pub fn scalar_zeros(grid: &Arc<Grid>) -> Self {
        Self::zeros(grid, 1)
    }

    pub fn vector_zeros(grid: &Arc<Grid>) -> Self {
        Self::zeros(grid, grid.dim())
    }

    pub fn from_coeffs(grid: &Arc<Grid>, ncomp: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != ncomp * grid.len() {
            return Err(Error::Config(format!(
                "coefficient array has {} entries, expected {}",
                coeffs.len(),
                ncomp * grid.len()
            )));
        }
        Ok(SpectralField {
            grid: grid.clone(),
            ncomp,
            coeffs,
        })
    }

    /// Forward transform of physical samples, component-major.
    pub fn from_physical(grid: &Arc<Grid>, ncomp: usize, samples: &[f64]) -> Result<Self> {
        let m = grid.len();
        if samples.len() != ncomp * m {
            return Err(Error::Config(format!(
                "sample array has {} entries, expected {} ({} components on {} points)",
                samples.len(),
                ncomp * m,
                ncomp,
                m
            )));
        }
        let mut coeffs = Vec::with_capacity(ncomp * m);
        let mut c = 0;
        while c + 1 < ncomp {
            let (f, g) = grid.forward_pair(&samples[c * m..(c + 1) * m], &samples[(c + 1) * m..(c + 2) * m]);
            coeffs.extend(f);
            coeffs.extend(g);
            c += 2;
        }
        if c < ncomp {
            coeffs.extend(grid.forward(&samples[c * m..])?);
        }
        Ok(SpectralField {
            grid: grid.clone(),
            ncomp,
            coeffs,
        })
    }

    /// Samples a function of position on the grid.
    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(&[f64]) -> f64) -> Self {
        let samples: Vec<f64> = (0..grid.len())
            .map(|i| f(&grid.position(i)[..grid.dim()]))
            .collect();
        Self::from_physical(grid, 1, &samples).expect("shape matches grid")
    }

    /// Samples a vector-valued function of position.
    pub fn vector_from_fn(grid: &Arc<Grid>, f: impl Fn(&[f64], usize) -> f64) -> Self {
        let dim = grid.dim();
        let mut samples = Vec::with_capacity(dim * grid.len());
        for c in 0..dim {
            samples.extend((0..grid.len()).map(|i| f(&grid.position(i)[..dim], c)));
        }
        Self::from_physical(grid, dim, &samples).expect("shape matches grid")
    }

    /// Physical samples, component-major.
    pub fn to_physical(&self) -> Vec<f64> {
        let m = self.grid.len();
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut c = 0;
        while c + 1 < self.ncomp {
            let (f, g) = self.grid.inverse_pair(self.comp(c), self.comp(c + 1));
            out.extend(f);
            out.extend(g);
            c += 2;
        }
        if c < self.ncomp {
            out.extend(self.grid.inverse(&self.coeffs[c * m..]));
        }
        out
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn comp(&self, c: usize) -> &[Complex64] {
        let m = self.grid.len();
        &self.coeffs[c * m..(c + 1) * m]
    }

    pub fn comp_mut(&mut self, c: usize) -> &mut [Complex64] {
        let m = self.grid.len();
        &mut self.coeffs[c * m..(c + 1) * m]
    }

    /// Extracts one component as a scalar field.
    pub fn component(&self, c: usize) -> SpectralField {
        SpectralField {
            grid: self.grid.clone(),
            ncomp: 1,
            coeffs: self.comp(c).to_vec(),
        }
    }

    /// Stacks scalar fields into a vector field.
    pub fn stack(parts: &[SpectralField]) -> Result<SpectralField> {
        let grid = parts
            .first()
            .ok_or_else(|| Error::Config("cannot stack zero fields".into()))?
            .grid
            .clone();
        let mut coeffs = Vec::with_capacity(parts.len() * grid.len());
        for p in parts {
            if *p.grid != *grid || p.ncomp != 1 {
                return Err(Error::Config("stack expects scalars on one grid".into()));
            }
            coeffs.extend_from_slice(&p.coeffs);
        }
        Ok(SpectralField {
            grid,
            ncomp: parts.len(),
            coeffs,
        })
    }

    pub(crate) fn check_same(&self, other: &SpectralField) {
        assert!(
            *self.grid == *other.grid && self.ncomp == other.ncomp,
            "field shape mismatch"
        );
    }

    /// Multiplies each mode by a real symbol depending only on the mode index.
    pub fn map_symbol(&self, symbol: impl Fn(usize) -> f64) -> SpectralField {
        let m = self.grid.len();
        let mut out = self.clone();
        for c in 0..self.ncomp {
            for (mode, z) in out.coeffs[c * m..(c + 1) * m].iter_mut().enumerate() {
                *z *= symbol(mode);
            }
        }
        out
    }

    pub fn scale(&self, alpha: f64) -> SpectralField {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|z| *z *= alpha);
        out
    }

    pub fn add(&self, other: &SpectralField) -> SpectralField {
        self.lin_comb(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &SpectralField) -> SpectralField {
        self.lin_comb(1.0, other, -1.0)
    }

    /// `alpha * self + beta * other`.
    pub fn lin_comb(&self, alpha: f64, other: &SpectralField, beta: f64) -> SpectralField {
        self.check_same(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        SpectralField {
            grid: self.grid.clone(),
            ncomp: self.ncomp,
            coeffs,
        }
    }

    /// `self += alpha * other`.
    pub fn axpy(&mut self, alpha: f64, other: &SpectralField) {
        self.check_same(other);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += alpha * b;
        }
    }

    /// Mean value (real part of the zero mode) of component `c`.
    pub fn mean(&self, c: usize) -> f64 {
        self.comp(c)[0].re
    }

    pub fn zero_mode_is_zero(&self) -> bool {
        let m = self.grid.len();
        (0..self.ncomp).all(|c| self.coeffs[c * m] == Complex64::new(0.0, 0.0))
    }

    /// Sets the zero mode of every component to exactly zero.
    pub fn remove_mean(&mut self) {
        let m = self.grid.len();
        for c in 0..self.ncomp {
            self.coeffs[c * m] = Complex64::new(0.0, 0.0);
        }
    }

    /// Sum of squared coefficient moduli (no volume factor).
    pub fn coeff_norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `L^2` norm over the periodic box, via Parseval.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.volume() * self.coeff_norm_sqr()).sqrt()
    }

    /// `L^2` inner product over the box (summed over components).
    pub fn inner(&self, other: &SpectralField) -> f64 {
        self.check_same(other);
        let s: f64 = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a * b.conj()).re)
            .sum();
        self.grid.volume() * s
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest violation of `c(-k) = conj(c(k))`, relative to the largest coefficient.
    pub fn hermitian_defect(&self) -> f64 {
        let m = self.grid.len();
        let scale = self.max_abs_coeff();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for c in 0..self.ncomp {
            let comp = self.comp(c);
            for mode in 0..m {
                let partner = self.grid.conjugate_mode(mode);
                worst = worst.max((comp[mode] - comp[partner].conj()).norm());
            }
        }
        worst / scale
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

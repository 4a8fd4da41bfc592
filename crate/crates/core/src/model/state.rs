use std::sync::Arc;

use super::FluidParams;
use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

/// `(rho, u, theta)`: density, velocity, potential temperature.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimitiveState {
    pub rho: SpectralField,
    pub u: SpectralField,
    pub theta: SpectralField,
}

/// `(rho, u, P)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PressureState {
    pub rho: SpectralField,
    pub u: SpectralField,
    pub p: SpectralField,
}

/// `(a, u, b)` with `rho = 1 + a`, `P = 1 + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationState {
    pub a: SpectralField,
    pub u: SpectralField,
    pub b: SpectralField,
}

/// `(rho, u, s)` with `s = rho theta`, the variables the divergence-form
/// system is integrated in.
#[derive(Clone, Debug, PartialEq)]
pub struct ConservedState {
    pub rho: SpectralField,
    pub u: SpectralField,
    pub s: SpectralField,
}

fn min_of(samples: &[f64]) -> f64 {
    samples.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Minimum of a scalar field over the grid points.
pub fn grid_min(f: &SpectralField) -> f64 {
    min_of(&f.to_physical())
}

/// `P = A (rho theta)^gamma`, evaluated pointwise.
pub fn pressure_law(rho: &SpectralField, theta: &SpectralField, params: &FluidParams) -> Result<SpectralField> {
    let r = rho.to_physical();
    let th = theta.to_physical();
    if min_of(&r) <= 0.0 || min_of(&th) <= 0.0 {
        return Err(Error::Domain(format!(
            "pressure law needs positive density and temperature (min rho = {}, min theta = {})",
            min_of(&r),
            min_of(&th)
        )));
    }
    let p: Vec<f64> = r
        .iter()
        .zip(&th)
        .map(|(x, y)| params.pressure_const * (x * y).powf(params.gamma))
        .collect();
    SpectralField::from_physical(rho.grid(), 1, &p)
}

pub fn to_pressure_form(state: &PrimitiveState, params: &FluidParams) -> Result<PressureState> {
    Ok(PressureState {
        rho: state.rho.clone(),
        u: state.u.clone(),
        p: pressure_law(&state.rho, &state.theta, params)?,
    })
}

fn shift_mean(f: &SpectralField, by: f64) -> SpectralField {
    let mut out = f.clone();
    out.coeffs_mut()[0].re += by;
    out
}

/// `a = rho - 1`, `b = P - 1`. The mean of `a` must vanish and `1 + a` must
/// stay above the density floor.
pub fn to_perturbation(state: &PressureState, params: &FluidParams) -> Result<PerturbationState> {
    let a = shift_mean(&state.rho, -1.0);
    let mean = a.mean(0);
    if mean.abs() > 1e-12 * state.rho.max_abs_coeff().max(1.0) {
        return Err(Error::State(format!(
            "density perturbation must have zero mean, got {mean}"
        )));
    }
    let out = PerturbationState {
        a,
        u: state.u.clone(),
        b: shift_mean(&state.p, -1.0),
    };
    out.check_admissible(params)?;
    Ok(out)
}

pub fn from_perturbation(state: &PerturbationState) -> PressureState {
    PressureState {
        rho: shift_mean(&state.a, 1.0),
        u: state.u.clone(),
        p: shift_mean(&state.b, 1.0),
    }
}

/// Recovers `theta = (P/A)^{1/gamma} / rho` pointwise.
pub fn primitive_from_pressure(state: &PressureState, params: &FluidParams) -> Result<PrimitiveState> {
    let r = state.rho.to_physical();
    let p = state.p.to_physical();
    if min_of(&r) <= 0.0 || min_of(&p) <= 0.0 {
        return Err(Error::Domain("density and pressure must be positive".into()));
    }
    let theta: Vec<f64> = r
        .iter()
        .zip(&p)
        .map(|(rho, p)| (p / params.pressure_const).powf(1.0 / params.gamma) / rho)
        .collect();
    Ok(PrimitiveState {
        rho: state.rho.clone(),
        u: state.u.clone(),
        theta: SpectralField::from_physical(state.rho.grid(), 1, &theta)?,
    })
}

impl PrimitiveState {
    pub fn to_conserved(&self) -> Result<ConservedState> {
        let r = self.rho.to_physical();
        let th = self.theta.to_physical();
        let s: Vec<f64> = r.iter().zip(&th).map(|(x, y)| x * y).collect();
        Ok(ConservedState {
            rho: self.rho.clone(),
            u: self.u.clone(),
            s: SpectralField::from_physical(self.rho.grid(), 1, &s)?,
        })
    }
}

impl ConservedState {
    pub fn to_primitive(&self) -> Result<PrimitiveState> {
        let r = self.rho.to_physical();
        if min_of(&r) <= 0.0 {
            return Err(Error::State(format!("density lost positivity (min {})", min_of(&r))));
        }
        let s = self.s.to_physical();
        let th: Vec<f64> = s.iter().zip(&r).map(|(s, r)| s / r).collect();
        Ok(PrimitiveState {
            rho: self.rho.clone(),
            u: self.u.clone(),
            theta: SpectralField::from_physical(self.rho.grid(), 1, &th)?,
        })
    }

    /// `A s^gamma`, pointwise.
    pub fn pressure(&self, params: &FluidParams) -> Result<SpectralField> {
        let s = self.s.to_physical();
        if min_of(&s) <= 0.0 {
            return Err(Error::Domain("rho theta must be positive".into()));
        }
        let p: Vec<f64> = s
            .iter()
            .map(|s| params.pressure_const * s.powf(params.gamma))
            .collect();
        SpectralField::from_physical(self.s.grid(), 1, &p)
    }

    /// `alpha * self + beta * other`, fieldwise.
    pub fn lin_comb(&self, alpha: f64, other: &Self, beta: f64) -> Self {
        ConservedState {
            rho: self.rho.lin_comb(alpha, &other.rho, beta),
            u: self.u.lin_comb(alpha, &other.u, beta),
            s: self.s.lin_comb(alpha, &other.s, beta),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.rho.is_finite() && self.u.is_finite() && self.s.is_finite()
    }
}

/// `(int rho, int rho theta)` by grid quadrature.
pub fn conserved_integrals(state: &PrimitiveState) -> Result<(f64, f64)> {
    let c = state.to_conserved()?;
    let vol = state.rho.grid().volume();
    Ok((vol * c.rho.mean(0), vol * c.s.mean(0)))
}

impl PerturbationState {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        PerturbationState {
            a: SpectralField::scalar_zeros(grid),
            u: SpectralField::vector_zeros(grid),
            b: SpectralField::scalar_zeros(grid),
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.a.grid()
    }

    /// `alpha * self + beta * other`, fieldwise.
    pub fn lin_comb(&self, alpha: f64, other: &Self, beta: f64) -> Self {
        PerturbationState {
            a: self.a.lin_comb(alpha, &other.a, beta),
            u: self.u.lin_comb(alpha, &other.u, beta),
            b: self.b.lin_comb(alpha, &other.b, beta),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.lin_comb(1.0, other, 1.0)
    }

    pub fn scale(&self, alpha: f64) -> Self {
        PerturbationState {
            a: self.a.scale(alpha),
            u: self.u.scale(alpha),
            b: self.b.scale(alpha),
        }
    }

    pub fn axpy(&mut self, alpha: f64, other: &Self) {
        self.a.axpy(alpha, &other.a);
        self.u.axpy(alpha, &other.u);
        self.b.axpy(alpha, &other.b);
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.u.is_finite() && self.b.is_finite()
    }

    /// Sum of coefficient `l^2` norms of the three fields, a size measure.
    pub fn l2_norm(&self) -> f64 {
        (self.a.l2_norm().powi(2) + self.u.l2_norm().powi(2) + self.b.l2_norm().powi(2)).sqrt()
    }

    /// `1 + a` above the floor and `1 + b > 0` at every grid point.
    pub fn check_admissible(&self, params: &FluidParams) -> Result<()> {
        let amin = grid_min(&self.a);
        if !(1.0 + amin > params.density_floor) {
            return Err(Error::State(format!(
                "density 1 + a fell to {} (floor {})",
                1.0 + amin,
                params.density_floor
            )));
        }
        let bmin = grid_min(&self.b);
        if !(1.0 + bmin > 0.0) {
            return Err(Error::State(format!("pressure 1 + b fell to {}", 1.0 + bmin)));
        }
        Ok(())
    }
}

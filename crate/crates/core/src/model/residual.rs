//! Discrete residuals of evolution identities satisfied by the solution.
//!
//! Each check takes two states `s0`, `s1 = s(t + h)` and evaluates
//! `(X1 - X0)/h - (R0 + R1)/2` for an identity `dX/dt = R`, relative to the
//! sum of the norms of the individual terms. Zero modes are excluded.

use super::nonlinear::nonlinear_force;
use super::state::PerturbationState;
use super::unknowns::{effective_velocity, good_unknown_phi};
use super::FluidParams;
use crate::error::Result;
use crate::spectral::ops::{
    advection, divergence, helmholtz, inverse_laplacian_gradient, laplacian, product,
};
use crate::spectral::SpectralField;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    /// `L^2` norm of the residual.
    pub abs: f64,
    /// Sum of the `L^2` norms of the terms of the identity.
    pub scale: f64,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.abs / self.scale
        } else {
            self.abs
        }
    }
}

fn no_mean(f: &SpectralField) -> SpectralField {
    let mut out = f.clone();
    out.remove_mean();
    out
}

/// Residual of `dX/dt = sum_i terms_i` between two samples.
pub fn trapezoid_residual(
    x0: &SpectralField,
    x1: &SpectralField,
    h: f64,
    terms0: &[SpectralField],
    terms1: &[SpectralField],
) -> Residual {
    let dx = no_mean(&x1.sub(x0).scale(1.0 / h));
    let mut res = dx.clone();
    let mut scale = dx.l2_norm();
    for (t0, t1) in terms0.iter().zip(terms1) {
        let avg = no_mean(&t0.lin_comb(0.5, t1, 0.5));
        scale += avg.l2_norm();
        res.axpy(-1.0, &avg);
    }
    Residual {
        abs: res.l2_norm(),
        scale,
    }
}

fn phi_terms(s: &PerturbationState, params: &FluidParams) -> Result<Vec<SpectralField>> {
    let phi = good_unknown_phi(&s.a, &s.b, params);
    let div = divergence(&s.u)?;
    Ok(vec![
        advection(&s.u, &phi)?.scale(-1.0),
        product(&s.a.sub(&s.b), &div)?.scale(-params.gamma),
    ])
}

/// `phi_t + u.grad phi + gamma (a - b) div u = 0`.
pub fn residual_phi_equation(
    s0: &PerturbationState,
    s1: &PerturbationState,
    h: f64,
    params: &FluidParams,
) -> Result<Residual> {
    Ok(trapezoid_residual(
        &good_unknown_phi(&s0.a, &s0.b, params),
        &good_unknown_phi(&s1.a, &s1.b, params),
        h,
        &phi_terms(s0, params)?,
        &phi_terms(s1, params)?,
    ))
}

/// Right-hand side of the effective-velocity equation
/// `G_t - nu Delta G = (gamma/nu) G + (gamma/nu^2) Delta^{-1} grad b
///   + (1/nu) Q(b u) + ((gamma-1)/nu) Delta^{-1} grad(b div u) - Q(u.grad u) + QF`,
/// with `nu Delta G` moved to the right.
fn g_terms(s: &PerturbationState, params: &FluidParams) -> Result<Vec<SpectralField>> {
    let nu = params.nu_q();
    let gamma = params.gamma;
    let g = effective_velocity(&s.u, &s.b, params)?;
    let div = divergence(&s.u)?;
    let q = |f: &SpectralField| helmholtz(f).map(|(_, q)| q);
    Ok(vec![
        laplacian(&g).scale(nu),
        g.scale(gamma / nu),
        inverse_laplacian_gradient(&s.b)?.scale(gamma / (nu * nu)),
        q(&product(&s.b, &s.u)?)?.scale(1.0 / nu),
        inverse_laplacian_gradient(&product(&s.b, &div)?)?.scale((gamma - 1.0) / nu),
        q(&advection(&s.u, &s.u)?)?.scale(-1.0),
        q(&nonlinear_force(&s.a, &s.u, &s.b, params)?)?,
    ])
}

/// Effective-velocity equation residual. The identity is stated for general
/// `nu_Q`; `paper_form` is true when `nu_Q = 2`, where it is the classical one.
#[derive(Clone, Copy, Debug)]
pub struct GResidual {
    pub residual: Residual,
    pub paper_form: bool,
}

pub fn residual_g_equation(
    s0: &PerturbationState,
    s1: &PerturbationState,
    h: f64,
    params: &FluidParams,
) -> Result<GResidual> {
    let residual = trapezoid_residual(
        &effective_velocity(&s0.u, &s0.b, params)?,
        &effective_velocity(&s1.u, &s1.b, params)?,
        h,
        &g_terms(s0, params)?,
        &g_terms(s1, params)?,
    );
    Ok(GResidual {
        residual,
        paper_form: params.nu_q() == 2.0,
    })
}

fn damped_b_terms(s: &PerturbationState, params: &FluidParams) -> Result<Vec<SpectralField>> {
    let g = effective_velocity(&s.u, &s.b, params)?;
    let div = divergence(&s.u)?;
    Ok(vec![
        s.b.scale(-params.gamma / params.nu_q()),
        advection(&s.u, &s.b)?.scale(-1.0),
        divergence(&g)?.scale(-params.gamma),
        product(&s.b, &div)?.scale(-params.gamma),
    ])
}

/// `b_t + (gamma/nu) b + u.grad b = -gamma div G - gamma b div u`.
pub fn residual_damped_b(
    s0: &PerturbationState,
    s1: &PerturbationState,
    h: f64,
    params: &FluidParams,
) -> Result<Residual> {
    Ok(trapezoid_residual(
        &s0.b,
        &s1.b,
        h,
        &damped_b_terms(s0, params)?,
        &damped_b_terms(s1, params)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn equilibrium_has_no_residual() {
        let g = Grid::new(2, 16, 1.0).unwrap();
        let z = PerturbationState::zeros(&g);
        let p = FluidParams::default();
        assert_eq!(residual_phi_equation(&z, &z, 1e-3, &p).unwrap().abs, 0.0);
        let r = residual_g_equation(&z, &z, 1e-3, &p).unwrap();
        assert_eq!(r.residual.abs, 0.0);
        assert!(r.paper_form);
        assert_eq!(residual_damped_b(&z, &z, 1e-3, &p).unwrap().abs, 0.0);
    }

    #[test]
    fn mismatched_pair_is_flagged() {
        let g = Grid::new(2, 16, 1.0).unwrap();
        let p = FluidParams::default();
        let s0 = PerturbationState {
            a: SpectralField::from_fn(&g, |x| 1e-3 * x[0].cos()),
            u: SpectralField::vector_from_fn(&g, |x, c| 1e-3 * [x[1].sin(), x[0].cos()][c]),
            b: SpectralField::from_fn(&g, |x| 1e-3 * x[1].cos()),
        };
        let mut s1 = s0.clone();
        s1.b = SpectralField::from_fn(&g, |x| 1e-3 * (x[0] + x[1]).sin());
        assert!(residual_phi_equation(&s0, &s1, 1e-4, &p).unwrap().relative() > 0.5);
        assert!(residual_g_equation(&s0, &s1, 1e-4, &p).unwrap().residual.relative() > 0.1);
    }
}

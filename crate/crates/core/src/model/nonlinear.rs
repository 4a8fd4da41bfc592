use num_complex::Complex64;

use super::state::{ConservedState, PerturbationState, PrimitiveState};
use super::FluidParams;
use crate::error::{Error, Result};
use crate::spectral::ops::{
    advection, dealias_coeffs, derivative_coeffs, divergence, gradient, lame_operator, product,
};
use crate::spectral::SpectralField;

fn check_floor(a_phys: &[f64], floor: f64) -> Result<()> {
    let amin = a_phys.iter().copied().fold(f64::INFINITY, f64::min);
    if !(1.0 + amin > floor) {
        return Err(Error::State(format!(
            "density 1 + a fell to {} (floor {floor})",
            1.0 + amin
        )));
    }
    Ok(())
}

/// `I(a) = a / (1 + a)`, pointwise.
pub fn rational_density_fn(a: &SpectralField, params: &FluidParams) -> Result<SpectralField> {
    let pa = a.to_physical();
    check_floor(&pa, params.density_floor)?;
    let ia: Vec<f64> = pa.iter().map(|x| x / (1.0 + x)).collect();
    SpectralField::from_physical(a.grid(), 1, &ia)
}

/// `F = I(a) grad b - I(a) A u`, formed pointwise and dealiased.
pub fn nonlinear_force(
    a: &SpectralField,
    u: &SpectralField,
    b: &SpectralField,
    params: &FluidParams,
) -> Result<SpectralField> {
    let pa = a.to_physical();
    check_floor(&pa, params.density_floor)?;
    let ia: Vec<f64> = pa.iter().map(|x| x / (1.0 + x)).collect();
    let force = gradient(b)?.sub(&lame_operator(u, params.mu, params.lambda)?);
    let pf = force.to_physical();
    let m = a.grid().len();
    let samples: Vec<f64> = pf.iter().enumerate().map(|(i, f)| ia[i % m] * f).collect();
    let mut out = SpectralField::from_physical(a.grid(), u.ncomp(), &samples)?;
    crate::spectral::ops::dealias_in_place(&mut out);
    Ok(out)
}

/// Linear part of the perturbation system: `(-div u, A u - grad b, -gamma div u)`.
pub fn linear_part(state: &PerturbationState, params: &FluidParams) -> Result<PerturbationState> {
    let div = divergence(&state.u)?;
    Ok(PerturbationState {
        a: div.scale(-1.0),
        u: lame_operator(&state.u, params.mu, params.lambda)?.sub(&gradient(&state.b)?),
        b: div.scale(-params.gamma),
    })
}

/// Nonlinear part: `(-div(a u), -u.grad u + F, -u.grad b - gamma b div u)`.
///
/// All products are formed on the grid and 2/3-dealiased. The mass flux is
/// kept in divergence form so the mean of `a` is conserved exactly.
pub fn nonlinear_part(state: &PerturbationState, params: &FluidParams) -> Result<PerturbationState> {
    let grid = state.grid().clone();
    let dim = grid.dim();
    let m = grid.len();
    let lame = lame_operator(&state.u, params.mu, params.lambda)?;

    let mut spec: Vec<Vec<Complex64>> = Vec::with_capacity(2 + 2 * dim + dim * dim + dim);
    spec.push(state.a.comp(0).to_vec());
    spec.push(state.b.comp(0).to_vec());
    for i in 0..dim {
        spec.push(state.u.comp(i).to_vec());
    }
    for i in 0..dim {
        for j in 0..dim {
            spec.push(derivative_coeffs(&grid, state.u.comp(i), j));
        }
    }
    for j in 0..dim {
        spec.push(derivative_coeffs(&grid, state.b.comp(0), j));
    }
    for i in 0..dim {
        spec.push(lame.comp(i).to_vec());
    }
    let refs: Vec<&[Complex64]> = spec.iter().map(|v| v.as_slice()).collect();
    let phys = grid.inverse_many(&refs);
    let pa = &phys[0];
    let pb = &phys[1];
    let pu = &phys[2..2 + dim];
    let du = &phys[2 + dim..2 + dim + dim * dim];
    let db = &phys[2 + dim + dim * dim..2 + 2 * dim + dim * dim];
    let pl = &phys[2 + 2 * dim + dim * dim..];
    check_floor(pa, params.density_floor)?;

    let mut samples: Vec<Vec<f64>> = vec![vec![0.0; m]; 2 * dim + 1];
    for x in 0..m {
        let ia = pa[x] / (1.0 + pa[x]);
        let mut div = 0.0;
        let mut ub = 0.0;
        for j in 0..dim {
            div += du[j * dim + j][x];
            ub += pu[j][x] * db[j][x];
        }
        for i in 0..dim {
            samples[i][x] = pa[x] * pu[i][x];
            let mut adv = 0.0;
            for j in 0..dim {
                adv += pu[j][x] * du[i * dim + j][x];
            }
            samples[dim + i][x] = -adv + ia * (db[i][x] - pl[i][x]);
        }
        samples[2 * dim][x] = -ub - params.gamma * pb[x] * div;
    }
    let mut coeffs = grid.forward_many(&samples);
    for c in coeffs.iter_mut() {
        dealias_coeffs(&grid, c);
    }
    let flux = SpectralField::from_coeffs(&grid, dim, coeffs[..dim].concat())?;
    Ok(PerturbationState {
        a: divergence(&flux)?.scale(-1.0),
        u: SpectralField::from_coeffs(&grid, dim, coeffs[dim..2 * dim].concat())?,
        b: SpectralField::from_coeffs(&grid, 1, coeffs[2 * dim].clone())?,
    })
}

/// Tendencies `(da/dt, du/dt, db/dt)` of the perturbation system.
pub fn rhs_mm3(state: &PerturbationState, params: &FluidParams) -> Result<PerturbationState> {
    Ok(linear_part(state, params)?.add(&nonlinear_part(state, params)?))
}

/// Tendencies of the divergence-form system in `(rho, u, s = rho theta)`:
/// `rho_t = -div(rho u)`, `s_t = -div(s u)`,
/// `u_t = -u.grad u + (A u - grad P) / rho` with `P = A_p s^gamma`.
pub fn rhs_conserved(state: &ConservedState, params: &FluidParams) -> Result<ConservedState> {
    let grid = state.rho.grid().clone();
    let m = grid.len();
    let dim = grid.dim();
    let pr = state.rho.to_physical();
    let rmin = pr.iter().copied().fold(f64::INFINITY, f64::min);
    if !(rmin > 0.0) {
        return Err(Error::State(format!("density lost positivity (min {rmin})")));
    }
    let p = state.pressure(params)?;
    let force = lame_operator(&state.u, params.mu, params.lambda)?.sub(&gradient(&p)?);
    let pf = force.to_physical();
    let acc: Vec<f64> = pf.iter().enumerate().map(|(i, f)| f / pr[i % m]).collect();
    let mut accel = SpectralField::from_physical(&grid, dim, &acc)?;
    crate::spectral::ops::dealias_in_place(&mut accel);
    Ok(ConservedState {
        rho: divergence(&product(&state.rho, &state.u)?)?.scale(-1.0),
        u: accel.sub(&advection(&state.u, &state.u)?),
        s: divergence(&product(&state.s, &state.u)?)?.scale(-1.0),
    })
}

/// Tendencies `(rho_t, u_t, theta_t)`; `theta_t = (s_t - theta rho_t) / rho`.
pub fn rhs_mm1(state: &PrimitiveState, params: &FluidParams) -> Result<PrimitiveState> {
    let c = state.to_conserved()?;
    let t = rhs_conserved(&c, params)?;
    let pr = state.rho.to_physical();
    let pth = state.theta.to_physical();
    let pdr = t.rho.to_physical();
    let pds = t.s.to_physical();
    let dtheta: Vec<f64> = (0..pr.len())
        .map(|i| (pds[i] - pth[i] * pdr[i]) / pr[i])
        .collect();
    Ok(PrimitiveState {
        rho: t.rho,
        u: t.u,
        theta: SpectralField::from_physical(state.rho.grid(), 1, &dtheta)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use std::sync::Arc;

    fn grid() -> Arc<Grid> {
        Grid::new(2, 32, 1.0).unwrap()
    }

    fn smooth_state(g: &Arc<Grid>, eps: f64) -> PerturbationState {
        PerturbationState {
            a: SpectralField::from_fn(g, |x| eps * (x[0].cos() + 0.5 * (x[1] + 0.3).sin())),
            u: SpectralField::vector_from_fn(g, |x, c| {
                eps * [(x[1]).sin() + 0.2 * (2.0 * x[0]).cos(), (x[0] - 0.4).cos()][c]
            }),
            b: SpectralField::from_fn(g, |x| eps * ((x[0] + x[1]).sin() - 0.3 * (2.0 * x[1]).cos())),
        }
    }

    #[test]
    fn rational_density_values() {
        let g = grid();
        let p = FluidParams::default();
        let zero = SpectralField::scalar_zeros(&g);
        assert_eq!(rational_density_fn(&zero, &p).unwrap().max_abs_coeff(), 0.0);
        let half = SpectralField::from_fn(&g, |_| -0.5);
        let ia = rational_density_fn(&half, &p).unwrap();
        assert!(ia.to_physical().iter().all(|v| (v + 1.0).abs() < 1e-14));
        let deep = SpectralField::from_fn(&g, |_| -0.95);
        assert!(matches!(rational_density_fn(&deep, &p), Err(Error::State(_))));
    }

    #[test]
    fn equilibrium_is_fixed() {
        let g = grid();
        let r = rhs_mm3(&PerturbationState::zeros(&g), &FluidParams::default()).unwrap();
        assert_eq!(r.l2_norm(), 0.0);
    }

    #[test]
    fn force_vanishes_without_density_perturbation() {
        let g = grid();
        let s = smooth_state(&g, 0.1);
        let f = nonlinear_force(&SpectralField::scalar_zeros(&g), &s.u, &s.b, &FluidParams::default()).unwrap();
        assert_eq!(f.max_abs_coeff(), 0.0);
    }

    #[test]
    fn structure_at_rest() {
        // u = 0: da = db = 0 and du = -(1 - I(a)) grad b
        let g = grid();
        let p = FluidParams::default();
        let mut s = smooth_state(&g, 0.1);
        s.u = SpectralField::vector_zeros(&g);
        let r = rhs_mm3(&s, &p).unwrap();
        assert!(r.a.max_abs_coeff() < 1e-16);
        assert!(r.b.max_abs_coeff() < 1e-16);
        let ia = rational_density_fn(&s.a, &p).unwrap();
        let grad_b = gradient(&s.b).unwrap();
        let expect = grad_b.sub(&product(&ia, &grad_b).unwrap()).scale(-1.0);
        assert!(r.u.sub(&expect).l2_norm() < 1e-13 * expect.l2_norm());
    }

    #[test]
    fn divergence_form_matches_expanded_mass_equation() {
        let g = grid();
        let p = FluidParams::default();
        let s = smooth_state(&g, 0.2);
        let n = nonlinear_part(&s, &p).unwrap();
        let div = divergence(&s.u).unwrap();
        let expanded = advection(&s.u, &s.a)
            .unwrap()
            .add(&product(&s.a, &div).unwrap())
            .scale(-1.0);
        assert!(n.a.sub(&expanded).l2_norm() < 1e-13 * expanded.l2_norm());
        assert!(n.a.mean(0).abs() < 1e-17);
    }

    #[test]
    fn fast_path_matches_field_operations() {
        let g = grid();
        let p = FluidParams { lambda: 0.3, gamma: 1.7, ..Default::default() };
        let s = smooth_state(&g, 0.3);
        let n = nonlinear_part(&s, &p).unwrap();
        let f = nonlinear_force(&s.a, &s.u, &s.b, &p).unwrap();
        let nu = f.sub(&advection(&s.u, &s.u).unwrap());
        assert!(n.u.sub(&nu).l2_norm() < 1e-13 * nu.l2_norm());
        let div = divergence(&s.u).unwrap();
        let nb = advection(&s.u, &s.b)
            .unwrap()
            .add(&product(&s.b, &div).unwrap().scale(p.gamma))
            .scale(-1.0);
        assert!(n.b.sub(&nb).l2_norm() < 1e-13 * nb.l2_norm());
    }

    #[test]
    fn rest_state_of_primitive_system() {
        let g = grid();
        let one = SpectralField::from_fn(&g, |_| 1.0);
        let st = PrimitiveState {
            rho: one.clone(),
            u: SpectralField::vector_zeros(&g),
            theta: one,
        };
        let t = rhs_mm1(&st, &FluidParams::default()).unwrap();
        assert!(t.rho.max_abs_coeff() < 1e-15);
        assert!(t.u.max_abs_coeff() < 1e-15);
        assert!(t.theta.max_abs_coeff() < 1e-15);
    }
}

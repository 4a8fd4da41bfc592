use super::nonlinear::nonlinear_force;
use super::state::PerturbationState;
use super::FluidParams;
use crate::error::Result;
use crate::spectral::ops::{
    advection, divergence, helmholtz, inverse_laplacian_gradient, lambda_inv_div, product,
};
use crate::spectral::SpectralField;

/// `phi = gamma a - b`.
pub fn good_unknown_phi(a: &SpectralField, b: &SpectralField, params: &FluidParams) -> SpectralField {
    a.lin_comb(params.gamma, b, -1.0)
}

/// `v = Lambda^{-1} div u`.
pub fn compressible_scalar(u: &SpectralField) -> Result<SpectralField> {
    lambda_inv_div(u)
}

/// `G = Qu - (1/nu_Q) Delta^{-1} grad b`.
pub fn effective_velocity(u: &SpectralField, b: &SpectralField, params: &FluidParams) -> Result<SpectralField> {
    let (_, q) = helmholtz(u)?;
    Ok(q.lin_comb(1.0, &inverse_laplacian_gradient(b)?, -1.0 / params.nu_q()))
}

/// `(f1, f2)` with `f1 = -u.grad b - gamma b div u` and
/// `f2 = Lambda^{-1} div(-u.grad u + F)`.
pub fn low_freq_sources(state: &PerturbationState, params: &FluidParams) -> Result<(SpectralField, SpectralField)> {
    let div = divergence(&state.u)?;
    let f1 = advection(&state.u, &state.b)?
        .add(&product(&state.b, &div)?.scale(params.gamma))
        .scale(-1.0);
    let force = nonlinear_force(&state.a, &state.u, &state.b, params)?;
    let f2 = lambda_inv_div(&force.sub(&advection(&state.u, &state.u)?))?;
    Ok((f1, f2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::nonlinear::rhs_mm3;
    use crate::spectral::ops::{fractional_laplacian, gradient};
    use crate::spectral::Grid;
    use num_complex::Complex64;

    #[test]
    fn phi_values() {
        let g = Grid::new(2, 16, 1.0).unwrap();
        let p = FluidParams::default();
        let a = SpectralField::from_fn(&g, |x| 0.1 * x[0].cos());
        let b = SpectralField::from_fn(&g, |x| 0.05 * x[0].cos());
        let phi = good_unknown_phi(&a, &b, &p);
        let expect = SpectralField::from_fn(&g, |x| 0.09 * x[0].cos());
        assert!(phi.sub(&expect).l2_norm() < 1e-15);
        assert_eq!(good_unknown_phi(&a, &a.scale(p.gamma), &p).max_abs_coeff(), 0.0);
    }

    #[test]
    fn v_of_gradient_is_minus_lambda() {
        let g = Grid::new(2, 32, 2.0).unwrap();
        let f = SpectralField::from_fn(&g, |x| (1.5 * x[0]).sin() * (x[1]).cos());
        let v = compressible_scalar(&gradient(&f).unwrap()).unwrap();
        // Lambda^{-1} div grad = Lambda^{-1} Delta = -Lambda
        let lf = fractional_laplacian(&f, 1.0).unwrap();
        assert!(v.add(&lf).l2_norm() < 1e-13 * lf.l2_norm());
    }

    #[test]
    fn g_of_single_pressure_mode() {
        let g = Grid::new(2, 16, 1.0).unwrap();
        let p = FluidParams { lambda: 0.5, ..Default::default() };
        let b = SpectralField::from_fn(&g, |x| (2.0 * x[0] + x[1]).cos());
        let gv = effective_velocity(&SpectralField::vector_zeros(&g), &b, &p).unwrap();
        let mode = g.mode_of(&[2, 1]);
        let k = g.k(mode);
        let k2 = g.kmod(mode).powi(2);
        for c in 0..2 {
            let expect = Complex64::new(0.0, k[c]) * b.coeffs()[mode] / (p.nu_q() * k2);
            assert!((gv.comp(c)[mode] - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn sources_vanish_at_rest_and_rebuild_b_tendency() {
        let g = Grid::new(2, 32, 1.0).unwrap();
        let p = FluidParams::default();
        let zero = PerturbationState::zeros(&g);
        let (f1, f2) = low_freq_sources(&zero, &p).unwrap();
        assert_eq!(f1.max_abs_coeff() + f2.max_abs_coeff(), 0.0);

        let s = PerturbationState {
            a: SpectralField::from_fn(&g, |x| 0.1 * (x[0] + 0.2).cos()),
            u: SpectralField::vector_from_fn(&g, |x, c| 0.2 * [(x[1]).sin(), (x[0] + 2.0 * x[1]).cos()][c]),
            b: SpectralField::from_fn(&g, |x| 0.1 * (x[1] - x[0]).sin()),
        };
        let (f1, _) = low_freq_sources(&s, &p).unwrap();
        let v = compressible_scalar(&s.u).unwrap();
        let rebuilt = fractional_laplacian(&v, 1.0).unwrap().lin_comb(-p.gamma, &f1, 1.0);
        let db = rhs_mm3(&s, &p).unwrap().b;
        assert!(rebuilt.sub(&db).l2_norm() < 1e-10 * db.l2_norm());
    }
}

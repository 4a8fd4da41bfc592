//! Exact flow of the linearized system, mode by mode.
//!
//! In the variables `(a, b, v)` with `v = Lambda^{-1} div u`, a mode of
//! modulus `r` evolves by `M(r) = [[0, 0, -r], [0, 0, -gamma r], [0, r, -nu r^2]]`
//! while `Pu` follows the heat flow `exp(-mu r^2 t)`.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::model::{FluidParams, PerturbationState};
use crate::spectral::{Grid, SpectralField};

pub type Mat3 = [[f64; 3]; 3];

/// `M(r)` acting on `(a, b, v)`.
pub fn linear_matrix(r: f64, params: &FluidParams) -> Mat3 {
    [
        [0.0, 0.0, -r],
        [0.0, 0.0, -params.gamma * r],
        [0.0, r, -params.nu_q() * r * r],
    ]
}

/// Nonzero eigenvalues of `M(r)`: roots of `l^2 + nu r^2 l + gamma r^2 = 0`,
/// returned as `(slow, fast)`; complex conjugates below the critical modulus
/// (positive imaginary part first).
pub fn linear_roots(r: f64, params: &FluidParams) -> (Complex64, Complex64) {
    let nu = params.nu_q();
    let p = nu * r * r;
    let q = params.gamma * r * r;
    let disc = p * p - 4.0 * q;
    if disc >= 0.0 {
        let fast = -0.5 * (p + disc.sqrt());
        let slow = if fast == 0.0 { 0.0 } else { q / fast };
        (Complex64::new(slow, 0.0), Complex64::new(fast, 0.0))
    } else {
        let im = 0.5 * (-disc).sqrt();
        (Complex64::new(-0.5 * p, im), Complex64::new(-0.5 * p, -im))
    }
}

fn identity() -> Mat3 {
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
}

/// `exp(M(r) t)`.
///
/// Uses the spectral decomposition with explicit eigenvectors: right
/// `(-r, -gamma r, l)`, left `(0, r, l)` for each nonzero root `l`, and the
/// kernel pair `(1, 0, 0)`, `(1, -1/gamma, 0)`. Within `1e-3` (relative) of a
/// double root the decomposition is ill conditioned and a Pade
/// scaling-and-squaring exponential is used instead.
pub fn linear_exponential(r: f64, params: &FluidParams, t: f64) -> Mat3 {
    if r == 0.0 || t == 0.0 {
        return identity();
    }
    let gamma = params.gamma;
    let (l1, l2) = linear_roots(r, params);
    if (l1 - l2).norm() < 1e-3 * l1.norm().max(l2.norm()) {
        let m = linear_matrix(r, params);
        let e = Matrix3::from_fn(|i, j| m[i][j] * t).exp();
        return std::array::from_fn(|i| std::array::from_fn(|j| e[(i, j)]));
    }
    // kernel projector (1,0,0) (1,-1/gamma,0)
    let mut out = [[1.0, -1.0 / gamma, 0.0], [0.0; 3], [0.0; 3]];
    let cr = Complex64::new(r, 0.0);
    for l in [l1, l2] {
        let right = [-cr, -gamma * cr, l];
        let left = [Complex64::new(0.0, 0.0), cr, l];
        let weight = (l * t).exp() / (l * (l - if l == l1 { l2 } else { l1 }));
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] += (weight * right[i] * left[j]).re;
            }
        }
    }
    out
}

fn apply3(m: &Mat3, x: [Complex64; 3]) -> [Complex64; 3] {
    std::array::from_fn(|i| m[i][0] * x[0] + m[i][1] * x[1] + m[i][2] * x[2])
}

/// Per-mode exponentials for one step size.
#[derive(Clone, Debug)]
pub struct LinearPropagator {
    grid: Arc<Grid>,
    dt: f64,
    /// Distinct moduli share one matrix.
    table: Vec<Mat3>,
    heat: Vec<f64>,
    potential: Vec<f64>,
    slot: Vec<usize>,
}

impl LinearPropagator {
    pub fn new(grid: &Arc<Grid>, params: &FluidParams, dt: f64) -> Self {
        let mut index: HashMap<u64, usize> = HashMap::new();
        let mut table = Vec::new();
        let mut heat = Vec::new();
        let mut potential = Vec::new();
        let slot = grid
            .moduli()
            .iter()
            .map(|&r| {
                *index.entry(r.to_bits()).or_insert_with(|| {
                    table.push(linear_exponential(r, params, dt));
                    heat.push((-params.mu * r * r * dt).exp());
                    potential.push((-params.nu_q() * r * r * dt).exp());
                    table.len() - 1
                })
            })
            .collect();
        LinearPropagator {
            grid: grid.clone(),
            dt,
            table,
            heat,
            potential,
            slot,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Matrix acting on `(a, b, v)` at a mode.
    pub fn matrix(&self, mode: usize) -> &Mat3 {
        &self.table[self.slot[mode]]
    }

    /// Heat factor applied to `Pu` at a mode.
    pub fn heat_factor(&self, mode: usize) -> f64 {
        self.heat[self.slot[mode]]
    }

    pub fn apply(&self, state: &PerturbationState) -> PerturbationState {
        let grid = &self.grid;
        let dim = grid.dim();
        let m = grid.len();
        let mut out = state.clone();
        let zero = Complex64::new(0.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        for mode in 1..m {
            let slot = self.slot[mode];
            let kvec = grid.k(mode);
            let r = grid.kmod(mode);
            let mut u = [zero; 3];
            for c in 0..dim {
                u[c] = state.u.comp(c)[mode];
            }
            let mut kdotu = zero;
            for c in 0..dim {
                kdotu += kvec[c] / r * u[c];
            }
            let heat = self.heat[slot];
            if grid.is_nyquist(mode) {
                // odd symbols vanish here: a and b decouple, Qu only diffuses
                let pot = self.potential[slot];
                for c in 0..dim {
                    let q = kvec[c] / r * kdotu;
                    out.u.comp_mut(c)[mode] = heat * (u[c] - q) + pot * q;
                }
                continue;
            }
            let v = i * kdotu;
            let [a, b, v] = apply3(&self.table[slot], [state.a.comp(0)[mode], state.b.comp(0)[mode], v]);
            out.a.comp_mut(0)[mode] = a;
            out.b.comp_mut(0)[mode] = b;
            for c in 0..dim {
                let khat = kvec[c] / r;
                out.u.comp_mut(c)[mode] = heat * (u[c] - khat * kdotu) - i * khat * v;
            }
        }
        out
    }
}

/// Exact flow of the Lame operator alone: `exp(-mu r^2 t)` on `Pu`,
/// `exp(-nu r^2 t)` on `Qu`.
#[derive(Clone, Debug)]
pub struct LameFlow {
    grid: Arc<Grid>,
    heat: Vec<f64>,
    potential: Vec<f64>,
}

impl LameFlow {
    pub fn new(grid: &Arc<Grid>, params: &FluidParams, dt: f64) -> Self {
        let heat = grid
            .moduli()
            .iter()
            .map(|r| (-params.mu * r * r * dt).exp())
            .collect();
        let potential = grid
            .moduli()
            .iter()
            .map(|r| (-params.nu_q() * r * r * dt).exp())
            .collect();
        LameFlow {
            grid: grid.clone(),
            heat,
            potential,
        }
    }

    pub fn apply(&self, u: &SpectralField) -> SpectralField {
        let grid = &self.grid;
        let dim = grid.dim();
        let mut out = u.clone();
        for mode in 1..grid.len() {
            let kvec = grid.k(mode);
            let r = grid.kmod(mode);
            let mut kdotu = Complex64::new(0.0, 0.0);
            for c in 0..dim {
                kdotu += kvec[c] / r * u.comp(c)[mode];
            }
            for c in 0..dim {
                let q = kvec[c] / r * kdotu;
                out.comp_mut(c)[mode] = self.heat[mode] * (u.comp(c)[mode] - q) + self.potential[mode] * q;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_diff(a: &Mat3, b: &Mat3) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                d = d.max((a[i][j] - b[i][j]).abs());
            }
        }
        d
    }

    fn mul(a: &Mat3, b: &Mat3) -> Mat3 {
        std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
    }

    fn pade(r: f64, p: &FluidParams, t: f64) -> Mat3 {
        let m = linear_matrix(r, p);
        let e = Matrix3::from_fn(|i, j| m[i][j] * t).exp();
        std::array::from_fn(|i| std::array::from_fn(|j| e[(i, j)]))
    }

    #[test]
    fn quadratic_roots() {
        let p = FluidParams { gamma: 1.0, ..Default::default() };
        let (s, f) = linear_roots(2.0, &p);
        assert!((s.re - (-4.0 + 12f64.sqrt())).abs() < 1e-12);
        assert!((f.re - (-4.0 - 12f64.sqrt())).abs() < 1e-12);
        let (s, f) = linear_roots(0.1, &p);
        assert!((s.re + 0.01).abs() < 1e-15 && (s.im - 0.0099f64.sqrt()).abs() < 1e-15);
        assert_eq!(f, s.conj());
        let (s, f) = linear_roots(1.0, &p);
        assert_eq!(s, Complex64::new(-1.0, 0.0));
        assert_eq!(f, Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn zero_time_and_zero_mode_are_identity() {
        let p = FluidParams::default();
        assert_eq!(linear_exponential(3.0, &p, 0.0), identity());
        assert_eq!(linear_exponential(0.0, &p, 0.7), identity());
    }

    #[test]
    fn agrees_with_pade_and_groups() {
        let p = FluidParams::default();
        for &r in &[0.0625, 0.25, 0.8, 0.845, 1.18, 1.2, 3.0, 17.0, 64.0] {
            for &t in &[1e-3, 0.1, 1.0] {
                let e = linear_exponential(r, &p, t);
                let d = max_diff(&e, &pade(r, &p, t));
                assert!(d < 1e-11, "r = {r}, t = {t}: {d}");
                let e2 = linear_exponential(r, &p, 2.0 * t);
                assert!(max_diff(&mul(&e, &e), &e2) < 1e-12, "r = {r}, t = {t}");
            }
        }
    }

    #[test]
    fn double_root_uses_fallback() {
        // gamma = 1, nu = 2: double root at r = 1
        let p = FluidParams { gamma: 1.0, ..Default::default() };
        for &r in &[1.0, 1.0 + 1e-5, 1.0 - 1e-4] {
            let e = linear_exponential(r, &p, 0.5);
            assert!(max_diff(&e, &pade(r, &p, 0.5)) < 1e-13);
        }
    }

    #[test]
    fn kernel_combination_is_invariant() {
        let p = FluidParams::default();
        for &r in &[0.1, 2.0, 30.0] {
            let e = linear_exponential(r, &p, 0.3);
            // row vector (1, -1/gamma, 0) is a left null vector of M
            for j in 0..3 {
                let lhs = e[0][j] - e[1][j] / p.gamma;
                let rhs = [1.0, -1.0 / p.gamma, 0.0][j];
                assert!((lhs - rhs).abs() < 1e-14);
            }
        }
    }
}

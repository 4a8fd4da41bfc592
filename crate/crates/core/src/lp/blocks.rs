use log::warn;

use super::bank::{chi, FilterBank};
use crate::error::{Error, Result};
use crate::spectral::SpectralField;

/// Whether a requested block index lay inside the bank's range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockRange {
    Inside,
    Outside,
}

/// `Delta_j z = psi(2^-j D) z`. Outside `[j_min, j_max]` the block is empty:
/// a zero field is returned together with [`BlockRange::Outside`].
pub fn dyadic_block(bank: &FilterBank, j: i32, z: &SpectralField) -> (SpectralField, BlockRange) {
    match bank.psi_samples(j) {
        Some(psi) => (z.map_symbol(|mode| psi[mode]), BlockRange::Inside),
        None => {
            warn!(
                "dyadic block {j} outside range [{}, {}]",
                bank.j_min(),
                bank.j_max()
            );
            (SpectralField::zeros(z.grid(), z.ncomp()), BlockRange::Outside)
        }
    }
}

/// `S_j z = chi(2^-j D) z`. Keeps the zero mode.
pub fn low_cutoff(bank: &FilterBank, j: i32, z: &SpectralField) -> SpectralField {
    let grid = bank.grid().clone();
    let scale = 2f64.powi(-j);
    z.map_symbol(|mode| chi(scale * grid.kmod(mode)))
}

/// Weighted sequence norm `|| (2^{js} x_j)_j ||_{l^r}` of block values
/// indexed from `j_min`. `r = f64::INFINITY` gives the sup.
pub fn weighted_lr(values: &[f64], j_min: i32, s: f64, r: f64) -> f64 {
    let weighted = values
        .iter()
        .enumerate()
        .map(|(i, v)| 2f64.powf((j_min + i as i32) as f64 * s) * v);
    if r.is_infinite() {
        weighted.fold(0.0, f64::max)
    } else if r == 1.0 {
        weighted.sum()
    } else {
        weighted.map(|w| w.powf(r)).sum::<f64>().powf(1.0 / r)
    }
}

/// Homogeneous Besov norm `||z||_{B^s_{2,r}}`; the zero mode does not enter.
pub fn besov_norm(bank: &FilterBank, z: &SpectralField, s: f64, r: f64) -> f64 {
    weighted_lr(&bank.block_norms(z), bank.j_min(), s, r)
}

/// `B^s_{2,1}` norm, the one used throughout the energy functional.
pub fn besov_l1(bank: &FilterBank, z: &SpectralField, s: f64) -> f64 {
    besov_norm(bank, z, s, 1.0)
}

/// Low and high parts with respect to `j0`: `z_low = sum_{j <= j0} Delta_j z`,
/// `z_high = z - z_low`. The zero mode (if any) is kept in `z_low`.
pub fn split_low_high(bank: &FilterBank, z: &SpectralField) -> (SpectralField, SpectralField) {
    let low = low_cutoff(bank, bank.j0() + 1, z);
    let high = z.sub(&low);
    (low, high)
}

/// `||grad^order z|| / (2^{j order} ||z||)` for `z` spectrally supported in
/// the `j`-th annulus `[3/4 2^j, 8/3 2^j]`.
pub fn bernstein_ratio(bank: &FilterBank, z: &SpectralField, j: i32, order: u32) -> Result<f64> {
    let grid = bank.grid();
    let lo = 0.75 * 2f64.powi(j);
    let hi = 8.0 / 3.0 * 2f64.powi(j);
    let tol = 1e-12 * z.max_abs_coeff();
    let m = grid.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for c in 0..z.ncomp() {
        for (mode, v) in z.comp(c).iter().enumerate() {
            let e = v.norm_sqr();
            if v.norm() > tol {
                let k = grid.kmod(mode);
                if k < lo || k > hi {
                    return Err(Error::Precondition(format!(
                        "field has a mode at |k| = {k} outside annulus {j} = [{lo}, {hi}]"
                    )));
                }
            }
            num += e * grid.kmod(mode).powi(2 * order as i32);
            den += e;
        }
    }
    debug_assert!(m > 0);
    if den == 0.0 {
        return Err(Error::Precondition("Bernstein ratio of a zero field".into()));
    }
    Ok((num / den).sqrt() / 2f64.powi(j * order as i32))
}

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{Grid, SpectralField};

/// Integer wavevectors with `k_lo <= |m|/L <= k_hi` and first nonzero entry
/// positive, in lexicographic order. The list depends on `L` and the band
/// only, so the same draws land on the same modes for every resolution.
pub fn band_lattice(dim: usize, period_scale: f64, k_lo: f64, k_hi: f64) -> Vec<[i64; 3]> {
    let reach = (k_hi * period_scale).floor() as i64;
    let mut out = Vec::new();
    let mut m = [0i64; 3];
    let span = (2 * reach + 1) as usize;
    let total = span.pow(dim as u32);
    for idx in 0..total {
        let mut rem = idx;
        for axis in (0..dim).rev() {
            m[axis] = (rem % span) as i64 - reach;
            rem /= span;
        }
        let first = m[..dim].iter().find(|&&x| x != 0);
        if !matches!(first, Some(&x) if x > 0) {
            continue;
        }
        let k = m[..dim].iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt() / period_scale;
        if k >= k_lo && k <= k_hi {
            out.push(m);
        }
    }
    out
}

/// Random real field with independent Gaussian coefficients on the modes of
/// the band `[k_lo, k_hi]`; modes the grid cannot represent (Nyquist and
/// beyond) consume their draws but stay zero.
pub fn random_band<R: Rng>(
    grid: &Arc<Grid>,
    ncomp: usize,
    k_lo: f64,
    k_hi: f64,
    rng: &mut R,
) -> SpectralField {
    let dim = grid.dim();
    let half = (grid.n() / 2) as i64;
    let mut out = SpectralField::zeros(grid, ncomp);
    let m = grid.len();
    for lattice in band_lattice(dim, grid.period_scale(), k_lo, k_hi) {
        for c in 0..ncomp {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            if lattice[..dim].iter().any(|x| x.abs() >= half) {
                continue;
            }
            let mode = grid.mode_of(&lattice[..dim]);
            let conj = grid.conjugate_mode(mode);
            let z = Complex64::new(re, im);
            out.coeffs_mut()[c * m + mode] = z;
            out.coeffs_mut()[c * m + conj] = z.conj();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn same_draws_on_refined_grid() {
        let coarse = Grid::new(2, 32, 4.0).unwrap();
        let fine = Grid::new(2, 64, 4.0).unwrap();
        let a = random_band(&coarse, 1, 0.5, 2.0, &mut ChaCha8Rng::seed_from_u64(3));
        let b = random_band(&fine, 1, 0.5, 2.0, &mut ChaCha8Rng::seed_from_u64(3));
        assert!(a.l2_norm() > 0.0);
        assert!((a.l2_norm() - b.l2_norm()).abs() < 1e-13 * a.l2_norm());
        assert_eq!(a.hermitian_defect(), 0.0);
        for mode in 0..coarse.len() {
            let mi = coarse.mode_indices(mode);
            assert_eq!(a.coeffs()[mode], b.coeffs()[fine.mode_of(&mi[..2])]);
        }
    }

    #[test]
    fn band_respected() {
        let g = Grid::new(2, 32, 4.0).unwrap();
        let f = random_band(&g, 2, 1.0, 1.5, &mut ChaCha8Rng::seed_from_u64(9));
        for c in 0..2 {
            for (mode, z) in f.comp(c).iter().enumerate() {
                if z.norm() > 0.0 {
                    let k = g.kmod(mode);
                    assert!((1.0..=1.5).contains(&k));
                }
            }
        }
    }
}

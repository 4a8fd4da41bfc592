//! Low-frequency Lyapunov functionals
//! `L_k^2 = ‖b_k‖^2 + gamma ‖v_k‖^2 + (1/gamma) ‖Lambda b_k‖^2 - <v_k, Lambda b_k>`
//! built from the localized pair `(b_k, v_k) = Delta_k (b_l, v_l)`.

use super::energy::Sample;
use crate::error::{Error, Result};
use crate::lp::{dyadic_block, split_low_high, FilterBank};
use crate::model::{compressible_scalar, low_freq_sources, FluidParams, PerturbationState};
use crate::spectral::ops::fractional_laplacian;
use crate::spectral::SpectralField;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LyapunovBlock {
    pub b_norm: f64,
    pub v_norm: f64,
    pub lambda_b_norm: f64,
    /// `<v_k, Lambda b_k>`.
    pub cross: f64,
    pub l2: f64,
}

impl LyapunovBlock {
    /// `L_k^2 / ‖(b_k, v_k)‖^2`, or `None` for a vanishing pair.
    pub fn coercivity(&self) -> Option<f64> {
        let den = self.b_norm.powi(2) + self.v_norm.powi(2);
        (den > 0.0).then(|| self.l2 / den)
    }
}

pub fn lyapunov_block(b_k: &SpectralField, v_k: &SpectralField, params: &FluidParams) -> Result<LyapunovBlock> {
    let gamma = params.gamma;
    let lb = fractional_laplacian(b_k, 1.0)?;
    let b_norm = b_k.l2_norm();
    let v_norm = v_k.l2_norm();
    let lambda_b_norm = lb.l2_norm();
    let cross = v_k.inner(&lb);
    Ok(LyapunovBlock {
        b_norm,
        v_norm,
        lambda_b_norm,
        cross,
        l2: b_norm.powi(2) + gamma * v_norm.powi(2) + lambda_b_norm.powi(2) / gamma - cross,
    })
}

/// Diagnostics of the low blocks `j_min..=j0` at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct LowBlockRow {
    pub j: i32,
    pub block: LyapunovBlock,
    /// `‖Delta_j (f1)_l‖`, `‖Delta_j (f2)_l‖`.
    pub f1: f64,
    pub f2: f64,
}

impl LowBlockRow {
    pub fn source(&self) -> f64 {
        self.f1.hypot(self.f2)
    }
}

pub fn low_block_rows(bank: &FilterBank, state: &PerturbationState, params: &FluidParams) -> Result<Vec<LowBlockRow>> {
    let (bl, _) = split_low_high(bank, &state.b);
    let (vl, _) = split_low_high(bank, &compressible_scalar(&state.u)?);
    let (f1, f2) = low_freq_sources(state, params)?;
    let (f1l, _) = split_low_high(bank, &f1);
    let (f2l, _) = split_low_high(bank, &f2);
    (bank.j_min()..=bank.j0())
        .map(|j| {
            let block = lyapunov_block(&dyadic_block(bank, j, &bl).0, &dyadic_block(bank, j, &vl).0, params)?;
            Ok(LowBlockRow {
                j,
                block,
                f1: dyadic_block(bank, j, &f1l).0.l2_norm(),
                f2: dyadic_block(bank, j, &f2l).0.l2_norm(),
            })
        })
        .collect()
}

/// Smallest and largest coercivity ratio over the rows of all samples.
pub fn coercivity_range(rows: &[Vec<LowBlockRow>]) -> Option<(f64, f64)> {
    let ratios: Vec<f64> = rows
        .iter()
        .flatten()
        .filter_map(|r| r.block.coercivity())
        .collect();
    if ratios.is_empty() {
        return None;
    }
    Some((
        ratios.iter().copied().fold(f64::INFINITY, f64::min),
        ratios.iter().copied().fold(0.0, f64::max),
    ))
}

/// Tested decay constant and the largest source constant allowed.
pub const DECAY_C_MIN: f64 = 0.1;
pub const SOURCE_C_MAX: f64 = 100.0;

/// Fit of `dL/dt + c 4^k L <= C ‖f_k‖` for one block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockDecayFit {
    pub j: i32,
    /// Largest `c` valid with `C = 0`.
    pub c_free: f64,
    /// Largest `c` valid with `C = SOURCE_C_MAX`.
    pub c_forced: f64,
    /// Smallest `C` valid with `c = DECAY_C_MIN`.
    pub c_needed: f64,
    pub holds: bool,
}

fn derivative(t: &[f64], y: &[f64]) -> Vec<f64> {
    (1..t.len() - 1)
        .map(|i| (y[i + 1] - y[i - 1]) / (t[i + 1] - t[i - 1]))
        .collect()
}

/// Fits the block inequality from samples of `L_k` and `‖f_k‖`, using
/// centred differences at interior samples.
pub fn fit_block_decay(j: i32, t: &[f64], l: &[f64], f: &[f64]) -> Result<BlockDecayFit> {
    if t.len() < 3 || l.len() != t.len() || f.len() != t.len() {
        return Err(Error::Insufficient(format!(
            "block decay needs at least 3 aligned samples, got {}",
            t.len()
        )));
    }
    let w = 4f64.powi(j);
    let dl = derivative(t, l);
    let mut c_free = f64::INFINITY;
    let mut c_forced = f64::INFINITY;
    let mut c_needed: f64 = 0.0;
    for (i, d) in dl.iter().enumerate() {
        let (li, fi) = (l[i + 1], f[i + 1]);
        if li > 0.0 {
            c_free = c_free.min(-d / (w * li));
            c_forced = c_forced.min((SOURCE_C_MAX * fi - d) / (w * li));
        } else if *d > SOURCE_C_MAX * fi {
            c_forced = f64::NEG_INFINITY;
        }
        let excess = d + DECAY_C_MIN * w * li;
        if excess > 0.0 {
            c_needed = c_needed.max(if fi > 0.0 { excess / fi } else { f64::INFINITY });
        }
    }
    Ok(BlockDecayFit {
        j,
        c_free,
        c_forced,
        c_needed,
        holds: c_needed <= SOURCE_C_MAX,
    })
}

#[derive(Clone, Debug)]
pub struct BlockDecayReport {
    pub fits: Vec<BlockDecayFit>,
    pub coercivity: Option<(f64, f64)>,
}

impl BlockDecayReport {
    pub fn holds(&self) -> bool {
        self.fits.iter().all(|f| f.holds)
    }
}

pub fn block_decay_check(samples: &[Sample], bank: &FilterBank, params: &FluidParams) -> Result<BlockDecayReport> {
    if samples.len() < 3 {
        return Err(Error::Insufficient(format!(
            "block decay needs at least 3 samples, got {}",
            samples.len()
        )));
    }
    let rows: Vec<Vec<LowBlockRow>> = samples
        .iter()
        .map(|s| low_block_rows(bank, &s.state, params))
        .collect::<Result<_>>()?;
    block_decay_from_rows(samples.iter().map(|s| s.t).collect(), &rows)
}

/// Same as [`block_decay_check`] on precomputed rows.
pub fn block_decay_from_rows(t: Vec<f64>, rows: &[Vec<LowBlockRow>]) -> Result<BlockDecayReport> {
    let nblocks = rows.first().map_or(0, |r| r.len());
    let fits = (0..nblocks)
        .map(|b| {
            let j = rows[0][b].j;
            let l: Vec<f64> = rows.iter().map(|r| r[b].block.l2.max(0.0).sqrt()).collect();
            let f: Vec<f64> = rows.iter().map(|r| r[b].source()).collect();
            fit_block_decay(j, &t, &l, &f)
        })
        .collect::<Result<_>>()?;
    Ok(BlockDecayReport {
        fits,
        coercivity: coercivity_range(rows),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn vanishing_pair() {
        let g = Grid::new(2, 16, 4.0).unwrap();
        let z = SpectralField::scalar_zeros(&g);
        let l = lyapunov_block(&z, &z, &FluidParams::default()).unwrap();
        assert_eq!(l.l2, 0.0);
        assert_eq!(l.coercivity(), None);
    }

    #[test]
    fn pure_b_pair() {
        let g = Grid::new(2, 16, 4.0).unwrap();
        let p = FluidParams::default();
        let b = SpectralField::from_fn(&g, |x| (0.5 * x[0]).cos());
        let z = SpectralField::scalar_zeros(&g);
        let l = lyapunov_block(&b, &z, &p).unwrap();
        let n2 = b.l2_norm().powi(2);
        assert!((l.l2 - n2 * (1.0 + 0.25 / p.gamma)).abs() < 1e-12 * n2);
    }

    #[test]
    fn decaying_series_holds_and_growth_is_flagged() {
        let t: Vec<f64> = (0..20).map(|i| i as f64 * 0.1).collect();
        let decay: Vec<f64> = t.iter().map(|t| (-t).exp()).collect();
        let grow: Vec<f64> = t.iter().map(|t| (0.5 * t).exp()).collect();
        let f = vec![0.0; t.len()];
        let fit = fit_block_decay(0, &t, &decay, &f).unwrap();
        assert!(fit.holds);
        assert!(fit.c_free > 0.9 && fit.c_free < 1.1);
        let fit = fit_block_decay(0, &t, &grow, &f).unwrap();
        assert!(!fit.holds);
        assert!(fit.c_needed.is_infinite());
        assert!(fit_block_decay(0, &t[..2], &decay[..2], &f[..2]).is_err());
    }

    #[test]
    fn zero_trajectory_holds() {
        let g = Grid::new(2, 32, 4.0).unwrap();
        let bank = FilterBank::new(&g, 1).unwrap();
        let samples: Vec<Sample> = (0..4)
            .map(|i| Sample { t: i as f64, state: PerturbationState::zeros(&g) })
            .collect();
        let r = block_decay_check(&samples, &bank, &FluidParams::default()).unwrap();
        assert!(r.holds());
        assert_eq!(r.coercivity, None);
    }
}

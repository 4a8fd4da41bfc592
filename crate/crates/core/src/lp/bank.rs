use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

/// Inner edge of the plateau where the low-pass profile equals one.
pub const CHI_INNER: f64 = 3.0 / 4.0;
/// Outer edge of the support of the low-pass profile.
pub const CHI_OUTER: f64 = 4.0 / 3.0;
/// Annulus of the dyadic profile: `supp psi` lies in `[3/4, 8/3]`.
pub const ANNULUS_INNER: f64 = 3.0 / 4.0;
pub const ANNULUS_OUTER: f64 = 8.0 / 3.0;

fn bump(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth radial low-pass profile: one on `B(0, 3/4)`, zero outside `B(0, 4/3)`,
/// non-increasing in between.
pub fn chi(r: f64) -> f64 {
    let t = (r - CHI_INNER) / (CHI_OUTER - CHI_INNER);
    if t <= 0.0 {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0;
    }
    let up = bump(1.0 - t);
    up / (up + bump(t))
}

/// Dyadic profile `psi(r) = chi(r/2) - chi(r)`.
pub fn psi(r: f64) -> f64 {
    chi(0.5 * r) - chi(r)
}

/// Littlewood-Paley filters sampled on a grid.
///
/// Block `j` multiplies mode `k` by `psi(2^-j |k|)`. The block range
/// `[j_min, j_max]` is chosen so the blocks sum to one on every nonzero mode.
#[derive(Clone, Debug)]
pub struct FilterBank {
    grid: Arc<Grid>,
    j_min: i32,
    j_max: i32,
    j0: i32,
    chi: Vec<f64>,
    psi: Vec<Vec<f64>>,
    /// First block touching each mode (`j - j_min`), or `usize::MAX` for the zero mode.
    first_block: Vec<usize>,
    /// Weights of blocks `first` and `first + 1`.
    weights: Vec<[f64; 2]>,
}

impl FilterBank {
    pub fn new(grid: &Arc<Grid>, j0: i32) -> Result<FilterBank> {
        let k_min = grid.k_min();
        let k_max = grid.k_max();
        if !(k_max > k_min) {
            return Err(Error::Config(
                "grid needs at least two distinct nonzero moduli".into(),
            ));
        }
        // chi(2^-j_min k_min) = 0 and chi(2^-(j_max+1) k_max) = 1
        let j_min = (k_min / CHI_OUTER).log2().floor() as i32;
        let j_max = (k_max / CHI_INNER).log2().ceil() as i32 - 1;
        if j0 < j_min || j0 >= j_max {
            return Err(Error::Config(format!(
                "grid too coarse for j0 = {j0}: block range is [{j_min}, {j_max}]"
            )));
        }
        let m = grid.len();
        let chi_s: Vec<f64> = grid.moduli().iter().map(|&k| chi(k)).collect();
        let psi_s: Vec<Vec<f64>> = (j_min..=j_max)
            .map(|j| {
                let scale = 2f64.powi(-j);
                grid.moduli().iter().map(|&k| psi(scale * k)).collect()
            })
            .collect();
        let mut bank = FilterBank {
            grid: grid.clone(),
            j_min,
            j_max,
            j0,
            chi: chi_s,
            psi: psi_s,
            first_block: vec![usize::MAX; m],
            weights: vec![[0.0; 2]; m],
        };
        bank.index_modes();
        Ok(bank)
    }

    fn index_modes(&mut self) {
        let nb = self.psi.len();
        for mode in 0..self.grid.len() {
            let hits: Vec<usize> = (0..nb).filter(|&b| self.psi[b][mode] != 0.0).collect();
            match hits.as_slice() {
                [] => {
                    self.first_block[mode] = usize::MAX;
                    self.weights[mode] = [0.0; 2];
                }
                [b] => {
                    self.first_block[mode] = *b;
                    self.weights[mode] = [self.psi[*b][mode], 0.0];
                }
                [b, c] if *c == b + 1 => {
                    self.first_block[mode] = *b;
                    self.weights[mode] = [self.psi[*b][mode], self.psi[*c][mode]];
                }
                _ => panic!("a mode met more than two consecutive dyadic blocks"),
            }
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn j_min(&self) -> i32 {
        self.j_min
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn j0(&self) -> i32 {
        self.j0
    }

    pub fn block_range(&self) -> std::ops::RangeInclusive<i32> {
        self.j_min..=self.j_max
    }

    pub fn num_blocks(&self) -> usize {
        self.psi.len()
    }

    pub fn contains(&self, j: i32) -> bool {
        (self.j_min..=self.j_max).contains(&j)
    }

    /// `chi(|k|)` on the grid.
    pub fn chi_samples(&self) -> &[f64] {
        &self.chi
    }

    /// `psi(2^-j |k|)` on the grid.
    pub fn psi_samples(&self, j: i32) -> Option<&[f64]> {
        if self.contains(j) {
            Some(&self.psi[(j - self.j_min) as usize])
        } else {
            None
        }
    }

    /// Max over nonzero modes of `|sum_j psi(2^-j |k|) - 1|`.
    pub fn partition_residual(&self) -> f64 {
        (1..self.grid.len())
            .map(|mode| {
                let s: f64 = self.psi.iter().map(|p| p[mode]).sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Scales one block's samples; used to exercise the invariant checks.
    #[doc(hidden)]
    pub fn corrupt_block(&mut self, j: i32, factor: f64) {
        if let Some(idx) = (j - self.j_min).try_into().ok().filter(|&i: &usize| i < self.psi.len()) {
            self.psi[idx].iter_mut().for_each(|p| *p *= factor);
            self.index_modes();
        }
    }

    /// Blocks touching a mode: first block index (`j - j_min`) and the two
    /// weights, or `None` for the zero mode.
    pub fn mode_weights(&self, mode: usize) -> Option<(usize, [f64; 2])> {
        let first = self.first_block[mode];
        (first != usize::MAX).then(|| (first, self.weights[mode]))
    }

    /// Per-block `L^2` norms of `z`, indexed by `j - j_min`. Vector fields use
    /// the Euclidean norm over components.
    pub fn block_norms(&self, z: &SpectralField) -> Vec<f64> {
        self.block_norms_weighted(z, |_| 1.0)
    }

    /// Block norms of `m(D) z` for a real radial multiplier given per mode.
    pub fn block_norms_weighted(&self, z: &SpectralField, symbol: impl Fn(usize) -> f64) -> Vec<f64> {
        let mut acc = vec![0.0; self.psi.len()];
        let m = self.grid.len();
        for c in 0..z.ncomp() {
            let comp = z.comp(c);
            for mode in 0..m {
                let first = self.first_block[mode];
                if first == usize::MAX {
                    continue;
                }
                let e = comp[mode].norm_sqr() * symbol(mode).powi(2);
                if e == 0.0 {
                    continue;
                }
                let [w0, w1] = self.weights[mode];
                acc[first] += w0 * w0 * e;
                if w1 != 0.0 {
                    acc[first + 1] += w1 * w1 * e;
                }
            }
        }
        let vol = self.grid.volume();
        acc.into_iter().map(|e| (vol * e).sqrt()).collect()
    }
}

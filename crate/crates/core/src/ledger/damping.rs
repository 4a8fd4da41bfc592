//! Decay rates of dyadic blocks of `b` and invariance of the kernel
//! component of the linear flow.

use num_complex::Complex64;

use super::energy::{split_block_norms, Sample};
use super::eigen::lin_eigenvalues;
use crate::error::{Error, Result};
use crate::lp::{psi, weighted_lr, FilterBank};
use crate::model::{grid_min, FluidParams};

/// Relative tolerance on high-frequency damping rates.
pub const DAMPING_TOL: f64 = 0.2;
/// Largest initial amplitude for which the linear predictions are asserted.
pub const LINEAR_AMPLITUDE: f64 = 1e-4;

/// Least-squares decay rate `-d ln y / dt` over the middle 60% of the time span.
pub fn fit_decay_rate(t: &[f64], y: &[f64]) -> Option<f64> {
    let (t0, t1) = (*t.first()?, *t.last()?);
    let lo = t0 + 0.2 * (t1 - t0);
    let hi = t0 + 0.8 * (t1 - t0);
    let pts: Vec<(f64, f64)> = t
        .iter()
        .zip(y)
        .filter(|(t, _)| **t >= lo && **t <= hi)
        .map(|(t, y)| (*t, *y))
        .collect();
    if pts.len() < 2 || pts.iter().any(|p| !(p.1 > 0.0)) {
        return None;
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1.ln() - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    (sxx > 0.0).then(|| -sxy / sxx)
}

/// Geometric centre of the `j`-th annulus.
pub fn annulus_center(j: i32) -> f64 {
    2f64.powi(j) * 2f64.sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateFit {
    pub j: i32,
    pub rate: Option<f64>,
    /// `-Re` of the slow root at the annulus centre.
    pub predicted: f64,
    /// Whether the block lies in the asserted high-frequency range and has a
    /// resolved lattice mode where its profile equals one.
    pub high: bool,
    /// Whether the block lies in the parabolic (complex-root) range and has a
    /// lattice mode where its profile equals one.
    pub parabolic: bool,
}

impl RateFit {
    pub fn rel_err(&self) -> Option<f64> {
        self.rate.map(|r| (r - self.predicted).abs() / self.predicted)
    }
}

#[derive(Clone, Debug)]
pub struct DampingReport {
    pub fits: Vec<RateFit>,
    /// `gamma / nu_Q`, the high-frequency plateau.
    pub plateau: f64,
    /// Initial amplitude was in the linear regime; otherwise nothing is asserted.
    pub asserting: bool,
    /// Ratios `rate_{j+1} / rate_j` over consecutive parabolic blocks.
    pub low_ratios: Vec<(i32, f64)>,
}

impl DampingReport {
    /// High blocks within `DAMPING_TOL` of the plateau.
    pub fn plateau_ok(&self) -> bool {
        let high: Vec<&RateFit> = self.fits.iter().filter(|f| f.high && f.rate.is_some()).collect();
        !high.is_empty()
            && high
                .iter()
                .all(|f| (f.rate.unwrap() - self.plateau).abs() <= DAMPING_TOL * self.plateau)
    }

    /// Consecutive parabolic blocks scale like `4^j` within a factor 2.
    pub fn scaling_ok(&self) -> bool {
        !self.low_ratios.is_empty() && self.low_ratios.iter().all(|(_, r)| (2.0..=8.0).contains(r))
    }
}

fn max_abs(samples: &[f64]) -> f64 {
    samples.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Largest pointwise value of `|a|`, `|u|`, `|b|`.
pub fn pointwise_amplitude(s: &crate::model::PerturbationState) -> f64 {
    max_abs(&s.a.to_physical())
        .max(max_abs(&s.u.to_physical()))
        .max(max_abs(&s.b.to_physical()))
}

fn has_core_mode(bank: &FilterBank, j: i32) -> bool {
    let scale = 2f64.powi(-j);
    let grid = bank.grid();
    (1..grid.len()).any(|m| grid.dealias_keeps(m) && psi(scale * grid.kmod(m)) == 1.0)
}

pub fn high_freq_damping_check(samples: &[Sample], bank: &FilterBank, params: &FluidParams) -> Result<DampingReport> {
    let first = samples
        .first()
        .ok_or_else(|| Error::Insufficient("no samples".into()))?;
    let asserting = pointwise_amplitude(&first.state) <= LINEAR_AMPLITUDE;
    let t: Vec<f64> = samples.iter().map(|s| s.t).collect();
    let norms: Vec<Vec<f64>> = samples.iter().map(|s| bank.block_norms(&s.state.b)).collect();
    damping_from_block_norms(&t, &norms, bank, params, asserting)
}

/// Same as [`high_freq_damping_check`] from per-sample block norms of `b`
/// (indexed by `j - j_min`) and the regime flag.
pub fn damping_from_block_norms(
    t: &[f64],
    norms: &[Vec<f64>],
    bank: &FilterBank,
    params: &FluidParams,
    asserting: bool,
) -> Result<DampingReport> {
    if t.is_empty() || t.len() != norms.len() {
        return Err(Error::Insufficient(format!(
            "{} sample times for {} norm rows",
            t.len(),
            norms.len()
        )));
    }
    let nu = params.nu_q();
    let critical = 2.0 * params.gamma.sqrt() / nu;
    let mut fits = Vec::new();
    for (idx, j) in bank.block_range().enumerate() {
        let y: Vec<f64> = norms.iter().map(|n| n[idx]).collect();
        let r = annulus_center(j);
        let slow = lin_eigenvalues(r, params)?.plus;
        let core = has_core_mode(bank, j);
        fits.push(RateFit {
            j,
            rate: fit_decay_rate(t, &y),
            predicted: -slow.re,
            high: 2f64.powi(j) >= 4.0 * critical && core,
            parabolic: slow.im != 0.0 && core,
        });
    }
    let parabolic: Vec<&RateFit> = fits.iter().filter(|f| f.parabolic && f.rate.is_some()).collect();
    let low_ratios = parabolic
        .windows(2)
        .filter(|w| w[1].j == w[0].j + 1)
        .map(|w| (w[0].j, w[1].rate.unwrap() / w[0].rate.unwrap()))
        .collect();
    Ok(DampingReport {
        fits,
        plateau: params.gamma / nu,
        asserting,
        low_ratios,
    })
}

/// Kernel component `a - b / gamma` of a mode.
pub fn kernel_projection(a: Complex64, b: Complex64, params: &FluidParams) -> Complex64 {
    a - b / params.gamma
}

/// Modes whose initial kernel component is below this fraction of the
/// largest one are not tracked.
pub const KERNEL_SIGNIFICANCE: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelReport {
    pub tracked_modes: usize,
    /// Largest relative change of a tracked kernel component.
    pub max_drift: f64,
    /// `‖b_h(T)‖ / ‖b_h(0)‖` in `B^{n/2}`.
    pub bh_ratio: f64,
    /// The horizon is long enough (`T >= 2/gamma`) for the damping half.
    pub long_enough: bool,
    /// Smallest `1 + a` seen, as a regime sanity check.
    pub min_density: f64,
}

impl KernelReport {
    pub fn kernel_ok(&self) -> bool {
        self.max_drift < 1e-2
    }

    pub fn damping_ok(&self) -> bool {
        !self.long_enough || self.bh_ratio <= 0.5
    }
}

pub fn non_dissipativity_check(samples: &[Sample], bank: &FilterBank, params: &FluidParams) -> Result<KernelReport> {
    let (first, last) = match (samples.first(), samples.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::Insufficient("no samples".into())),
    };
    let grid = bank.grid();
    let kappa = |s: &Sample, m: usize| kernel_projection(s.state.a.comp(0)[m], s.state.b.comp(0)[m], params);
    let scale = (1..grid.len()).map(|m| kappa(first, m).norm()).fold(0.0, f64::max);
    let mut tracked = 0;
    let mut max_drift: f64 = 0.0;
    if scale > 0.0 {
        for m in 1..grid.len() {
            let k0 = kappa(first, m);
            if k0.norm() < KERNEL_SIGNIFICANCE * scale {
                continue;
            }
            tracked += 1;
            for s in samples {
                max_drift = max_drift.max((kappa(s, m) - k0).norm() / k0.norm());
            }
        }
    }
    let s = grid.dim() as f64 / 2.0;
    let bh = |st: &Sample| weighted_lr(&split_block_norms(bank, &st.state.b).1, bank.j_min(), s, 1.0);
    let (bh0, bh1) = (bh(first), bh(last));
    let min_density = samples
        .iter()
        .map(|s| 1.0 + grid_min(&s.state.a))
        .fold(f64::INFINITY, f64::min);
    Ok(KernelReport {
        tracked_modes: tracked,
        max_drift,
        bh_ratio: if bh0 > 0.0 { bh1 / bh0 } else { 0.0 },
        long_enough: last.t - first.t >= 2.0 / params.gamma,
        min_density,
    })
}

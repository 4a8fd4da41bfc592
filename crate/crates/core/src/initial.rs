//! Initial data, normalized so that the initial energy equals the requested
//! amplitude.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::evolve::{checkpoint_load, linear_roots};
use crate::ledger::initial_energy;
use crate::lp::{psi, FilterBank, ANNULUS_INNER, ANNULUS_OUTER};
use crate::model::{FluidParams, PerturbationState};
use crate::spectral::random::{band_lattice, random_band};
use crate::spectral::{Grid, SpectralField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InitialKind {
    /// Independent Gaussian coefficients for `a`, `u`, `b` in the band.
    #[default]
    RandomBand,
    /// Taylor-Green vortex at the scale of the lowest band block.
    TaylorGreen,
    /// One resolved mode inside the plateau of the lowest band block.
    SingleMode,
    /// Restart from a checkpoint, unscaled.
    Checkpoint,
    /// Per mode, a kernel component plus a slow eigenvector of the linear
    /// flow, on the resolved modes where a block profile of the band equals one.
    EigenBand,
}

impl fmt::Display for InitialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitialKind::RandomBand => "random-band",
            InitialKind::TaylorGreen => "taylor-green",
            InitialKind::SingleMode => "single-mode",
            InitialKind::Checkpoint => "checkpoint",
            InitialKind::EigenBand => "eigen-band",
        })
    }
}

impl FromStr for InitialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "random-band" => InitialKind::RandomBand,
            "taylor-green" => InitialKind::TaylorGreen,
            "single-mode" => InitialKind::SingleMode,
            "checkpoint" => InitialKind::Checkpoint,
            "eigen-band" => InitialKind::EigenBand,
            other => {
                return Err(Error::Config(format!(
                    "unknown initial kind '{other}' (expected random-band, taylor-green, single-mode, checkpoint or eigen-band)"
                )))
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InitialSpec {
    pub kind: InitialKind,
    /// Target initial energy `c0`.
    pub amplitude: f64,
    /// Dyadic blocks `[j_lo, j_hi]` the data lives in.
    pub band: (i32, i32),
    pub seed: u64,
    pub checkpoint: Option<PathBuf>,
}

impl Default for InitialSpec {
    fn default() -> Self {
        InitialSpec {
            kind: InitialKind::RandomBand,
            amplitude: 1e-2,
            band: (-2, 0),
            seed: 1,
            checkpoint: None,
        }
    }
}

fn resolved(grid: &Grid, lattice: &[i64]) -> bool {
    let cut = grid.dealias_index();
    lattice.iter().take(grid.dim()).all(|m| m.abs() <= cut)
}

fn set_pair(f: &mut SpectralField, c: usize, grid: &Grid, lattice: &[i64], z: Complex64) {
    let mode = grid.mode_of(lattice);
    let conj = grid.conjugate_mode(mode);
    f.comp_mut(c)[mode] = z;
    f.comp_mut(c)[conj] = z.conj();
}

/// Sets `(a, b, v)` at a mode and its conjugate, with `u = -i k/|k| v`.
fn set_abv(s: &mut PerturbationState, lattice: &[i64], abv: [Complex64; 3]) {
    let grid = s.grid().clone();
    let mode = grid.mode_of(lattice);
    let r = grid.kmod(mode);
    set_pair(&mut s.a, 0, &grid, lattice, abv[0]);
    set_pair(&mut s.b, 0, &grid, lattice, abv[1]);
    for c in 0..grid.dim() {
        let khat = grid.k(mode)[c] / r;
        set_pair(&mut s.u, c, &grid, lattice, Complex64::new(0.0, -khat) * abv[2]);
    }
}

fn in_core(j: i32, r: f64) -> bool {
    psi(2f64.powi(-j) * r) == 1.0
}

fn raw_state(bank: &FilterBank, params: &FluidParams, spec: &InitialSpec) -> Result<PerturbationState> {
    let grid = bank.grid().clone();
    let dim = grid.dim();
    let l = grid.period_scale();
    let (j_lo, j_hi) = spec.band;
    let k_lo = ANNULUS_INNER * 2f64.powi(j_lo);
    let k_hi = ANNULUS_OUTER * 2f64.powi(j_hi);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut s = PerturbationState::zeros(&grid);
    match spec.kind {
        InitialKind::RandomBand => {
            s.a = random_band(&grid, 1, k_lo, k_hi, &mut rng);
            s.u = random_band(&grid, dim, k_lo, k_hi, &mut rng);
            s.b = random_band(&grid, 1, k_lo, k_hi, &mut rng);
        }
        InitialKind::TaylorGreen => {
            let m = ((2f64.powi(j_lo) * l).round() as i64).max(1);
            let k = m as f64 / l;
            s.u = SpectralField::vector_from_fn(&grid, |x, c| {
                let (sx, cx) = (k * x[0]).sin_cos();
                let (sy, cy) = (k * x[1]).sin_cos();
                let cz = if dim == 3 { (k * x[2]).cos() } else { 1.0 };
                match c {
                    0 => sx * cy * cz,
                    1 => -cx * sy * cz,
                    _ => 0.0,
                }
            });
        }
        InitialKind::SingleMode => {
            let lattice = band_lattice(dim, l, 4.0 / 3.0 * 2f64.powi(j_lo), 1.5 * 2f64.powi(j_lo))
                .into_iter()
                .find(|m| resolved(&grid, &m[..dim]))
                .ok_or_else(|| {
                    Error::Config(format!("no resolved mode lies inside the plateau of block {j_lo}"))
                })?;
            let half = Complex64::new(0.5, 0.0);
            set_abv(&mut s, &lattice[..dim], [half, half, Complex64::new(0.0, 0.5)]);
        }
        InitialKind::EigenBand => {
            for lattice in band_lattice(dim, l, k_lo, k_hi) {
                let draws: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
                let m = &lattice[..dim];
                if !resolved(&grid, m) {
                    continue;
                }
                let r = m.iter().map(|x| (x * x) as f64).sum::<f64>().sqrt() / l;
                if !(j_lo..=j_hi).any(|j| in_core(j, r)) {
                    continue;
                }
                let kernel = Complex64::new(draws[0], draws[1]);
                let slow = Complex64::new(draws[2], draws[3]);
                let (lambda, _) = linear_roots(r, params);
                let e = [Complex64::new(-r, 0.0), Complex64::new(-params.gamma * r, 0.0), lambda];
                let norm = e.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let abv = [kernel + slow * e[0] / norm, slow * e[1] / norm, slow * e[2] / norm];
                set_abv(&mut s, m, abv);
            }
        }
        InitialKind::Checkpoint => unreachable!("handled by make_initial"),
    }
    Ok(s)
}

/// Builds the initial state and its start time. Generated data is scaled so
/// its initial energy equals `spec.amplitude`; checkpoints are used as stored.
pub fn make_initial(bank: &FilterBank, params: &FluidParams, spec: &InitialSpec) -> Result<(PerturbationState, f64)> {
    let grid = bank.grid().clone();
    if spec.kind == InitialKind::Checkpoint {
        let path = spec
            .checkpoint
            .as_ref()
            .ok_or_else(|| Error::Config("checkpoint initial data needs a path".into()))?;
        let (state, t) = checkpoint_load(path)?;
        if **state.grid() != *grid {
            return Err(Error::Config(format!(
                "checkpoint grid {:?} differs from the configured grid {:?}",
                state.grid(),
                grid
            )));
        }
        return Ok((state, t));
    }
    if !(spec.amplitude >= 0.0 && spec.amplitude.is_finite()) {
        return Err(Error::Config(format!("amplitude must be nonnegative, got {}", spec.amplitude)));
    }
    let (j_lo, j_hi) = spec.band;
    if j_lo > j_hi || j_lo < bank.j_min() || j_hi > bank.j_max() {
        return Err(Error::Config(format!(
            "band [{j_lo}, {j_hi}] outside the grid's block range [{}, {}]",
            bank.j_min(),
            bank.j_max()
        )));
    }
    if spec.amplitude == 0.0 {
        return Ok((PerturbationState::zeros(&grid), 0.0));
    }
    let raw = raw_state(bank, params, spec)?;
    let e0 = initial_energy(bank, &raw);
    if !(e0 > 0.0) {
        return Err(Error::Config(format!(
            "band [{j_lo}, {j_hi}] holds no resolved modes on this grid"
        )));
    }
    Ok((raw.scale(spec.amplitude / e0), 0.0))
}

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Periodic box `(2*pi*L)^n` sampled on `N^n` points.
///
/// Modes are stored row-major with axis 0 slowest. Along each axis the
/// wavenumber index follows the standard DFT ordering `0, 1, .., N/2-1, -N/2, .., -1`
/// and the physical wavenumber is `m / L`.
pub struct Grid {
    dim: usize,
    n: usize,
    period_scale: f64,
    kvec: Vec<[f64; 3]>,
    kmod: Vec<f64>,
    nyquist: Vec<bool>,
    conj: Vec<usize>,
    keep: Vec<bool>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.dim)
            .field("n", &self.n)
            .field("period_scale", &self.period_scale)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.n == other.n
            && self.period_scale.to_bits() == other.period_scale.to_bits()
    }
}

/// DFT-ordered integer wavenumber of array index `i` on an axis of length `n`.
#[inline]
pub fn dft_index(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

impl Grid {
    pub fn new(dim: usize, n: usize, period_scale: f64) -> Result<Arc<Grid>> {
        if dim != 2 && dim != 3 {
            return Err(Error::Config(format!("dimension must be 2 or 3, got {dim}")));
        }
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::Config(format!(
                "modes per axis must be a power of two >= 4, got {n}"
            )));
        }
        if !(period_scale > 0.0 && period_scale.is_finite()) {
            return Err(Error::Config(format!(
                "period scale L must be positive, got {period_scale}"
            )));
        }
        let total = n.pow(dim as u32);
        let mut kvec = Vec::with_capacity(total);
        let mut kmod = Vec::with_capacity(total);
        let mut nyquist = Vec::with_capacity(total);
        for idx in 0..total {
            let mut k = [0.0; 3];
            let mut nyq = false;
            let mut rem = idx;
            for axis in (0..dim).rev() {
                let i = rem % n;
                rem /= n;
                k[axis] = dft_index(i, n) as f64 / period_scale;
                nyq |= i == n / 2;
            }
            kmod.push((k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt());
            kvec.push(k);
            nyquist.push(nyq);
        }
        let conj = (0..total)
            .map(|idx| {
                let mut rem = idx;
                let mut out = 0;
                let mut place = 1;
                for _ in 0..dim {
                    let i = rem % n;
                    rem /= n;
                    out += ((n - i) % n) * place;
                    place *= n;
                }
                out
            })
            .collect();
        let cut = (n as i64) / 3;
        let keep = (0..total)
            .map(|idx| {
                let mut rem = idx;
                (0..dim).all(|_| {
                    let i = rem % n;
                    rem /= n;
                    dft_index(i, n).abs() <= cut
                })
            })
            .collect();
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        Ok(Arc::new(Grid {
            dim,
            n,
            period_scale,
            kvec,
            kmod,
            nyquist,
            conj,
            keep,
            fwd,
            inv,
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Modes per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn period_scale(&self) -> f64 {
        self.period_scale
    }

    /// Number of modes (equal to the number of physical samples).
    pub fn len(&self) -> usize {
        self.kmod.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kmod.is_empty()
    }

    pub fn volume(&self) -> f64 {
        (2.0 * PI * self.period_scale).powi(self.dim as i32)
    }

    pub fn k(&self, mode: usize) -> &[f64] {
        &self.kvec[mode][..self.dim]
    }

    pub fn kmod(&self, mode: usize) -> f64 {
        self.kmod[mode]
    }

    pub fn moduli(&self) -> &[f64] {
        &self.kmod
    }

    pub fn is_nyquist(&self, mode: usize) -> bool {
        self.nyquist[mode]
    }

    /// Smallest nonzero modulus `1/L`.
    pub fn k_min(&self) -> f64 {
        1.0 / self.period_scale
    }

    /// Largest modulus present on the grid (the Nyquist corner).
    pub fn k_max(&self) -> f64 {
        self.kmod.iter().copied().fold(0.0, f64::max)
    }

    /// Per-axis Nyquist wavenumber `(N/2)/L`.
    pub fn k_nyquist(&self) -> f64 {
        (self.n / 2) as f64 / self.period_scale
    }

    /// Largest integer wavenumber index kept by the 2/3 rule.
    pub fn dealias_index(&self) -> i64 {
        // |m| > (2/3)(N/2) is removed
        (self.n as i64) / 3
    }

    /// Whether the 2/3 rule keeps a mode.
    pub fn dealias_keeps(&self, mode: usize) -> bool {
        self.keep[mode]
    }

    /// Per-axis wavenumber cutoff of the 2/3 rule.
    pub fn dealias_cutoff(&self) -> f64 {
        self.dealias_index() as f64 / self.period_scale
    }

    /// Integer wavenumber indices of a flat mode index.
    pub fn mode_indices(&self, mode: usize) -> [i64; 3] {
        let mut out = [0; 3];
        let mut rem = mode;
        for axis in (0..self.dim).rev() {
            out[axis] = dft_index(rem % self.n, self.n);
            rem /= self.n;
        }
        out
    }

    /// Flat mode index of integer wavenumbers (taken modulo N).
    pub fn mode_of(&self, m: &[i64]) -> usize {
        let n = self.n as i64;
        m.iter()
            .take(self.dim)
            .fold(0usize, |acc, &mi| acc * self.n + mi.rem_euclid(n) as usize)
    }

    /// Flat index of `-k`.
    pub fn conjugate_mode(&self, mode: usize) -> usize {
        self.conj[mode]
    }

    /// Physical coordinate of a sample along each axis.
    pub fn position(&self, sample: usize) -> [f64; 3] {
        let h = 2.0 * PI * self.period_scale / self.n as f64;
        let mut out = [0.0; 3];
        let mut rem = sample;
        for axis in (0..self.dim).rev() {
            out[axis] = (rem % self.n) as f64 * h;
            rem /= self.n;
        }
        out
    }

    /// In-place unnormalized multi-dimensional transform.
    fn transform(&self, data: &mut [Complex64], forward: bool) {
        let fft = if forward { &self.fwd } else { &self.inv };
        let n = self.n;
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        // contiguous last axis
        fft.process_with_scratch(data, &mut scratch);
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for axis in 0..self.dim - 1 {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            let block = stride * n;
            for base in (0..data.len()).step_by(block) {
                for off in 0..stride {
                    let start = base + off;
                    for (i, v) in line.iter_mut().enumerate() {
                        *v = data[start + i * stride];
                    }
                    fft.process_with_scratch(&mut line, &mut scratch);
                    for (i, v) in line.iter().enumerate() {
                        data[start + i * stride] = *v;
                    }
                }
            }
        }
    }

    /// Physical samples to normalized Fourier coefficients (`c_k = N^-n sum f e^{-ikx}`).
    pub fn forward(&self, samples: &[f64]) -> Result<Vec<Complex64>> {
        if samples.len() != self.len() {
            return Err(Error::Config(format!(
                "sample array has {} entries, grid expects {}",
                samples.len(),
                self.len()
            )));
        }
        let scale = 1.0 / self.len() as f64;
        let mut data: Vec<Complex64> = samples
            .iter()
            .map(|&x| Complex64::new(x * scale, 0.0))
            .collect();
        self.transform(&mut data, true);
        Ok(data)
    }

    /// Direct `O(N^2n)` summation of the forward transform. Reference for
    /// small grids only.
    pub fn forward_direct(&self, samples: &[f64]) -> Result<Vec<Complex64>> {
        if samples.len() != self.len() {
            return Err(Error::Config(format!(
                "sample array has {} entries, grid expects {}",
                samples.len(),
                self.len()
            )));
        }
        let scale = 1.0 / self.len() as f64;
        Ok((0..self.len())
            .map(|mode| {
                let k = self.k(mode);
                samples
                    .iter()
                    .enumerate()
                    .map(|(i, &f)| {
                        let x = self.position(i);
                        let phase: f64 = (0..self.dim).map(|a| k[a] * x[a]).sum();
                        Complex64::from_polar(f * scale, -phase)
                    })
                    .sum()
            })
            .collect())
    }

    /// Coefficients to physical samples; the imaginary round-off is dropped.
    pub fn inverse(&self, coeffs: &[Complex64]) -> Vec<f64> {
        let mut data = coeffs.to_vec();
        self.transform(&mut data, false);
        data.into_iter().map(|c| c.re).collect()
    }

    /// Inverse transform of two real fields packed as `f + i g`.
    pub(crate) fn inverse_pair(&self, f: &[Complex64], g: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
        let i = Complex64::new(0.0, 1.0);
        let mut data: Vec<Complex64> = f.iter().zip(g).map(|(a, b)| a + i * b).collect();
        self.transform(&mut data, false);
        data.into_iter().map(|c| (c.re, c.im)).unzip()
    }

    /// Forward transform of two real sample arrays in one complex pass.
    pub(crate) fn forward_pair(&self, f: &[f64], g: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let scale = 1.0 / self.len() as f64;
        let mut data: Vec<Complex64> = f
            .iter()
            .zip(g)
            .map(|(&a, &b)| Complex64::new(a * scale, b * scale))
            .collect();
        self.transform(&mut data, true);
        let mut out_f = vec![Complex64::new(0.0, 0.0); data.len()];
        let mut out_g = vec![Complex64::new(0.0, 0.0); data.len()];
        for mode in 0..data.len() {
            let z = data[mode];
            let zc = data[self.conjugate_mode(mode)].conj();
            out_f[mode] = 0.5 * (z + zc);
            out_g[mode] = Complex64::new(0.0, -0.5) * (z - zc);
        }
        (out_f, out_g)
    }

    /// Inverse transforms of several coefficient arrays, two per complex pass.
    pub(crate) fn inverse_many(&self, fields: &[&[Complex64]]) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(fields.len());
        for chunk in fields.chunks(2) {
            match chunk {
                [f, g] => {
                    let (pf, pg) = self.inverse_pair(f, g);
                    out.push(pf);
                    out.push(pg);
                }
                [f] => out.push(self.inverse(f)),
                _ => unreachable!(),
            }
        }
        out
    }

    /// Forward transforms of several real sample arrays, two per complex pass.
    pub(crate) fn forward_many(&self, samples: &[Vec<f64>]) -> Vec<Vec<Complex64>> {
        let mut out = Vec::with_capacity(samples.len());
        for chunk in samples.chunks(2) {
            match chunk {
                [f, g] => {
                    let (cf, cg) = self.forward_pair(f, g);
                    out.push(cf);
                    out.push(cg);
                }
                [f] => out.push(self.forward(f).expect("sample length matches grid")),
                _ => unreachable!(),
            }
        }
        out
    }
}

//! Randomized probes of the product, commutator, composition and heat
//! inequalities. Each probe evaluates both sides with all constants set to
//! one and records the empirical supremum of LHS / RHS.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bank::FilterBank;
use super::blocks::{besov_l1, dyadic_block, weighted_lr};
use crate::error::Result;
use crate::spectral::ops::{advection, dealias, helmholtz, product};
use crate::spectral::random::random_band;
use crate::spectral::SpectralField;

/// Fields are drawn below this modulus so that every quadratic product is
/// resolved exactly on the grids the probes are compared on.
const PROBE_K_MAX: f64 = 2.5;

#[derive(Clone, Debug)]
pub struct ProbeResult {
    pub lemma: &'static str,
    pub variant: String,
    pub trials: usize,
    pub skipped: usize,
    pub sup_ratio: f64,
}

#[derive(Clone, Debug, Default)]
pub struct ProbeReport {
    pub results: Vec<ProbeResult>,
}

impl ProbeReport {
    pub fn get(&self, lemma: &str, variant: &str) -> Option<&ProbeResult> {
        self.results
            .iter()
            .find(|r| r.lemma == lemma && r.variant == variant)
    }

    pub fn all_finite(&self) -> bool {
        self.results.iter().all(|r| r.sup_ratio.is_finite())
    }

    /// Per entry, `max/min` of the supremum ratios of `self` and `other`.
    pub fn spread(&self, other: &ProbeReport) -> Vec<(String, f64)> {
        self.results
            .iter()
            .filter_map(|r| {
                other.get(r.lemma, &r.variant).map(|o| {
                    let (a, b) = (r.sup_ratio, o.sup_ratio);
                    let spread = if a == b { 1.0 } else { a.max(b) / a.min(b) };
                    (format!("{} [{}]", r.lemma, r.variant), spread)
                })
            })
            .collect()
    }
}

struct Sup {
    lemma: &'static str,
    variant: String,
    trials: usize,
    skipped: usize,
    sup: f64,
}

impl Sup {
    fn new(lemma: &'static str, variant: impl Into<String>) -> Self {
        Sup {
            lemma,
            variant: variant.into(),
            trials: 0,
            skipped: 0,
            sup: 0.0,
        }
    }

    fn record(&mut self, ratio: Option<f64>) {
        self.trials += 1;
        match ratio {
            Some(r) => self.sup = self.sup.max(r),
            None => self.skipped += 1,
        }
    }

    fn finish(self) -> ProbeResult {
        ProbeResult {
            lemma: self.lemma,
            variant: self.variant,
            trials: self.trials,
            skipped: self.skipped,
            sup_ratio: self.sup,
        }
    }
}

fn ratio(lhs: f64, rhs: f64) -> Option<f64> {
    (rhs > 0.0).then(|| lhs / rhs)
}

/// `||uv||_{B^{s1+s2-n/2}} / (||u||_{B^s1} ||v||_{B^s2})`; `None` when the
/// right side vanishes.
pub fn product_ratio(
    bank: &FilterBank,
    u: &SpectralField,
    v: &SpectralField,
    s1: f64,
    s2: f64,
) -> Result<Option<f64>> {
    let n = bank.grid().dim() as f64;
    let uv = product(u, v)?;
    let lhs = besov_l1(bank, &uv, s1 + s2 - 0.5 * n);
    Ok(ratio(lhs, besov_l1(bank, u, s1) * besov_l1(bank, v, s2)))
}

/// `sum_j 2^{js} ||[Delta_j, u.grad] v|| / (||grad u||_{B^{n/2}} ||v||_{B^s})`.
pub fn commutator_ratio(
    bank: &FilterBank,
    u: &SpectralField,
    v: &SpectralField,
    s: f64,
) -> Result<Option<f64>> {
    let lhs = commutator_sum(bank, u, v, s)?;
    let grid = bank.grid().clone();
    let n = grid.dim() as f64;
    let grad_u = weighted_lr(
        &bank.block_norms_weighted(u, |mode| grid.kmod(mode)),
        bank.j_min(),
        0.5 * n,
        1.0,
    );
    Ok(ratio(lhs, grad_u * besov_l1(bank, v, s)))
}

/// `sum_j 2^{js} ||Delta_j(u.grad v) - u.grad Delta_j v||`.
pub fn commutator_sum(bank: &FilterBank, u: &SpectralField, v: &SpectralField, s: f64) -> Result<f64> {
    let transport = advection(u, v)?;
    let mut norms = Vec::with_capacity(bank.num_blocks());
    for j in bank.block_range() {
        let (vj, _) = dyadic_block(bank, j, v);
        let (tj, _) = dyadic_block(bank, j, &transport);
        if vj.max_abs_coeff() == 0.0 && tj.max_abs_coeff() == 0.0 {
            norms.push(0.0);
            continue;
        }
        norms.push(tj.sub(&advection(u, &vj)?).l2_norm());
    }
    Ok(weighted_lr(&norms, bank.j_min(), s, 1.0))
}

/// `||G(f)||_{B^s} / ||f||_{B^s}` with `G` applied pointwise.
pub fn composition_ratio(
    bank: &FilterBank,
    f: &SpectralField,
    g: impl Fn(f64) -> f64,
    s: f64,
) -> Result<Option<f64>> {
    let samples: Vec<f64> = f.to_physical().into_iter().map(g).collect();
    let gf = SpectralField::from_physical(bank.grid(), 1, &samples)?;
    Ok(ratio(besov_l1(bank, &gf, s), besov_l1(bank, f, s)))
}

/// Heat flow `u_t - Delta u = f` with time-independent `f`, solved exactly
/// per mode on a quadratic time grid over `[0, horizon]`. Returns
/// `||u||_{L~^{q1}(B^{sigma + 2/q1})} / (||u0||_{B^sigma} + ||f||_{L~^1(B^sigma)})`
/// for `q1` either `1` or infinity.
pub fn heat_ratio(
    bank: &FilterBank,
    u0: &SpectralField,
    f: &SpectralField,
    sigma: f64,
    q1: f64,
    horizon: f64,
    samples: usize,
) -> Option<f64> {
    let grid = bank.grid();
    let active: Vec<(usize, f64, Complex64, Complex64, usize, [f64; 2])> = (0..grid.len())
        .filter_map(|mode| {
            let (a, b) = (u0.coeffs()[mode], f.coeffs()[mode]);
            if a.norm_sqr() + b.norm_sqr() == 0.0 {
                return None;
            }
            bank.mode_weights(mode)
                .map(|(first, w)| (mode, grid.kmod(mode).powi(2), a, b, first, w))
        })
        .collect();
    let nb = bank.num_blocks();
    let vol = grid.volume();
    let mut max = vec![0.0f64; nb];
    let mut integral = vec![0.0; nb];
    let mut prev: Option<(f64, Vec<f64>)> = None;
    for i in 0..samples {
        let x = i as f64 / (samples - 1) as f64;
        let t = horizon * x * x;
        let mut e = vec![0.0; nb];
        for &(_, k2, a, b, first, w) in &active {
            let decay = (-k2 * t).exp();
            let z = a * decay + b * (-(-k2 * t).exp_m1() / k2);
            let zz = z.norm_sqr();
            e[first] += w[0] * w[0] * zz;
            if w[1] != 0.0 {
                e[first + 1] += w[1] * w[1] * zz;
            }
        }
        let norms: Vec<f64> = e.into_iter().map(|v| (vol * v).sqrt()).collect();
        for (m, v) in max.iter_mut().zip(&norms) {
            *m = m.max(*v);
        }
        if let Some((tp, np)) = &prev {
            for ((acc, a), b) in integral.iter_mut().zip(np).zip(&norms) {
                *acc += 0.5 * (t - tp) * (a + b);
            }
        }
        prev = Some((t, norms));
    }
    let lhs = if q1.is_infinite() {
        weighted_lr(&max, bank.j_min(), sigma, 1.0)
    } else {
        weighted_lr(&integral, bank.j_min(), sigma + 2.0, 1.0)
    };
    let rhs = besov_l1(bank, u0, sigma) + horizon * besov_l1(bank, f, sigma);
    ratio(lhs, rhs)
}

fn sub_band<R: Rng>(rng: &mut R, k_min: f64, k_max: f64) -> (f64, f64) {
    let lo = k_min * (1.5 / k_min).powf(rng.gen::<f64>());
    let hi = (2.0 * lo + 0.5).min(k_max);
    (lo, hi)
}

fn band_field<R: Rng>(bank: &FilterBank, ncomp: usize, k_max: f64, rng: &mut R) -> SpectralField {
    let (lo, hi) = sub_band(rng, bank.grid().k_min(), k_max);
    random_band(bank.grid(), ncomp, lo, hi, rng)
}

/// Runs every probe `trials` times with fields drawn from `seed`.
pub fn lemma_probes(bank: &FilterBank, trials: usize, seed: u64) -> Result<ProbeReport> {
    let grid = bank.grid().clone();
    let n = grid.dim() as f64;
    let k_max = PROBE_K_MAX.min(0.49 * grid.dealias_cutoff());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut prod_a = Sup::new("product", "s1=s2=n/2");
    let mut prod_b = Sup::new("product", "s1=n/2,s2=n/2-1");
    let mut comm_a = Sup::new("commutator", "s=n/2-1");
    let mut comm_b = Sup::new("commutator", "s=n/2");
    let mut comp_a = Sup::new("composition", "x/(1+x),s=n/2");
    let mut comp_b = Sup::new("composition", "x/(1+x),s=1/2");
    let mut comp_c = Sup::new("composition", "sin,s=n/2");
    let mut comp_d = Sup::new("composition", "sin,s=1/2");
    let mut heat_a = Sup::new("heat", "q1=inf,q2=1");
    let mut heat_b = Sup::new("heat", "q1=1,q2=1");

    for _ in 0..trials {
        let u = band_field(bank, 1, k_max, &mut rng);
        let v = band_field(bank, 1, k_max, &mut rng);
        prod_a.record(product_ratio(bank, &u, &v, 0.5 * n, 0.5 * n)?);
        prod_b.record(product_ratio(bank, &u, &v, 0.5 * n, 0.5 * n - 1.0)?);

        let w = band_field(bank, grid.dim(), k_max, &mut rng);
        let (pw, _) = helmholtz(&w)?;
        let pw = dealias(&pw);
        comm_a.record(commutator_ratio(bank, &pw, &v, 0.5 * n - 1.0)?);
        comm_b.record(commutator_ratio(bank, &pw, &v, 0.5 * n)?);

        let f = band_field(bank, 1, k_max, &mut rng);
        let peak = f.to_physical().iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let level: f64 = rng.gen_range(0.05..0.5);
        let f = if peak > 0.0 { f.scale(level / peak) } else { f };
        comp_a.record(composition_ratio(bank, &f, |x| x / (1.0 + x), 0.5 * n)?);
        comp_b.record(composition_ratio(bank, &f, |x| x / (1.0 + x), 0.5)?);
        comp_c.record(composition_ratio(bank, &f, f64::sin, 0.5 * n)?);
        comp_d.record(composition_ratio(bank, &f, f64::sin, 0.5)?);

        let u0 = band_field(bank, 1, k_max, &mut rng);
        let forcing = band_field(bank, 1, k_max, &mut rng);
        let sigma = 0.5 * n - 1.0;
        heat_a.record(heat_ratio(bank, &u0, &forcing, sigma, f64::INFINITY, 1.0, 400));
        heat_b.record(heat_ratio(bank, &u0, &forcing, sigma, 1.0, 1.0, 400));
    }
    Ok(ProbeReport {
        results: [
            prod_a, prod_b, comm_a, comm_b, comp_a, comp_b, comp_c, comp_d, heat_a, heat_b,
        ]
        .into_iter()
        .map(Sup::finish)
        .collect(),
    })
}

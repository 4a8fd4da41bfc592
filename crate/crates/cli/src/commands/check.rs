use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use thetaflow::evolve::{ConservedStepper, Scheme, Stepper};
use thetaflow::initial::{make_initial, InitialKind, InitialSpec};
use thetaflow::lp::{dyadic_block, lemma_probes, FilterBank, ANNULUS_OUTER};
use thetaflow::model::{
    from_perturbation, primitive_from_pressure, residual_g_equation, residual_phi_equation,
};
use thetaflow::spectral::ops::helmholtz;
use thetaflow::spectral::random::random_band;
use thetaflow::spectral::{Grid, SpectralField};

use crate::config::RunConfig;
use crate::error::Result;
use crate::Status;

/// Bounds of the hard invariants.
pub const FFT_TOL: f64 = 1e-12;
pub const PARTITION_TOL: f64 = 1e-12;
pub const RECONSTRUCTION_TOL: f64 = 1e-10;
pub const PROJECTOR_TOL: f64 = 1e-10;
pub const RESIDUAL_TOL: f64 = 1e-6;
pub const CONTROL_MIN: f64 = 1e-3;
pub const CONSISTENCY_TOL: f64 = 1e-8;

/// Linear-regime amplitude and step of the residual suite.
const RESIDUAL_AMPLITUDE: f64 = 1e-4;
const RESIDUAL_STEP: f64 = 5e-3;
const PROBE_TRIALS: usize = 20;
const CONSISTENCY_STEPS: usize = 10;

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

fn suite(name: &'static str, ok: bool, detail: String) -> SuiteResult {
    SuiteResult { name, ok, detail }
}

/// Forward transform against direct summation on an `8^n` grid.
fn fft_oracle(cfg: &RunConfig, seed: u64) -> Result<SuiteResult> {
    let g = Grid::new(cfg.dim, 8, cfg.period_scale)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_band(&g, 1, g.k_min(), g.k_max(), &mut rng).to_physical();
    let fast = g.forward(&f)?;
    let slow = g.forward_direct(&f)?;
    let err = fast.iter().zip(&slow).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(suite("fft-oracle", err < FFT_TOL, format!("8^{} grid, max coefficient error {err:.2e}", cfg.dim)))
}

fn partition(bank: &FilterBank) -> SuiteResult {
    let res = bank.partition_residual();
    suite("partition-of-unity", res < PARTITION_TOL, format!("max |sum psi - 1| = {res:.2e}"))
}

fn reconstruction(bank: &FilterBank, seed: u64) -> SuiteResult {
    let g = bank.grid();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = random_band(g, 1, g.k_min(), g.k_max(), &mut rng);
    z.remove_mean();
    let mut sum = SpectralField::scalar_zeros(g);
    for j in bank.block_range() {
        sum.axpy(1.0, &dyadic_block(bank, j, &z).0);
    }
    let err = sum.sub(&z).l2_norm() / z.l2_norm();
    suite("block-reconstruction", err < RECONSTRUCTION_TOL, format!("relative error {err:.2e}"))
}

fn projectors(bank: &FilterBank, seed: u64) -> Result<SuiteResult> {
    let g = bank.grid();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let u = random_band(g, g.dim(), g.k_min(), g.k_max(), &mut rng);
        let n = u.l2_norm();
        let (p, q) = helmholtz(&u)?;
        let (pp, pq) = helmholtz(&p)?;
        worst = worst
            .max(p.add(&q).sub(&u).l2_norm() / n)
            .max(pp.sub(&p).l2_norm() / n)
            .max(pq.l2_norm() / n)
            .max(p.inner(&q).abs() / (n * n));
    }
    Ok(suite("helmholtz-projectors", worst < PROJECTOR_TOL, format!("worst relative defect {worst:.2e}")))
}

fn probes(bank: &FilterBank, seed: u64) -> Result<SuiteResult> {
    let report = lemma_probes(bank, PROBE_TRIALS, seed)?;
    let worst = report.results.iter().map(|r| r.sup_ratio).fold(0.0, f64::max);
    Ok(suite(
        "lemma-probes",
        report.all_finite(),
        format!("{} probes, {PROBE_TRIALS} trials each, largest empirical constant {worst:.3}", report.results.len()),
    ))
}

/// Residuals of the transport and effective-velocity identities over one step
/// of linear-regime data, with a perturbed pair as negative control.
fn residuals(cfg: &RunConfig, bank: &FilterBank) -> Result<Vec<SuiteResult>> {
    let params = cfg.params;
    let spec = InitialSpec {
        kind: InitialKind::EigenBand,
        amplitude: RESIDUAL_AMPLITUDE,
        band: (bank.j_min(), bank.j_max()),
        seed: cfg.initial.seed,
        checkpoint: None,
    };
    let (s0, _) = make_initial(bank, &params, &spec)?;
    let s1 = Stepper::new(bank.grid(), &params, Scheme::Ifrk4, RESIDUAL_STEP)?.step(&s0)?;
    let mut bad = s1.clone();
    bad.b = bad.b.scale(1.0 + 1e-3);

    let phi = residual_phi_equation(&s0, &s1, RESIDUAL_STEP, &params)?.relative();
    let phi_bad = residual_phi_equation(&s0, &bad, RESIDUAL_STEP, &params)?.relative();
    let g = residual_g_equation(&s0, &s1, RESIDUAL_STEP, &params)?;
    let g_bad = residual_g_equation(&s0, &bad, RESIDUAL_STEP, &params)?.residual.relative();
    let g_rel = g.residual.relative();
    let form = if g.paper_form { "" } else { " (general viscosity form)" };
    Ok(vec![
        suite(
            "residual-phi",
            phi < RESIDUAL_TOL && phi_bad > CONTROL_MIN,
            format!("relative {phi:.2e}, negative control {phi_bad:.2e}"),
        ),
        suite(
            "residual-G",
            g_rel < RESIDUAL_TOL && g_bad > CONTROL_MIN,
            format!("relative {g_rel:.2e}, negative control {g_bad:.2e}{form}"),
        ),
    ])
}

/// Pressure of the perturbation form against `A (rho theta)^gamma` from the
/// conservative form after a few steps from the same data.
fn consistency(cfg: &RunConfig, bank: &FilterBank) -> Result<SuiteResult> {
    let params = cfg.params;
    let dt = cfg.integrator.dt;
    // products of resolved data are alias-free, where both forms agree exactly
    let cut = bank.grid().dealias_cutoff();
    let mut j_hi = bank.j_min();
    while j_hi < bank.j0() && ANNULUS_OUTER * 2f64.powi(j_hi + 1) <= cut {
        j_hi += 1;
    }
    let spec = InitialSpec {
        kind: InitialKind::RandomBand,
        amplitude: 1e-2,
        band: (bank.j_min(), j_hi),
        seed: cfg.initial.seed,
        checkpoint: None,
    };
    let (s0, _) = make_initial(bank, &params, &spec)?;
    let mut c = primitive_from_pressure(&from_perturbation(&s0), &params)?.to_conserved()?;
    let conserved = ConservedStepper::new(bank.grid(), &params, dt)?;
    let perturbation = Stepper::new(bank.grid(), &params, Scheme::Ifrk4, dt)?;
    let mut s = s0;
    for _ in 0..CONSISTENCY_STEPS {
        s = perturbation.step(&s)?;
        c = conserved.step(&c)?;
    }
    let p3: Vec<f64> = s.b.to_physical().iter().map(|b| 1.0 + b).collect();
    let p1 = c.pressure(&params)?.to_physical();
    let pmax = p3.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let dev = p3.iter().zip(&p1).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / pmax;
    Ok(suite(
        "formulation-consistency",
        dev < CONSISTENCY_TOL,
        format!("{CONSISTENCY_STEPS} steps of dt = {dt}: max relative pressure deviation {dev:.2e}"),
    ))
}

/// Runs every suite on the configured grid. `corrupt_block` scales one filter
/// block before the suites run, to exercise the failure path.
pub fn run_suites(cfg: &RunConfig, corrupt_block: Option<i32>) -> Result<Vec<SuiteResult>> {
    let mut bank = cfg.bank()?;
    if let Some(j) = corrupt_block {
        bank.corrupt_block(j, 1.5);
    }
    let seed = cfg.initial.seed;
    let mut out = vec![
        fft_oracle(cfg, seed)?,
        partition(&bank),
        reconstruction(&bank, seed),
        projectors(&bank, seed)?,
        probes(&bank, seed)?,
    ];
    out.extend(residuals(cfg, &bank)?);
    out.push(consistency(cfg, &bank)?);
    Ok(out)
}

pub fn cmd_check(cfg: &RunConfig, corrupt_block: Option<i32>) -> Result<Status> {
    let results = run_suites(cfg, corrupt_block)?;
    for r in &results {
        println!("[{}] {}: {}", if r.ok { "ok" } else { "FAIL" }, r.name, r.detail);
    }
    Ok(if results.iter().all(|r| r.ok) { Status::Ok } else { Status::Invalid })
}

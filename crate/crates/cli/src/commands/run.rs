use std::collections::BTreeMap;

use log::{debug, info, warn};

use thetaflow::evolve::{checkpoint_save, run_from, Termination};
use thetaflow::initial::make_initial;
use thetaflow::ledger::output::{write_blocks, write_constants, write_energy, write_rates};
use thetaflow::ledger::{
    block_decay_from_rows, continuity_inequality_check, damping_from_block_norms, estimate_terms,
    low_block_rows, pointwise_amplitude, EnergyLedger, LowBlockRow, LINEAR_AMPLITUDE,
};

use super::ensure_dir;
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::Status;

/// Headline numbers of a finished run.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub e0: f64,
    pub max_e: f64,
    pub continuity_c: f64,
    pub t: f64,
    pub steps: usize,
    pub termination: Termination,
}

impl RunReport {
    pub fn status(&self) -> Status {
        match self.termination {
            Termination::Completed => Status::Ok,
            Termination::Blowup { .. } => Status::Blowup,
        }
    }

    pub fn exit_reason(&self) -> String {
        match &self.termination {
            Termination::Completed => "completed".into(),
            Termination::Blowup { t, reason } => format!("blowup at t = {t}: {reason}"),
        }
    }
}

/// Runs the configured experiment and writes `config.txt`, `energy.csv`,
/// `blocks.csv`, `rates.csv`, `constants.csv` and `final.ckpt` to the
/// output directory. A blowup still writes everything up to the last sample.
pub fn execute(cfg: &RunConfig) -> Result<RunReport> {
    let bank = cfg.bank()?;
    let params = cfg.params;
    let out = &cfg.output;
    ensure_dir(out)?;
    std::fs::write(out.join("config.txt"), cfg.dump()).map_err(|e| CliError::Io {
        path: out.join("config.txt"),
        source: e,
    })?;

    let (s0, t0) = make_initial(&bank, &params, &cfg.initial)?;
    let asserting = pointwise_amplitude(&s0) <= LINEAR_AMPLITUDE;
    let mut ledger = EnergyLedger::new(&bank);
    let mut blocks: Vec<(f64, Vec<LowBlockRow>)> = Vec::new();
    let mut b_norms: Vec<Vec<f64>> = Vec::new();
    let mut term_max: BTreeMap<&'static str, f64> = BTreeMap::new();

    let summary = run_from(&s0, t0, &cfg.integrator, &params, |snap| {
        let rec = ledger.push(snap.t, snap.state);
        debug!("t = {:.6} dt = {:.3e} E = {:.6e}", snap.t, snap.dt, rec.e);
        blocks.push((snap.t, low_block_rows(&bank, snap.state, &params)?));
        b_norms.push(bank.block_norms(&snap.state.b));
        for (name, v) in estimate_terms(snap.state, &bank, &params)?.entries {
            if name.ends_with("_ratio") {
                let slot = term_max.entry(name).or_insert(0.0);
                *slot = slot.max(v);
            }
        }
        Ok(())
    })?;

    let fit = continuity_inequality_check(ledger.records(), summary.blew_up());
    write_energy(&out.join("energy.csv"), ledger.records())?;
    write_blocks(&out.join("blocks.csv"), &blocks)?;

    let times: Vec<f64> = blocks.iter().map(|b| b.0).collect();
    let damping = damping_from_block_norms(&times, &b_norms, &bank, &params, asserting)?;
    write_rates(&out.join("rates.csv"), &damping.fits)?;

    let res = format!("{}^{} L={}", cfg.n, cfg.dim, cfg.period_scale);
    let mut constants = vec![
        ("E0".to_string(), fit.e0, res.clone()),
        ("max_E".to_string(), fit.max_e, res.clone()),
        ("continuity_C".to_string(), fit.c, res.clone()),
        ("damping_plateau".to_string(), damping.plateau, res.clone()),
    ];
    let rows: Vec<Vec<LowBlockRow>> = blocks.into_iter().map(|b| b.1).collect();
    match block_decay_from_rows(times, &rows) {
        Ok(decay) => {
            if let Some((lo, hi)) = decay.coercivity {
                constants.push(("lyapunov_coercivity_min".into(), lo, res.clone()));
                constants.push(("lyapunov_coercivity_max".into(), hi, res.clone()));
            }
            for f in &decay.fits {
                constants.push((format!("block_decay_c_j{}", f.j), f.c_forced, res.clone()));
                constants.push((format!("block_source_C_j{}", f.j), f.c_needed, res.clone()));
            }
        }
        Err(e) => warn!("block decay not fitted: {e}"),
    }
    for (name, v) in term_max {
        constants.push((format!("max_{name}"), v, res.clone()));
    }
    write_constants(&out.join("constants.csv"), &constants)?;
    checkpoint_save(&summary.state, summary.t, out.join("final.ckpt"))?;

    let report = RunReport {
        e0: fit.e0,
        max_e: fit.max_e,
        continuity_c: fit.c,
        t: summary.t,
        steps: summary.steps,
        termination: summary.termination,
    };
    info!(
        "{}: {} after {} steps, t = {}, E0 = {:e}, max E = {:e}",
        out.display(),
        report.exit_reason(),
        report.steps,
        report.t,
        report.e0,
        report.max_e
    );
    Ok(report)
}

pub fn cmd_run(cfg: &RunConfig) -> Result<Status> {
    let report = execute(cfg)?;
    println!(
        "{} steps, t = {}, E0 = {:e}, max E = {:e}, C = {:e}: {}",
        report.steps,
        report.t,
        report.e0,
        report.max_e,
        report.continuity_c,
        report.exit_reason()
    );
    Ok(report.status())
}

use num_complex::Complex64;

use thetaflow::ledger::output::write_table;
use thetaflow::ledger::{eigen_agreement, kernel_defect, lin_eigenvalues};
use thetaflow::model::FluidParams;

use super::ensure_dir;
use crate::config::RunConfig;
use crate::error::Result;
use crate::Status;

/// Agreement required between the closed-form and dense eigenvalues.
pub const EIGEN_TOL: f64 = 1e-10;

/// Distinct nonzero moduli of the grid, ascending.
pub fn distinct_moduli(cfg: &RunConfig) -> Result<Vec<f64>> {
    let bank = cfg.bank()?;
    let mut r: Vec<f64> = bank.grid().moduli().iter().copied().filter(|&k| k > 0.0).collect();
    r.sort_by(f64::total_cmp);
    r.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    Ok(r)
}

fn closed_form_cases() -> Vec<(f64, Complex64, Complex64)> {
    vec![
        (0.1, Complex64::new(-0.01, 0.0099f64.sqrt()), Complex64::new(-0.01, -0.0099f64.sqrt())),
        (1.0, Complex64::new(-1.0, 0.0), Complex64::new(-1.0, 0.0)),
        (2.0, Complex64::new(-4.0 + 12f64.sqrt(), 0.0), Complex64::new(-4.0 - 12f64.sqrt(), 0.0)),
    ]
}

/// Writes `dispersion.csv` over the grid's moduli and reports the agreement
/// between the closed-form roots and a dense eigensolve.
pub fn cmd_linear(cfg: &RunConfig) -> Result<Status> {
    ensure_dir(&cfg.output)?;
    let params = cfg.params;
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    let mut worst_kernel: f64 = 0.0;
    for r in distinct_moduli(cfg)? {
        let e = lin_eigenvalues(r, &params)?;
        let agree = eigen_agreement(&e, &params);
        worst = worst.max(agree);
        worst_kernel = worst_kernel.max(kernel_defect(&e, &params));
        let mut row = vec![e.r, e.plus.re, e.plus.im, e.minus.re, e.minus.im];
        row.extend(e.kernel);
        row.push(agree);
        rows.push(row.into_iter().map(|v| format!("{v:e}")).collect());
    }
    write_table(
        &cfg.output.join("dispersion.csv"),
        "dispersion",
        &["r", "re_plus", "im_plus", "re_minus", "im_minus", "kernel_a", "kernel_b", "kernel_v", "agreement"],
        &rows,
    )?;

    let unit = FluidParams { gamma: 1.0, ..params };
    let mut closed: f64 = 0.0;
    for (r, plus, minus) in closed_form_cases() {
        let e = lin_eigenvalues(r, &unit)?;
        let d = (e.plus - plus).norm().max((e.minus - minus).norm());
        println!("gamma = 1, nu = {}, r = {r}: lambda = {}, {} (closed form off by {d:.1e})", unit.nu_q(), e.plus, e.minus);
        if unit.nu_q() == 2.0 {
            closed = closed.max(d);
        }
    }
    println!(
        "{} moduli: dense agreement {worst:.2e}, kernel defect {worst_kernel:.2e}, closed-form cases {closed:.2e}",
        rows.len()
    );
    let ok = worst < EIGEN_TOL && worst_kernel < EIGEN_TOL && closed < EIGEN_TOL;
    Ok(if ok { Status::Ok } else { Status::Invalid })
}

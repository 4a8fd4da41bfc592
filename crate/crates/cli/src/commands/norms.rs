use std::path::Path;

use thetaflow::evolve::checkpoint_load;
use thetaflow::ledger::{initial_energy, split_block_norms};
use thetaflow::lp::{besov_norm, weighted_lr, FilterBank};

use crate::error::Result;
use crate::Status;

/// Prints homogeneous Besov norms (`r = 1`) of a checkpoint: `a` and `b` at
/// regularity `s`, `u` at `s - 1`, the low/high splits at `j0` and the
/// energy-functional size.
pub fn cmd_norms(path: &Path, s: Option<f64>, j0: i32) -> Result<Status> {
    let (state, t) = checkpoint_load(path)?;
    let grid = state.grid().clone();
    let bank = FilterBank::new(&grid, j0)?;
    let s = s.unwrap_or(grid.dim() as f64 / 2.0);
    let split = |z| {
        let (low, high) = split_block_norms(&bank, z);
        (weighted_lr(&low, bank.j_min(), s - 1.0, 1.0), weighted_lr(&high, bank.j_min(), s, 1.0))
    };
    let (a_low, a_high) = split(&state.a);
    let (b_low, b_high) = split(&state.b);
    let rows = [
        ("t", t),
        ("a", besov_norm(&bank, &state.a, s, 1.0)),
        ("u", besov_norm(&bank, &state.u, s - 1.0, 1.0)),
        ("b", besov_norm(&bank, &state.b, s, 1.0)),
        ("a_low", a_low),
        ("a_high", a_high),
        ("b_low", b_low),
        ("b_high", b_high),
        ("energy", initial_energy(&bank, &state)),
    ];
    println!("# thetaflow norms v1");
    println!("# {}^{} L={} s={s} j0={j0}", grid.n(), grid.dim(), grid.period_scale());
    println!("quantity,value");
    for (name, v) in rows {
        println!("{name},{v:e}");
    }
    Ok(Status::Ok)
}

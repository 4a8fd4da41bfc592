//! Norms entering the a priori estimate, product-law ratio tests and the
//! continuity inequality `E <= E0 + C E^2 (1 + C E)`.

use super::energy::{split_block_norms, EnergyRecord};
use crate::error::Result;
use crate::lp::{besov_l1, weighted_lr, FilterBank};
use crate::model::{nonlinear_force, FluidParams, PerturbationState};
use crate::spectral::ops::{advection, divergence, product};

/// Named norms and ratio tests at one time.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TermTable {
    pub entries: Vec<(&'static str, f64)>,
}

impl TermTable {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.0 == name).map(|e| e.1)
    }

    fn push(&mut self, name: &'static str, v: f64) {
        self.entries.push((name, v));
    }
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        lhs / rhs
    } else if lhs == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

pub fn estimate_terms(state: &PerturbationState, bank: &FilterBank, params: &FluidParams) -> Result<TermTable> {
    let s = bank.grid().dim() as f64 / 2.0;
    let jm = bank.j_min();
    let (al, ah) = split_block_norms(bank, &state.a);
    let (bl, bh) = split_block_norms(bank, &state.b);
    let w = |v: &[f64], s: f64| weighted_lr(v, jm, s, 1.0);
    let u_lo = besov_l1(bank, &state.u, s - 1.0);
    let u_hi = besov_l1(bank, &state.u, s + 1.0);
    let a_crit = besov_l1(bank, &state.a, s);
    let b_crit = besov_l1(bank, &state.b, s);

    let div = divergence(&state.u)?;
    let adv = besov_l1(bank, &advection(&state.u, &state.u)?, s - 1.0);
    let force = besov_l1(bank, &nonlinear_force(&state.a, &state.u, &state.b, params)?, s - 1.0);
    let bdiv = besov_l1(bank, &product(&state.b, &div)?, s - 1.0);
    let adv_bound = u_lo * u_hi;
    let force_bound = a_crit * (b_crit + u_hi);
    let bdiv_bound = b_crit * u_hi;

    let mut t = TermTable::default();
    t.push("ab_low_crit_m1", w(&al, s - 1.0) + w(&bl, s - 1.0));
    t.push("a_high_crit", w(&ah, s));
    t.push("b_high_crit", w(&bh, s));
    t.push("u_crit_p1", u_hi);
    t.push("b_low_crit_p1", w(&bl, s + 1.0));
    t.push("u_crit_m1", u_lo);
    t.push("adv_u", adv);
    t.push("force", force);
    t.push("b_div_u", bdiv);
    t.push("adv_u_bound", adv_bound);
    t.push("force_bound", force_bound);
    t.push("b_div_u_bound", bdiv_bound);
    t.push("adv_u_ratio", ratio(adv, adv_bound));
    t.push("force_ratio", ratio(force, force_bound));
    t.push("b_div_u_ratio", ratio(bdiv, bdiv_bound));
    // quadratic integrand of the closing estimate: E_inst * (dissipated norms)
    let inst = t.get("ab_low_crit_m1").unwrap() + t.get("a_high_crit").unwrap() + u_lo + t.get("b_high_crit").unwrap();
    let diss = u_hi + t.get("b_low_crit_p1").unwrap() + t.get("b_high_crit").unwrap();
    t.push("rhs_integrand", inst * diss);
    Ok(t)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContinuityFit {
    pub c: f64,
    pub e0: f64,
    pub max_e: f64,
}

/// Smallest `C >= 0` with `E(t) <= E0 + C E^2 (1 + C E)` at every record;
/// infinite for a blown-up run.
pub fn continuity_inequality_check(records: &[EnergyRecord], blew_up: bool) -> ContinuityFit {
    let e0 = records.first().map_or(0.0, |r| r.instantaneous());
    let max_e = records.iter().map(|r| r.e).fold(0.0, f64::max);
    if blew_up {
        return ContinuityFit { c: f64::INFINITY, e0, max_e };
    }
    let c = records
        .iter()
        .map(|r| {
            let e = r.e;
            if e <= e0 || e == 0.0 {
                0.0
            } else {
                // positive root of C^2 E^3 + C E^2 - (E - E0) = 0
                let e2 = e * e;
                let e3 = e2 * e;
                2.0 * (e - e0) / (e2 + (e2 * e2 + 4.0 * e3 * (e - e0)).sqrt())
            }
        })
        .fold(0.0, f64::max);
    ContinuityFit { c, e0, max_e }
}

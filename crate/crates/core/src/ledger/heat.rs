use super::energy::Sample;
use crate::error::{Error, Result};
use crate::lp::{besov_l1, ClAccumulator, FilterBank};
use crate::model::{nonlinear_part, FluidParams};
use crate::spectral::ops::helmholtz;

/// Both sides of the heat estimate for `Pu`, constants set to one:
/// `‖Pu‖_{L~inf(B^{n/2-1})} + ‖Pu‖_{L~1(B^{n/2+1})}` against
/// `‖Pu_0‖_{B^{n/2-1}} + ‖P f‖_{L^1(B^{n/2-1})}`, `f` the nonlinear velocity tendency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeatReport {
    pub lhs: f64,
    pub initial: f64,
    pub forcing: f64,
    /// `None` when both sides vanish.
    pub ratio: Option<f64>,
}

pub fn heat_estimate_check_pu(samples: &[Sample], bank: &FilterBank, params: &FluidParams) -> Result<HeatReport> {
    let first = samples
        .first()
        .ok_or_else(|| Error::Insufficient("no samples".into()))?;
    let s = bank.grid().dim() as f64 / 2.0;
    let mut acc = ClAccumulator::new();
    let mut forcing = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    for smp in samples {
        let (pu, _) = helmholtz(&smp.state.u)?;
        acc.push(smp.t, &bank.block_norms(&pu));
        let (pf, _) = helmholtz(&nonlinear_part(&smp.state, params)?.u)?;
        let fnorm = besov_l1(bank, &pf, s - 1.0);
        if let Some((t0, f0)) = prev {
            forcing += 0.5 * (smp.t - t0) * (f0 + fnorm);
        }
        prev = Some((smp.t, fnorm));
    }
    let lhs = acc.linf(bank.j_min(), s - 1.0) + acc.l1(bank.j_min(), s + 1.0);
    let initial = besov_l1(bank, &helmholtz(&first.state.u)?.0, s - 1.0);
    let rhs = initial + forcing;
    let ratio = if rhs > 0.0 {
        Some(lhs / rhs)
    } else if lhs == 0.0 {
        None
    } else {
        Some(f64::INFINITY)
    };
    Ok(HeatReport { lhs, initial, forcing, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PerturbationState;
    use crate::spectral::Grid;

    #[test]
    fn zero_state_is_skipped() {
        let g = Grid::new(2, 16, 4.0).unwrap();
        let bank = FilterBank::new(&g, 0).unwrap();
        let samples = vec![
            Sample { t: 0.0, state: PerturbationState::zeros(&g) },
            Sample { t: 1.0, state: PerturbationState::zeros(&g) },
        ];
        let r = heat_estimate_check_pu(&samples, &bank, &FluidParams::default()).unwrap();
        assert_eq!(r.ratio, None);
    }
}

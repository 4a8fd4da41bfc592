use crate::lp::{chi, ClAccumulator, FilterBank};
use crate::model::PerturbationState;
use crate::spectral::SpectralField;

/// A sampled state of a trajectory.
#[derive(Clone, Debug)]
pub struct Sample {
    pub t: f64,
    pub state: PerturbationState,
}

/// Components of the energy functional at one time.
///
/// `inst_*` are instantaneous norms, `cl_*` the running Chemin-Lerner
/// `L~^inf` norms of the same tuples, `l1_*` the running time integrals.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EnergyRecord {
    pub t: f64,
    /// `‖(a_l, b_l, u)‖_{B^{n/2-1}}`.
    pub inst_low: f64,
    /// `‖(a_h, b_h)‖_{B^{n/2}}`.
    pub inst_high: f64,
    pub cl_low: f64,
    pub cl_high: f64,
    /// `‖(b_l, u)‖_{L^1_t(B^{n/2+1})}`.
    pub l1_low: f64,
    /// `‖b_h‖_{L^1_t(B^{n/2})}`.
    pub l1_high: f64,
    pub e: f64,
}

impl EnergyRecord {
    pub fn instantaneous(&self) -> f64 {
        self.inst_low + self.inst_high
    }
}

const A_LOW: usize = 0;
const B_LOW: usize = 1;
const U: usize = 2;
const A_HIGH: usize = 3;
const B_HIGH: usize = 4;

/// Incremental evaluation of the energy functional along a trajectory.
/// Time integrals use the trapezoidal rule on the sample times.
#[derive(Clone, Debug)]
pub struct EnergyLedger {
    bank: FilterBank,
    acc: [ClAccumulator; 5],
    records: Vec<EnergyRecord>,
}

/// Per-block norms of the low and high parts `(S_{j0+1} z, z - S_{j0+1} z)`.
pub fn split_block_norms(bank: &FilterBank, z: &SpectralField) -> (Vec<f64>, Vec<f64>) {
    let grid = bank.grid().clone();
    let scale = 2f64.powi(-(bank.j0() + 1));
    let low = bank.block_norms_weighted(z, |m| chi(scale * grid.kmod(m)));
    let high = bank.block_norms_weighted(z, |m| 1.0 - chi(scale * grid.kmod(m)));
    (low, high)
}

impl EnergyLedger {
    pub fn new(bank: &FilterBank) -> Self {
        EnergyLedger {
            bank: bank.clone(),
            acc: Default::default(),
            records: Vec::new(),
        }
    }

    pub fn bank(&self) -> &FilterBank {
        &self.bank
    }

    pub fn push(&mut self, t: f64, state: &PerturbationState) -> EnergyRecord {
        let bank = &self.bank;
        let (al, ah) = split_block_norms(bank, &state.a);
        let (bl, bh) = split_block_norms(bank, &state.b);
        let un = bank.block_norms(&state.u);
        let blocks = [al, bl, un, ah, bh];
        for (acc, norms) in self.acc.iter_mut().zip(&blocks) {
            acc.push(t, norms);
        }
        let jm = bank.j_min();
        let s = bank.grid().dim() as f64 / 2.0;
        let inst = |i: usize, s: f64| crate::lp::weighted_lr(&blocks[i], jm, s, 1.0);
        let acc = &self.acc;
        let rec = EnergyRecord {
            t,
            inst_low: inst(A_LOW, s - 1.0) + inst(B_LOW, s - 1.0) + inst(U, s - 1.0),
            inst_high: inst(A_HIGH, s) + inst(B_HIGH, s),
            cl_low: acc[A_LOW].linf(jm, s - 1.0) + acc[B_LOW].linf(jm, s - 1.0) + acc[U].linf(jm, s - 1.0),
            cl_high: acc[A_HIGH].linf(jm, s) + acc[B_HIGH].linf(jm, s),
            l1_low: acc[B_LOW].l1(jm, s + 1.0) + acc[U].l1(jm, s + 1.0),
            l1_high: acc[B_HIGH].l1(jm, s),
            e: 0.0,
        };
        let rec = EnergyRecord {
            e: rec.cl_low + rec.cl_high + rec.l1_low + rec.l1_high,
            ..rec
        };
        self.records.push(rec);
        rec
    }

    pub fn records(&self) -> &[EnergyRecord] {
        &self.records
    }

    /// Initial energy: the instantaneous sum at the first sample.
    pub fn e0(&self) -> f64 {
        self.records.first().map_or(0.0, |r| r.instantaneous())
    }

    pub fn max_e(&self) -> f64 {
        self.records.iter().map(|r| r.e).fold(0.0, f64::max)
    }
}

/// Energy records along a sampled trajectory.
pub fn energy_functional(samples: &[Sample], bank: &FilterBank) -> Vec<EnergyRecord> {
    let mut ledger = EnergyLedger::new(bank);
    for s in samples {
        ledger.push(s.t, &s.state);
    }
    ledger.records
}

/// `E_0` of a single state.
pub fn initial_energy(bank: &FilterBank, state: &PerturbationState) -> f64 {
    EnergyLedger::new(bank).push(0.0, state).instantaneous()
}

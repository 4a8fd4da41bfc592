//! Energy ledger: the frequency-localized functionals of the small-data
//! theory evaluated along trajectories, with checks of the qualitative
//! claims (damping, non-dissipativity, hypocoercive decay, continuity).

mod damping;
mod eigen;
mod energy;
mod heat;
mod lyapunov;
pub mod output;
mod terms;

pub use damping::{
    annulus_center, damping_from_block_norms, fit_decay_rate, high_freq_damping_check, kernel_projection,
    non_dissipativity_check, pointwise_amplitude, DampingReport, KernelReport, RateFit,
    DAMPING_TOL, KERNEL_SIGNIFICANCE, LINEAR_AMPLITUDE,
};
pub use eigen::{dense_eigenvalues, eigen_agreement, kernel_defect, lin_eigenvalues, LinEigen};
pub use energy::{energy_functional, initial_energy, split_block_norms, EnergyLedger, EnergyRecord, Sample};
pub use heat::{heat_estimate_check_pu, HeatReport};
pub use lyapunov::{
    block_decay_check, block_decay_from_rows, coercivity_range, fit_block_decay, low_block_rows,
    lyapunov_block, BlockDecayFit, BlockDecayReport, LowBlockRow, LyapunovBlock, DECAY_C_MIN,
    SOURCE_C_MAX,
};
pub use terms::{continuity_inequality_check, estimate_terms, ContinuityFit, TermTable};

//! Littlewood-Paley decomposition, homogeneous Besov and Chemin-Lerner norms.

mod bank;
mod blocks;
mod chemin_lerner;
pub mod probes;

pub use bank::{chi, psi, FilterBank, ANNULUS_INNER, ANNULUS_OUTER, CHI_INNER, CHI_OUTER};
pub use blocks::{
    bernstein_ratio, besov_l1, besov_norm, dyadic_block, low_cutoff, split_low_high, weighted_lr,
    BlockRange,
};
pub use chemin_lerner::{chemin_lerner_accumulate, BlockHistory, ClAccumulator};
pub use probes::{lemma_probes, ProbeReport};

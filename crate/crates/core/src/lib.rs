//! Pseudo-spectral simulator for compressible Navier-Stokes flow with
//! potential temperature transport, together with a Littlewood-Paley
//! energy ledger that tracks the frequency-localized functionals of the
//! small-data global existence theory.

pub mod error;
pub mod evolve;
pub mod initial;
pub mod ledger;
pub mod lp;
pub mod model;
pub mod spectral;

pub use error::{Error, Result};

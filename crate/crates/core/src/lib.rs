//! High-precision tools for Ramanujan-type series, their companion series,
//! Epstein zeta lattice sums and the identities that connect them.

pub mod audit;
pub mod error;
pub mod mpnum;
pub mod lattice;
pub mod modular;
pub mod numtheory;
pub mod series;
pub mod hyper;
pub mod relations;
pub mod registry;
pub mod harness;

pub use error::{Error, Result};
pub use mpnum::{Complex, PrecisionContext, Real};

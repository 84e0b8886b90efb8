//! Tropical Lagrangian multi-sections over complete rank-2 fans.
//!
//! The crate decides genericity and realizability of tropical data,
//! builds the glued Lagrangian potential numerically, certifies that the
//! resulting Lagrangian is embedded, and computes the invariants of the
//! rank-2 Kaneyama bundles on P² that the tropical data mirror.

pub mod bundle;
pub mod error;
pub mod fan;
pub mod io;
pub mod multisection;
pub mod realization;

pub use error::{Error, Result};
pub use fan::{build_fan, conical_lagrangian, divisor_character, Cone, ConicalLagrangian, Fan, LatticeVector, ToricDivisor};
pub use multisection::{
    CoveringKind, GenericityReport, TropicalMultiSection, ValidationReport,
};

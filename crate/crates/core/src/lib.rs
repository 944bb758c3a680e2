//! Photon catalysis of coherent states: Laguerre-polynomial-excited coherent
//! states, their nonclassicality measures, Wigner functions and decoherence.
//!
//! The analytic paths live in [`catalysis`], [`metrics`] and [`wigner`]; the
//! truncated Fock-space model in [`fock_oracle`] is an independent reference
//! used for cross-checks.

pub mod catalysis;
pub mod error;
pub mod fock_oracle;
pub mod metrics;
pub mod polynomials;
pub mod sweep;
pub mod wigner;

pub use catalysis::{CatalysisParams, MomentCache, MomentTable};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use polynomials::PolyOrder;
pub use wigner::{GridSpec, ThermalChannel, WignerFunction, WignerGrid};

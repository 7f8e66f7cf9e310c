//! Numerical laboratory for the holomorphic ξ-flow q' = ξ(q), its
//! complex-time Newton flow, and the Hamiltonian system H(q, p) = ξ(q) p.
//!
//! Closed-form identities (flow-map differential, zero-product identities,
//! closed-orbit periods, quantised spectra) live in [`formulas`] and are
//! checked against independent adaptive integration in [`dynamics`].

pub mod dynamics;
pub mod error;
pub mod formulas;
pub mod primes;
pub mod specfun;
pub mod verify;
pub mod zeros;

pub use error::{Error, ErrorKind, Result};
pub use specfun::{Complex, Regime, TruncationConfig};
pub use zeros::{ZeroCatalogue, ZeroRecord};

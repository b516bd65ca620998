//! Sequential device-independent randomness certification toolkit.
//!
//! Models a one-sided sequential Bell scenario: Alice measures one of two
//! rotated observables while Bob either measures projectively (short
//! branch) or applies a weak measurement of tunable strength and hands
//! the post-measurement state to a second measurement (long branch).
//! The crate computes the exact correlations in two independent
//! pictures, assembles the self-testing Bell operator and its
//! saturation identities, evaluates the security ledger two ways, and
//! reports the certified output entropies, all by direct contraction at
//! desk scale (8x8 operators), never by sampling.

pub mod bell;
pub mod checks;
pub mod correlations;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod protocol;
pub mod security;
pub mod tol;

pub use error::{Error, Result};

//! Grassmann quantum channels.
//!
//! The channels are induced by the fermionic two-mode squeezing isometry
//! acting on a multi-rail encoded qudit. The crate builds them from ladder
//! operators, evaluates their closed-form classical and quantum capacities,
//! and checks the structural properties (degradability, covariance, block
//! structure, complementary channels) against brute-force numerics.
//!
//! Module map:
//!
//! * [`fock`]: occupation bases, signed ladder operators, the squeezing
//!   isometry and exterior-power representation matrices.
//! * [`channels`]: Kraus representations of Grassmann channels, their blocks
//!   and complements, and the reference families (erasure, Werner-Holevo,
//!   transpose-depolarizing).
//! * [`capacity`]: closed-form capacity formulas and the Unruh series.
//! * [`verify`]: entropies, optimizers and the verification checks.
//! * [`cli`]: the command-line front end used by the `grassmann` binary.

pub mod capacity;
pub mod channels;
pub mod cli;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};

//! Schmidt-number analysis of quantum channels.
//!
//! The crate is layered bottom-up:
//!
//! - [`linalg`]: a small dense complex matrix type with a cyclic Jacobi
//!   Hermitian eigensolver, one-sided Jacobi singular values, Kronecker
//!   products, partial traces and partial transposes.
//! - [`states`]: pure states, density matrices, Schmidt coefficients and
//!   seeded generators for states of bounded Schmidt number.
//! - [`channels`]: Kraus-form channels, Choi matrices, canonical Kraus
//!   recovery, composition, tensor products, adjoints and the depolarizing
//!   and dephasing families.
//! - [`schmidt`]: the Schmidt-number witness `I - (d/r) P`, the
//!   `Λ_k(X) = Tr(X) I - kX` family of r-positive maps and one-sided
//!   certification.
//! - [`analysis`]: witness sweeps, threshold bisection, the 2-local
//!   annihilation study, the EB/SNBC relation report and the closure
//!   experiments.
//! - [`verify`]: seeded property suites used by `schmidt-lens verify` and the
//!   acceptance tests.
//! - [`report`] and [`cli`]: CSV/JSON output and the command-line front end.
//!
//! Composite indices always follow `i_A * d_B + i_B`: subsystem A is the most
//! significant block.
//!
//! ```
//! use schmidt_lens::{analysis, channels::ChannelFamily};
//!
//! let p = analysis::witness_threshold(&ChannelFamily::Depolarizing, 3, 2, 1e-10).unwrap();
//! assert!((p - 0.625).abs() < 1e-8);
//! ```

pub mod analysis;
pub mod channels;
pub mod cli;
mod error;
pub mod linalg;
pub mod report;
pub mod schmidt;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, EigenDecomposition, Subsystem, C64};

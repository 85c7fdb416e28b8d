// SPDX-License-Identifier: Apache-2.0

//! Heat exchange between a quantum system and a thermal environment when the
//! interaction is assisted by a memory that must return to its initial state.
//!
//! The crate is split the same way the computation is:
//!
//! * [`linalg`], [`state`], [`thermo`], [`random`]: dense complex-matrix
//!   primitives, density matrices and Hamiltonians, entropic functionals.
//! * [`heat`]: optimal heat bounds `Q_c`/`Q_h` of a single state, their
//!   brute-force oracle, and the ladder-Hamiltonian specialisation.
//! * [`witness`]: set-level envelopes turning free-energy bounds into
//!   heat intervals for separable and incoherent states.
//! * [`tavis_cummings`]: two spins and a truncated cavity mode used as a
//!   coherence-detection demonstration.
//!
//! Conventions: natural logarithms, `k_B = ħ = 1`, row-major matrices with
//! the leftmost subsystem index varying slowest.

pub mod error;
pub mod heat;
pub mod linalg;
pub mod random;
pub mod state;
pub mod tavis_cummings;
pub mod thermo;
pub mod witness;

pub use error::{Error, Result};
pub use heat::{find_beta_roots, heat_bounds, BetaRoots, HeatBounds, ScalarProblem};
pub use linalg::{hermitian_spectrum, tensor_product, ComplexMatrix, Spectrum};
pub use state::{partial_trace, DensityMatrix, Hamiltonian};
pub use tavis_cummings::{TcModel, TcTrajectory};
pub use witness::{Verdict, WitnessEnvelope};

/// Crate version, used in output provenance lines.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

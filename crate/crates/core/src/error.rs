// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a type invariant (Hermiticity, trace, positivity, shape).
    #[error("validation error: {0}")]
    Validation(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The free energy passed to the heat problem lies below the Gibbs minimum.
    #[error("infeasible heat problem: free energy {y} is below the Gibbs free energy {gibbs}")]
    Infeasible { y: f64, gibbs: f64 },

    #[error("numerical consistency error: {0}")]
    Numerical(String),

    #[error("fixed point not found: residual {residual:e} after {iterations} iterations")]
    FixedPoint { residual: f64, iterations: usize },

    #[error("Fock truncation too small: top-level population {leakage:e} exceeds {limit:e}; increase n_max")]
    Truncation { leakage: f64, limit: f64 },
}

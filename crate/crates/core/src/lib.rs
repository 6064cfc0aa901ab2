//! Damped Jaynes–Cummings dynamics on a truncated Fock space.
//!
//! The vectorized master equation `∂ρ̂/∂t = (−iX + Y)ρ̂` is propagated by the
//! factored approximation `ρ̂(t) ≈ e^{−i(t²/2)[X,Y]} e^{tY} e^{−itX} ρ̂(0)`,
//! each factor in closed form. [`oracle`] provides the brute-force references
//! used to validate it.

pub mod error;
pub mod fock;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod propagators;
pub mod state;

pub use error::{Error, Result};
pub use fock::{TruncationConfig, VectorizedState};
pub use linalg::DenseComplexMatrix;
pub use model::ModelParams;
pub use observables::{diagnostics, DiagnosticsRow};
pub use oracle::{ErrorFit, FitRegime, IntegrationPlan, Reference};
pub use propagators::{PropagatorFactor, ZassenhausOrder, ZassenhausPropagator};
pub use state::BlockDensityMatrix;

pub use num_complex::Complex64 as C64;

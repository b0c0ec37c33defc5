//! Quantum amplitude estimation without phase estimation.
//!
//! An exact statevector simulator runs the Grover-power circuits `Q^k A|0>`
//! of a Riemann-sum integration oracle; [`mlqae`] and [`iqae`] turn sampled
//! ancilla measurements into amplitude estimates, and [`harness`] repeats
//! them over shot-count sweeps.

pub mod error;
pub mod estimate;
pub mod harness;
pub mod integrator;
pub mod iqae;
pub mod mlqae;
pub mod oracle;
pub mod sampler;
pub mod statevector;

pub use error::{QaeError, Result};
pub use estimate::{Algorithm, EstimateResult};
pub use harness::{run_sweep, summarize, ExperimentConfig, SummaryRow, SweepRow};
pub use integrator::{IntegralSpec, Integrand, Reference};
pub use iqae::{HalfPlane, IqaeConfig, IqaeResult, NextPower};
pub use mlqae::{MlqaeConfig, MlqaeResult};
pub use oracle::{GroverOperator, OracleSpec};
pub use sampler::{GroverSimulator, NoiseSpec, ShotRecord};
pub use statevector::{Circuit, Gate, StateVector};

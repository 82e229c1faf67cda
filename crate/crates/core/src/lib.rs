//! Entanglement measures built from connected correlation tensors of
//! multi-qudit states.
//!
//! For any subset `S` of sites, the measure `B(S)` is the squared norm of
//! the connected correlation tensor of mean-shifted local generators
//! (Pauli matrices for qubits, generalized Gell-Mann matrices for qudits),
//! divided by a constant `𝒩(|S|)` calibrated so the GHZ state on `|S|`
//! sites scores 1. Mixed states can be evaluated directly or through a
//! numerically minimized convex roof.

pub mod baselines;
pub mod basis;
pub mod error;
pub mod linalg;
pub mod measure;
pub mod properties;
pub mod random;
pub mod register;
pub mod roof;
pub mod state;
pub mod tables;

pub use basis::{
    expectation, generator_basis, local_mean, GeneratorBasis, QuantumState, SiteOperator,
};
pub use error::{Error, Result};
pub use measure::{
    calibrate_normalization, connected_tensor, correlation_tensor, enumerate_partitions_min2,
    measure_b, raw_sum, CorrelationTensor, MeasureResult, Partition,
};
pub use register::QuditRegister;
pub use state::{parse_ket_expression, DensityMatrix, PureState, State};

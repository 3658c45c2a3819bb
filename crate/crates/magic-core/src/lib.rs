//! Exact, desk-scale toolkit for magic-state resource theory.
//!
//! Everything is built on dense operators over a generic real scalar
//! (see [`Scalar`]); the concrete aliases below fix `f64` for the CLI
//! and the test suites. Supported sizes are deliberately small: dense
//! operators up to 8 qubits, full stabilizer enumeration up to 4,
//! streamed enumeration up to 6.
//!
//! The main pieces:
//! - [`pauli`]: binary-symplectic Pauli strings with exact phase tracking.
//! - [`operator`]: dense Hermitian operators, density matrices, Schatten
//!   norms and eigenvalues.
//! - [`stabilizer`]: stabilizer-state enumeration (affine-subspace /
//!   quadratic-form parametrization), graph states and the auxiliary
//!   state families used by the reduction.
//! - [`clifford`]: Clifford groups for 1 and 2 qubits by generator closure.
//! - [`lp`]: a dense two-phase simplex solver returning primal-dual
//!   certificates.
//! - [`monotones`]: stabilizer Rényi entropy, stabilizer fidelity,
//!   robustness of magic and its net-extended variant.
//! - [`membership`]: Euclidean projection onto state polytopes, weak
//!   membership verdicts, witness extraction and witness-detection scans.
//! - [`reduction`]: the 3-SAT to witness-detection compiler and its
//!   stage-by-stage verifier.
//! - [`doped`]: dictionaries for states built from a bounded number of
//!   non-Clifford qubits, with packing nets and closure checks.
//! - [`channel`]: Kraus channels, Choi states, and stabilizer-preserving
//!   classification.

pub mod channel;
pub mod clifford;
pub mod doped;
pub mod error;
pub mod json;
pub mod lp;
pub mod membership;
pub mod monotones;
pub mod operator;
pub mod pauli;
pub mod reduction;
pub mod sampling;
pub mod scalar;
pub mod stabilizer;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default scalar used by the CLI and the serialization layer.
pub type Real = f64;
/// Complex number over the default scalar.
pub type Cpx = num_complex::Complex<f64>;
/// Dense Hermitian operator over the default scalar.
pub type HermitianOp = operator::HermitianOperator<f64>;
/// Density matrix over the default scalar.
pub type State = operator::DensityMatrix<f64>;
/// Stabilizer state over the default scalar.
pub type Stab = stabilizer::StabilizerState<f64>;

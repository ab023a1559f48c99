//! Single-particle quantum MACs.
//!
//! Encoded states live on the vacuum ⊕ one-particle space of dimension
//! `N + 1`; index 0 is the vacuum and index `i + 1` is the particle on
//! path `i`. Paths and parties are 0-based.

mod channel;
mod encoding;
mod random;
mod state;
mod strategies;
mod violation;

pub use channel::{JointNpChannel, NpBranch, NpChannel};
pub use encoding::{
    apply_joint_encoding, apply_joint_to_density, apply_product_encoding, generate_mac, phase_encode, Encoding,
    GroupEncoding, Povm,
};
pub use random::{
    random_joint_channel, random_joint_encoding, random_mixed_state, random_np_channel, random_pure_amplitudes,
    random_pure_state, random_two_outcome_povm,
};
pub use state::{OneParticleState, StateJson};
pub use strategies::{
    and_table_separation_evidence, i2_max_for_state, max_odd_interference, pair_parity_mac, q_nk_affine_rank,
    q_nk_points, verify_odd_interference_vanishes, I2Strategy, ParityStrategy, SeparationEvidence,
};
pub(crate) use violation::golden_max;
pub use violation::{
    build_m, build_m3, fingerprint_operator, helstrom_lhs, max_violation, optimal_phases, reduced_family,
    scan_violation, violation_delta, ViolationReport,
};

use crate::linalg::LinalgError;
use crate::mac::MacError;
use thiserror::Error;

pub const STATE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const CHANNEL_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("invalid dimension {0}")]
    InvalidDim(usize),
    #[error("state is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("state is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("trace is {0}, expected 1")]
    BadTrace(f64),
    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("expected {expected} channels, found {found}")]
    ChannelCountMismatch { expected: usize, found: usize },
    #[error("groups do not partition the parties: {0}")]
    InvalidPartition(String),
    #[error("invalid N-P channel: {0}")]
    InvalidChannel(String),
    #[error("invalid joint channel: {0}")]
    InvalidKraus(String),
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),
    #[error("index {index} out of range for {dim} paths")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error(transparent)]
    Mac(#[from] MacError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

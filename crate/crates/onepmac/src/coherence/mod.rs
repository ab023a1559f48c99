//! Multi-level coherence: coherence rank, the comparison-matrix test and
//! fingerprinting witnesses.

mod scan;

pub use scan::{phase_scan_witness, scan_inequalities, PhaseScan, ScanInequality};

use crate::linalg::{CMatrix, LinalgError};
use crate::quantum::{fingerprint_operator, optimal_phases, OneParticleState, QuantumError, ViolationReport};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default amplitude cutoff for the coherence rank.
pub const CRK_TOL: f64 = 1e-9;
/// Below this a witness value counts as no violation.
pub const WITNESS_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoherenceError {
    #[error("vector norm² is {0}, expected 1")]
    NotNormalized(f64),
    #[error("dimension {0} is not supported here")]
    UnsupportedDim(usize),
    #[error("witness needs K+1 = {needed} paths, state has {dim}")]
    TooFewPaths { needed: usize, dim: usize },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Number of amplitudes with `|c_i| > tol`.
pub fn coherence_rank(amplitudes: &[Complex64], tol: f64) -> Result<usize, CoherenceError> {
    let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(CoherenceError::NotNormalized(norm));
    }
    Ok(amplitudes.iter().filter(|c| c.norm() > tol).count())
}

/// `|ρ_ii|` on the diagonal, `−|ρ_ij|` off it.
pub fn comparison_matrix(rho: &CMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(rho.nrows(), rho.ncols(), |i, j| if i == j { rho[(i, j)].norm() } else { -rho[(i, j)].norm() })
}

pub fn comparison_trace_norm(rho: &CMatrix) -> f64 {
    SymmetricEigen::new(comparison_matrix(rho)).eigenvalues.iter().map(|v| v.abs()).sum()
}

/// Trace norm of the comparison matrix of a three-level state and whether
/// it exceeds 1, which signals three-level coherence.
pub fn comparison_matrix_test(state: &OneParticleState) -> Result<(f64, bool), CoherenceError> {
    if state.dim() != 3 {
        return Err(CoherenceError::UnsupportedDim(state.dim()));
    }
    let t = comparison_trace_norm(state.matrix());
    Ok((t, t > 1.0 + NORM_TOL))
}

/// `K+1` path indices: the support of `amplitudes` in order, padded with
/// the remaining paths.
fn witness_paths(amplitudes: &[Complex64], k: usize, tol: f64) -> Vec<usize> {
    let (support, rest): (Vec<usize>, Vec<usize>) = (0..amplitudes.len()).partition(|&i| amplitudes[i].norm() > tol);
    support.into_iter().chain(rest).take(k + 1).collect()
}

/// Fingerprinting witness for `(K+1)`-level coherence of a pure state,
/// using the optimal phases of the `(K+1)`-party game on the support.
/// States with coherence rank at most `K` report `δ = 0`.
pub fn pure_state_witness(amplitudes: &[Complex64], k: usize) -> Result<ViolationReport, CoherenceError> {
    pure_state_witness_tol(amplitudes, k, CRK_TOL)
}

pub fn pure_state_witness_tol(amplitudes: &[Complex64], k: usize, tol: f64) -> Result<ViolationReport, CoherenceError> {
    let crk = coherence_rank(amplitudes, tol)?;
    if k == 0 || k + 1 > amplitudes.len() {
        return Err(CoherenceError::TooFewPaths { needed: k + 1, dim: amplitudes.len() });
    }
    let state = OneParticleState::pure(amplitudes)?;
    let paths = witness_paths(amplitudes, k, tol);
    let phases = optimal_phases(k + 1);
    let x = fingerprint_operator(state.matrix(), &paths, &phases)?;
    let mut report = ViolationReport::from_operator(&x, &phases)?;
    if crk <= k || report.delta < WITNESS_TOL {
        report.delta = 0.0;
        report.lhs = report.n as f64;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceReport {
    /// Present for pure states.
    pub crk: Option<usize>,
    pub comparison_trace_norm: f64,
    pub fingerprint_delta: f64,
    pub fingerprint_lhs: f64,
    pub bound: f64,
    /// `K+1` when the witness fires, else 0.
    pub witness_level: usize,
}

impl CoherenceReport {
    pub fn for_pure(amplitudes: &[Complex64], k: usize, tol: f64) -> Result<Self, CoherenceError> {
        let report = pure_state_witness_tol(amplitudes, k, tol)?;
        let state = OneParticleState::pure(amplitudes)?;
        Ok(Self {
            crk: Some(coherence_rank(amplitudes, tol)?),
            comparison_trace_norm: comparison_trace_norm(state.matrix()),
            fingerprint_delta: report.delta,
            fingerprint_lhs: report.lhs,
            bound: report.n as f64,
            witness_level: if report.delta > 0.0 { k + 1 } else { 0 },
        })
    }

    /// Mixed states: the witness runs on the `K+1` heaviest paths.
    pub fn for_state(state: &OneParticleState, k: usize) -> Result<Self, CoherenceError> {
        let n = state.dim();
        if k == 0 || k + 1 > n {
            return Err(CoherenceError::TooFewPaths { needed: k + 1, dim: n });
        }
        let phases = optimal_phases(k + 1);
        let x = fingerprint_operator(state.matrix(), &heaviest_paths(state.matrix(), k + 1), &phases)?;
        let report = ViolationReport::from_operator(&x, &phases)?;
        let delta = if report.delta < WITNESS_TOL { 0.0 } else { report.delta };
        Ok(Self {
            crk: None,
            comparison_trace_norm: comparison_trace_norm(state.matrix()),
            fingerprint_delta: delta,
            fingerprint_lhs: report.n as f64 + delta,
            bound: report.n as f64,
            witness_level: if delta > 0.0 { k + 1 } else { 0 },
        })
    }
}

fn heaviest_paths(rho: &CMatrix, count: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..rho.nrows()).collect();
    idx.sort_by(|&a, &b| rho[(b, b)].re.total_cmp(&rho[(a, a)].re).then(a.cmp(&b)));
    idx.truncate(count);
    idx.sort_unstable();
    idx
}

/// Best success probability in the fingerprinting guessing game with `K+1`
/// flipping parties: with probability `1/(K+2)` no phase is applied, and
/// each single flip has the same probability. Incoherent states reach at
/// most `(K+1)/(K+2)`.
///
/// `rho` lives on the vacuum-extended space (index 0 is the vacuum); the
/// `K+1` heaviest paths flip.
pub fn ensemble_game_value(rho: &CMatrix, k: usize) -> Result<f64, CoherenceError> {
    let n = rho.nrows().saturating_sub(1);
    if k == 0 || k + 1 > n {
        return Err(CoherenceError::TooFewPaths { needed: k + 1, dim: n });
    }
    let paths_only = rho.view((1, 1), (n, n)).into_owned();
    let paths: Vec<usize> = heaviest_paths(&paths_only, k + 1).into_iter().map(|p| p + 1).collect();
    let phases = optimal_phases(k + 1);
    let x = fingerprint_operator(rho, &paths, &phases)?;
    let report = ViolationReport::from_operator(&x, &phases)?;
    Ok(report.lhs / (k + 2) as f64)
}

/// Game threshold for incoherent states.
pub fn ensemble_game_threshold(k: usize) -> f64 {
    (k + 1) as f64 / (k + 2) as f64
}

/// Three-level state with coherence detected by the comparison matrix but
/// not by phase-encoded fingerprinting.
pub fn counterexample_state() -> OneParticleState {
    let r = |x: f64| Complex64::new(x, 0.0);
    let i8 = Complex64::new(0.0, 1.0 / 8.0);
    let rho = CMatrix::from_row_slice(
        3,
        3,
        &[r(1.0 / 8.0), r(1.0 / 12.0), r(1.0 / 6.0), r(1.0 / 12.0), r(1.0 / 8.0), i8, r(1.0 / 6.0), -i8, r(3.0 / 4.0)],
    );
    OneParticleState::new(rho).expect("valid density matrix")
}

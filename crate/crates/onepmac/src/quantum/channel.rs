use super::{QuantumError, CHANNEL_TOL, STATE_TOL};
use crate::linalg::CMatrix;
use num_complex::Complex64;

/// One amplitude-damping branch: `A = diag(1, y)`, `B = z |0⟩⟨1|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NpBranch {
    pub weight: f64,
    pub y: Complex64,
    pub z: Complex64,
}

/// Single-mode number-preserving channel, a convex mixture of
/// amplitude-damping channels.
#[derive(Debug, Clone, PartialEq)]
pub struct NpChannel {
    branches: Vec<NpBranch>,
}

impl NpChannel {
    pub fn new(branches: Vec<NpBranch>) -> Result<Self, QuantumError> {
        if branches.is_empty() {
            return Err(QuantumError::InvalidChannel("no branches".into()));
        }
        let mut total = 0.0;
        for b in &branches {
            if b.weight < 0.0 {
                return Err(QuantumError::InvalidChannel(format!("negative weight {}", b.weight)));
            }
            let norm = b.y.norm_sqr() + b.z.norm_sqr();
            if (norm - 1.0).abs() > STATE_TOL {
                return Err(QuantumError::InvalidChannel(format!("|y|²+|z|² = {norm}")));
            }
            total += b.weight;
        }
        if (total - 1.0).abs() > STATE_TOL {
            return Err(QuantumError::InvalidChannel(format!("weights sum to {total}")));
        }
        Ok(Self { branches })
    }

    fn single(y: Complex64, z: Complex64) -> Self {
        Self { branches: vec![NpBranch { weight: 1.0, y, z }] }
    }

    pub fn identity() -> Self {
        Self::single(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// `|1⟩ ↦ e^{iθ}|1⟩`.
    pub fn phase(theta: f64) -> Self {
        Self::single(Complex64::from_polar(1.0, theta), Complex64::new(0.0, 0.0))
    }

    /// Path blocking.
    pub fn block() -> Self {
        Self::single(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    /// Damping with transmission amplitude `y`.
    pub fn damping(y: Complex64) -> Result<Self, QuantumError> {
        let r = y.norm_sqr();
        if r > 1.0 + STATE_TOL {
            return Err(QuantumError::InvalidChannel(format!("|y| = {} > 1", y.norm())));
        }
        Ok(Self::single(y, Complex64::new((1.0 - r).max(0.0).sqrt(), 0.0)))
    }

    pub fn branches(&self) -> &[NpBranch] {
        &self.branches
    }

    /// Probability that the particle survives, `Σ w |y|²`.
    pub fn transmission(&self) -> f64 {
        self.branches.iter().map(|b| b.weight * b.y.norm_sqr()).sum()
    }

    /// Coherence factor `Σ w y` applied to `|1⟩⟨0|`.
    pub fn mean_amplitude(&self) -> Complex64 {
        self.branches.iter().map(|b| b.y * b.weight).sum()
    }

    /// Kraus operators on the local basis `{|0⟩, |1⟩}`.
    pub fn kraus(&self) -> Vec<CMatrix> {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        self.branches
            .iter()
            .flat_map(|b| {
                let s = Complex64::new(b.weight.sqrt(), 0.0);
                [
                    CMatrix::from_row_slice(2, 2, &[s * one, zero, zero, s * b.y]),
                    CMatrix::from_row_slice(2, 2, &[zero, s * b.z, zero, zero]),
                ]
            })
            .collect()
    }

    /// The same channel acting on one party as a group channel.
    pub fn to_joint(&self, party: usize) -> JointNpChannel {
        JointNpChannel { parties: vec![party], kraus: self.kraus() }
    }
}

/// Channel on the local space `span{|vac⟩, |e_s⟩ : s ∈ parties}` of a group
/// of parties; local index `k + 1` is `parties[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointNpChannel {
    parties: Vec<usize>,
    kraus: Vec<CMatrix>,
}

impl JointNpChannel {
    /// Checks completeness, that the vacuum is fixed, and that the channel
    /// commutes with the number-phase rotation `diag(1, e^{iθ}, …)`.
    pub fn new(parties: Vec<usize>, kraus: Vec<CMatrix>) -> Result<Self, QuantumError> {
        let d = parties.len() + 1;
        if parties.is_empty() || kraus.is_empty() {
            return Err(QuantumError::InvalidKraus("empty group or Kraus list".into()));
        }
        let mut sorted = parties.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != parties.len() {
            return Err(QuantumError::InvalidKraus("repeated party".into()));
        }
        if let Some(k) = kraus.iter().find(|k| k.shape() != (d, d)) {
            return Err(QuantumError::InvalidKraus(format!("Kraus shape {:?}, expected {d}x{d}", k.shape())));
        }
        let channel = Self { parties, kraus };
        let sum: CMatrix = channel.kraus.iter().map(|k| k.adjoint() * k).sum();
        let dev = (sum - CMatrix::identity(d, d)).map(|c| c.norm()).max();
        if dev > CHANNEL_TOL {
            return Err(QuantumError::InvalidKraus(format!("ΣK†K deviates from I by {dev:e}")));
        }
        let mut vac = CMatrix::zeros(d, d);
        vac[(0, 0)] = Complex64::new(1.0, 0.0);
        if (channel.apply_local(&vac) - &vac).map(|c| c.norm()).max() > CHANNEL_TOL {
            return Err(QuantumError::InvalidKraus("vacuum is not preserved".into()));
        }
        // θ = 1 is not a rational multiple of π, so every number-changing
        // coherence is detected
        let u = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(d, |i, _| {
            if i == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::from_polar(1.0, 1.0)
            }
        }));
        for r in 0..d {
            for c in 0..d {
                let mut e = CMatrix::zeros(d, d);
                e[(r, c)] = Complex64::new(1.0, 0.0);
                let lhs = channel.apply_local(&(&u * &e * u.adjoint()));
                let rhs = &u * channel.apply_local(&e) * u.adjoint();
                if (lhs - rhs).map(|c| c.norm()).max() > CHANNEL_TOL {
                    return Err(QuantumError::InvalidKraus("channel does not conserve particle number".into()));
                }
            }
        }
        Ok(channel)
    }

    pub fn identity(parties: Vec<usize>) -> Self {
        let d = parties.len() + 1;
        Self { parties, kraus: vec![CMatrix::identity(d, d)] }
    }

    /// Diagonal unitary `|e_s⟩ ↦ e^{iφ_s}|e_s⟩`.
    pub fn phases(parties: Vec<usize>, phases: &[f64]) -> Self {
        assert_eq!(parties.len(), phases.len());
        let d = parties.len() + 1;
        let u = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(d, |i, _| {
            if i == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::from_polar(1.0, phases[i - 1])
            }
        }));
        Self { parties, kraus: vec![u] }
    }

    pub fn parties(&self) -> &[usize] {
        &self.parties
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn apply_local(&self, x: &CMatrix) -> CMatrix {
        self.kraus.iter().map(|k| k * x * k.adjoint()).sum()
    }

    /// Kraus operators on the global `(N+1)`-dimensional space. Paths
    /// outside the group see the operator's vacuum amplitude.
    pub fn lift(&self, n: usize) -> Vec<CMatrix> {
        let local = |global: usize| -> Option<usize> {
            if global == 0 {
                return Some(0);
            }
            self.parties.iter().position(|&p| p + 1 == global).map(|k| k + 1)
        };
        self.kraus
            .iter()
            .map(|k| {
                let vac = k[(0, 0)];
                CMatrix::from_fn(n + 1, n + 1, |r, c| match (local(r), local(c)) {
                    (Some(lr), Some(lc)) => k[(lr, lc)],
                    (None, None) if r == c => vac,
                    _ => Complex64::new(0.0, 0.0),
                })
            })
            .collect()
    }
}

use super::{QuantumError, PSD_TOL, STATE_TOL};
use crate::linalg::{eigh, hermitian_deviation, outer, CMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Density matrix of one particle spread over `N` paths.
#[derive(Debug, Clone, PartialEq)]
pub struct OneParticleState {
    rho: CMatrix,
}

impl OneParticleState {
    pub fn new(rho: CMatrix) -> Result<Self, QuantumError> {
        let n = rho.nrows();
        if n == 0 || rho.ncols() != n {
            return Err(QuantumError::InvalidDim(n));
        }
        let dev = hermitian_deviation(&rho);
        if dev > STATE_TOL {
            return Err(QuantumError::NotHermitian(dev));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(QuantumError::BadTrace(tr.re));
        }
        let min = eigh(&rho)?.min();
        if min < -PSD_TOL {
            return Err(QuantumError::NotPsd(min));
        }
        Ok(Self { rho })
    }

    /// `|ψ⟩⟨ψ|` for a unit vector of path amplitudes.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self, QuantumError> {
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if amplitudes.is_empty() {
            return Err(QuantumError::InvalidDim(0));
        }
        if (norm - 1.0).abs() > 1e-10 {
            return Err(QuantumError::NotNormalized(norm));
        }
        Self::new(outer(amplitudes, amplitudes))
    }

    /// `(1/√N) Σ |e_i⟩`.
    pub fn equal_superposition(n: usize) -> Result<Self, QuantumError> {
        if n == 0 {
            return Err(QuantumError::InvalidDim(0));
        }
        Ok(Self { rho: CMatrix::from_element(n, n, Complex64::new(1.0 / n as f64, 0.0)) })
    }

    /// Incoherent mixture `Σ p_i |e_i⟩⟨e_i|`.
    pub fn diagonal(p: &[f64]) -> Result<Self, QuantumError> {
        let n = p.len();
        Self::new(CMatrix::from_fn(
            n,
            n,
            |i, j| {
                if i == j {
                    Complex64::new(p[i], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            },
        ))
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.rho[(i, j)]
    }

    /// The state on the vacuum ⊕ one-particle space.
    pub fn embed(&self) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n + 1, n + 1);
        out.view_mut((1, 1), (n, n)).copy_from(&self.rho);
        out
    }

    pub fn to_json(&self) -> StateJson {
        let n = self.dim();
        StateJson {
            dim: n,
            re: (0..n).map(|i| (0..n).map(|j| self.rho[(i, j)].re).collect()).collect(),
            im: (0..n).map(|i| (0..n).map(|j| self.rho[(i, j)].im).collect()).collect(),
        }
    }

    pub fn from_json(json: &StateJson) -> Result<Self, QuantumError> {
        let n = json.dim;
        let shape_ok = |m: &Vec<Vec<f64>>| m.len() == n && m.iter().all(|r| r.len() == n);
        if !shape_ok(&json.re) || !shape_ok(&json.im) {
            return Err(QuantumError::InvalidDim(n));
        }
        Self::new(CMatrix::from_fn(n, n, |i, j| Complex64::new(json.re[i][j], json.im[i][j])))
    }
}

/// `{ "dim": N, "re": [[…]], "im": [[…]] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn superposition_entries() {
        let s = OneParticleState::equal_superposition(1).unwrap();
        assert_eq!(s.entry(0, 0), Complex64::new(1.0, 0.0));
        let s = OneParticleState::equal_superposition(2).unwrap();
        assert_eq!(s.entry(0, 1), Complex64::new(0.5, 0.0));
        let s = OneParticleState::equal_superposition(3).unwrap();
        assert!(s.matrix().iter().all(|x| (x.re - 1.0 / 3.0).abs() < 1e-15 && x.im == 0.0));
        assert_eq!(OneParticleState::equal_superposition(0), Err(QuantumError::InvalidDim(0)));
    }

    #[test]
    fn validation_errors() {
        let h = CMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.1), Complex64::new(0.0, 0.1), Complex64::new(0.5, 0.0)],
        );
        assert!(matches!(OneParticleState::new(h), Err(QuantumError::NotHermitian(_))));
        assert!(matches!(OneParticleState::diagonal(&[0.5, 0.6]), Err(QuantumError::BadTrace(_))));
        assert!(matches!(OneParticleState::diagonal(&[1.5, -0.5]), Err(QuantumError::NotPsd(_))));
        let big = CMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(0.5, 0.0), Complex64::new(0.9, 0.0), Complex64::new(0.9, 0.0), Complex64::new(0.5, 0.0)],
        );
        assert!(matches!(OneParticleState::new(big), Err(QuantumError::NotPsd(_))));
        assert!(matches!(
            OneParticleState::pure(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]),
            Err(QuantumError::NotNormalized(_))
        ));
    }

    #[test]
    fn json_roundtrip() {
        let s = OneParticleState::pure(&[Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).unwrap();
        let text = serde_json::to_string(&s.to_json()).unwrap();
        let back: StateJson = serde_json::from_str(&text).unwrap();
        assert_eq!(OneParticleState::from_json(&back).unwrap(), s);
    }
}

//! Helstrom-optimal violation of the `(N, N−1)` fingerprinting inequality
//! by the equal superposition under binary phase encodings.

use super::QuantumError;
use crate::linalg::{eigh, CMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `M_ii = (N−1)/N`, `M_ij = (N−3+e^{iφ_i}+e^{−iφ_j})/N`.
pub fn build_m(phases: &[f64]) -> CMatrix {
    let n = phases.len();
    let nf = n as f64;
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new((nf - 1.0) / nf, 0.0)
        } else {
            (Complex64::new(nf - 3.0, 0.0)
                + Complex64::from_polar(1.0, phases[i])
                + Complex64::from_polar(1.0, -phases[j]))
                / nf
        }
    })
}

/// `M` restricted to `{e_1, e_2, Σ_{i≥3} e_i/√(N−2)}` for phases
/// `(φ, −φ, π, …, π)`; 2×2 when `N = 2`.
pub fn build_m3(n: usize, phi: f64) -> CMatrix {
    assert!(n >= 2, "needs at least two parties");
    let nf = n as f64;
    let e = Complex64::from_polar(1.0, phi);
    let diag = Complex64::new((nf - 1.0) / nf, 0.0);
    let m12 = (Complex64::new(nf - 3.0, 0.0) + e * 2.0) / nf;
    if n == 2 {
        return CMatrix::from_row_slice(2, 2, &[diag, m12, m12.conj(), diag]);
    }
    let r = (nf - 2.0).sqrt();
    let m13 = (Complex64::new(nf - 4.0, 0.0) + e) * r / nf;
    let m23 = (Complex64::new(nf - 4.0, 0.0) + e.conj()) * r / nf;
    let m33 = Complex64::new(((nf - 2.0) * (nf - 5.0) + 4.0) / nf, 0.0);
    CMatrix::from_row_slice(3, 3, &[diag, m12, m13, m12.conj(), diag, m23, m13.conj(), m23.conj(), m33])
}

/// Phases `(φ, −φ, π, …, π)`.
pub fn reduced_family(n: usize, phi: f64) -> Vec<f64> {
    (0..n)
        .map(|i| match i {
            0 => phi,
            1 => -phi,
            _ => PI,
        })
        .collect()
}

/// `max{0, −λ_min(M_3)}`.
pub fn violation_delta(n: usize, phi: f64) -> f64 {
    let min = eigh(&build_m3(n, phi)).expect("Hermitian by construction").min();
    (-min).max(0.0)
}

/// Closed-form maximal violation and its phase.
pub fn max_violation(n: usize) -> (f64, f64) {
    assert!(n >= 2, "needs at least two parties");
    if n <= 3 {
        return (2.0 / n as f64, PI);
    }
    let nf = n as f64;
    let delta = 1.0 / (nf * (nf - 2.0) * (nf - 3.0));
    let num = 53.0 - 105.0 * nf + 71.0 * nf.powi(2) - 20.0 * nf.powi(3) + 2.0 * nf.powi(4);
    let den = 2.0 * (nf - 2.0).powi(2) * (nf - 3.0).powi(2);
    (delta, (num / den).clamp(-1.0, 1.0).acos())
}

pub fn optimal_phases(n: usize) -> Vec<f64> {
    reduced_family(n, max_violation(n).1)
}

/// `½(N + 1 + ‖M‖₁)` on the reduced family.
pub fn helstrom_lhs(n: usize, phi: f64) -> f64 {
    let norm = eigh(&build_m(&reduced_family(n, phi))).expect("Hermitian").trace_norm();
    0.5 * (n as f64 + 1.0 + norm)
}

/// Grid scan of `φ` over `[0, 2π)` followed by golden-section refinement.
pub fn scan_violation(n: usize, steps: usize) -> (f64, f64) {
    use rayon::prelude::*;
    let step = 2.0 * PI / steps as f64;
    let (best_k, _) = (0..steps).into_par_iter().map(|k| (k, violation_delta(n, k as f64 * step))).reduce(
        || (0, f64::NEG_INFINITY),
        |a, b| {
            if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                b
            } else {
                a
            }
        },
    );
    let phi = golden_max(|x| violation_delta(n, x), (best_k as f64 - 1.0) * step, (best_k as f64 + 1.0) * step);
    (violation_delta(n, phi), phi)
}

pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// `Σ_k U_k ρ U_k† − ρ`, where `U_k` puts `phases[k]` on path `paths[k]`.
/// The fingerprinting left-hand side is maximized at
/// `|paths| + ½(‖X‖₁ − Tr X)`.
pub fn fingerprint_operator(rho: &CMatrix, paths: &[usize], phases: &[f64]) -> Result<CMatrix, QuantumError> {
    let n = rho.nrows();
    if let Some(&bad) = paths.iter().find(|&&p| p >= n) {
        return Err(QuantumError::IndexOutOfRange { index: bad, dim: n });
    }
    let mut x = -rho.clone();
    for (&p, &phi) in paths.iter().zip(phases) {
        let u = Complex64::from_polar(1.0, phi);
        let mut r = rho.clone();
        for k in 0..n {
            r[(p, k)] *= u;
            r[(k, p)] *= u.conj();
        }
        x += r;
    }
    Ok(x)
}

/// Helstrom analysis of one fingerprinting operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    /// Number of flipped parties; also the classical bound.
    pub n: usize,
    pub phases: Vec<f64>,
    pub trace_norm: f64,
    pub delta: f64,
    pub lhs: f64,
    pub optimal_measurement: String,
}

impl ViolationReport {
    /// Report for the equal superposition under the given phases.
    pub fn for_phases(phases: &[f64]) -> Self {
        Self::from_operator(&build_m(phases), phases).expect("Hermitian by construction")
    }

    pub fn optimal(n: usize) -> Self {
        Self::for_phases(&optimal_phases(n))
    }

    /// `x` must be a fingerprinting operator over `phases.len()` parties.
    pub fn from_operator(x: &CMatrix, phases: &[f64]) -> Result<Self, QuantumError> {
        let eig = eigh(x)?;
        let trace: f64 = eig.values.iter().sum();
        let trace_norm = eig.trace_norm();
        let negative = eig.values.iter().filter(|v| **v < 0.0).count();
        let delta = 0.5 * (trace_norm - trace);
        let n = phases.len();
        Ok(Self {
            n,
            phases: phases.to_vec(),
            trace_norm,
            delta,
            lhs: n as f64 + delta,
            optimal_measurement: format!(
                "output 0 on the {negative}-dimensional negative eigenspace of the fingerprinting operator, 1 elsewhere (vacuum included)"
            ),
        })
    }
}

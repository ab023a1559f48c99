//! Phase-encoding scan of the three nontrivial three-party facets.

use super::CoherenceError;
use crate::linalg::eigenvalues_3x3;
use crate::quantum::{golden_max, OneParticleState};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

/// A facet `Σ p(b|a) ≤ bound` over three binary parties, party 0 first in
/// each input triple.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanInequality {
    pub name: &'static str,
    pub terms: Vec<(usize, [usize; 3])>,
    pub bound: f64,
}

/// Representatives of the three nontrivial classes of the `(3, 2)` local
/// polytope.
pub fn scan_inequalities() -> [ScanInequality; 3] {
    [
        ScanInequality {
            name: "fingerprint",
            terms: vec![(0, [0, 0, 0]), (1, [0, 0, 1]), (1, [0, 1, 0]), (1, [1, 0, 0])],
            bound: 3.0,
        },
        ScanInequality {
            name: "mixed",
            terms: vec![(0, [0, 0, 0]), (1, [0, 0, 1]), (1, [0, 1, 0]), (0, [1, 0, 1])],
            bound: 3.0,
        },
        ScanInequality {
            name: "five-term",
            terms: vec![(0, [0, 0, 0]), (1, [0, 0, 1]), (1, [0, 1, 0]), (1, [0, 1, 1]), (0, [1, 1, 1])],
            bound: 4.0,
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseScan {
    pub resolution: usize,
    pub maxima: [f64; 3],
    pub bounds: [f64; 3],
    /// Maximizing phases after refinement.
    pub argmax: [[f64; 3]; 3],
}

impl PhaseScan {
    pub fn violates(&self, tol: f64) -> [bool; 3] {
        std::array::from_fn(|c| self.maxima[c] > self.bounds[c] + tol)
    }
}

struct Evaluator {
    rho: [[Complex64; 3]; 3],
    signs: Vec<f64>,
    inputs: Vec<[usize; 3]>,
    ones: f64,
}

impl Evaluator {
    fn new(rho: [[Complex64; 3]; 3], ineq: &ScanInequality) -> Self {
        Self {
            rho,
            signs: ineq.terms.iter().map(|(b, _)| if *b == 0 { 1.0 } else { -1.0 }).collect(),
            inputs: ineq.terms.iter().map(|(_, a)| *a).collect(),
            ones: ineq.terms.iter().filter(|(b, _)| *b == 1).count() as f64,
        }
    }

    /// Helstrom-optimal left-hand side: the number of output-1 terms plus
    /// the positive part of `Σ_{b=0} σ_a − Σ_{b=1} σ_a`.
    fn value_with(&self, rot: &[Complex64; 3]) -> f64 {
        let one = Complex64::new(1.0, 0.0);
        let mut x = [[Complex64::new(0.0, 0.0); 3]; 3];
        for (s, a) in self.signs.iter().zip(&self.inputs) {
            let f: [Complex64; 3] = std::array::from_fn(|k| if a[k] == 1 { rot[k] } else { one });
            for i in 0..3 {
                for j in i..3 {
                    x[i][j] += f[i] * f[j].conj() * *s;
                }
            }
        }
        for i in 0..3 {
            for j in i..3 {
                x[i][j] *= self.rho[i][j];
                x[j][i] = x[i][j].conj();
            }
        }
        self.ones + eigenvalues_3x3(&x).iter().filter(|v| **v > 0.0).sum::<f64>()
    }

    fn value(&self, phi: [f64; 3]) -> f64 {
        self.value_with(&phi.map(|p| Complex64::from_polar(1.0, p)))
    }
}

fn better(a: (f64, [usize; 3]), b: (f64, [usize; 3])) -> (f64, [usize; 3]) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

/// Maximizes the three facet left-hand sides over phase encodings
/// `a_k ↦ e^{iφ_k a_k}` on a `resolution³` grid, then refines the best
/// grid point by coordinate-wise golden-section search.
pub fn phase_scan_witness(state: &OneParticleState, resolution: usize) -> Result<PhaseScan, CoherenceError> {
    if state.dim() != 3 {
        return Err(CoherenceError::UnsupportedDim(state.dim()));
    }
    if resolution == 0 {
        return Err(CoherenceError::UnsupportedDim(0));
    }
    let rho: [[Complex64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| state.entry(i, j)));
    let ineqs = scan_inequalities();
    let evals: Vec<Evaluator> = ineqs.iter().map(|q| Evaluator::new(rho, q)).collect();
    let step = TAU / resolution as f64;
    let table: Vec<Complex64> = (0..resolution).map(|k| Complex64::from_polar(1.0, k as f64 * step)).collect();

    let start = [(f64::NEG_INFINITY, [usize::MAX; 3]); 3];
    let best = (0..resolution)
        .into_par_iter()
        .fold(
            || start,
            |mut acc, i| {
                for j in 0..resolution {
                    for k in 0..resolution {
                        let rot = [table[i], table[j], table[k]];
                        for (c, ev) in evals.iter().enumerate() {
                            acc[c] = better(acc[c], (ev.value_with(&rot), [i, j, k]));
                        }
                    }
                }
                acc
            },
        )
        .reduce(|| start, |a, b| std::array::from_fn(|c| better(a[c], b[c])));

    let mut maxima = [0.0; 3];
    let mut argmax = [[0.0; 3]; 3];
    for (c, ev) in evals.iter().enumerate() {
        let mut phi = best[c].1.map(|g| g as f64 * step);
        let mut val = best[c].0;
        for _ in 0..4 {
            for axis in 0..3 {
                let centre = phi[axis];
                let t = golden_max(
                    |x| {
                        let mut p = phi;
                        p[axis] = x;
                        ev.value(p)
                    },
                    centre - step,
                    centre + step,
                );
                let mut cand = phi;
                cand[axis] = t;
                let v = ev.value(cand);
                if v > val {
                    val = v;
                    phi = cand;
                }
            }
        }
        maxima[c] = val;
        argmax[c] = phi;
    }
    Ok(PhaseScan { resolution, maxima, bounds: ineqs.map(|q| q.bound), argmax })
}

//! Linear functionals `c·p ≤ s` on transition coordinates.

use super::{Alphabets, Mac, MacError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearInequality<T = f64> {
    alphabets: Alphabets,
    coeffs: Vec<T>,
    bound: T,
}

impl<T: Scalar> LinearInequality<T> {
    pub fn new(alphabets: Alphabets, coeffs: Vec<T>, bound: T) -> Result<Self, MacError> {
        if coeffs.len() != alphabets.len() {
            return Err(MacError::ShapeMismatch { expected: alphabets.len(), found: coeffs.len() });
        }
        Ok(Self { alphabets, coeffs, bound })
    }

    /// Builds `Σ c·p(b|a) ≤ bound` from `(c, b, a)` terms.
    pub fn from_terms(alphabets: Alphabets, terms: &[(T, usize, Vec<usize>)], bound: T) -> Result<Self, MacError> {
        let mut coeffs = vec![T::zero(); alphabets.len()];
        for (c, b, a) in terms {
            if *b >= alphabets.output_size() {
                return Err(MacError::OutputOutOfRange(*b));
            }
            alphabets.check_inputs(a)?;
            let k = alphabets.coord(*b, a);
            coeffs[k] = coeffs[k].clone() + c.clone();
        }
        Self::new(alphabets, coeffs, bound)
    }

    pub fn alphabets(&self) -> &Alphabets {
        &self.alphabets
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn bound(&self) -> &T {
        &self.bound
    }

    /// `c·p`.
    pub fn eval(&self, mac: &Mac<T>) -> Result<T, MacError> {
        if mac.alphabets() != &self.alphabets {
            return Err(MacError::ShapeMismatch { expected: self.coeffs.len(), found: mac.probs().len() });
        }
        Ok(self.coeffs.iter().zip(mac.probs()).fold(T::zero(), |acc, (c, p)| acc + c.clone() * p.clone()))
    }

    /// `c·p − s`; positive means violated.
    pub fn excess(&self, mac: &Mac<T>) -> Result<T, MacError> {
        Ok(self.eval(mac)? - self.bound.clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> LinearInequality<U> {
        LinearInequality {
            alphabets: self.alphabets.clone(),
            coeffs: self.coeffs.iter().map(&f).collect(),
            bound: f(&self.bound),
        }
    }
}

/// Which output symbols the fingerprinting functional reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FingerprintOutput {
    /// `p(zero|ref) + Σ p(other|flip_i) ≤ K+1`, binary output only.
    Binary { zero: usize },
    /// `−p(b|ref) + Σ p(b|flip_i) ≤ K`, any output size.
    Signed { b: usize },
}

/// Distinguished symbols: the reference input of every party, the flipped
/// input of every party, and the output form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FingerprintLabeling {
    pub reference: Vec<usize>,
    pub flipped: Vec<usize>,
    pub output: FingerprintOutput,
}

impl FingerprintLabeling {
    /// Reference 0, flip 1, binary form with output 0 on the reference.
    pub fn standard(parties: usize) -> Self {
        Self { reference: vec![0; parties], flipped: vec![1; parties], output: FingerprintOutput::Binary { zero: 0 } }
    }

    pub fn signed(parties: usize, b: usize) -> Self {
        Self { output: FingerprintOutput::Signed { b }, ..Self::standard(parties) }
    }
}

/// The `(N,K)` fingerprinting functional over `parties` (size `K+1`).
pub fn fingerprint_inequality<T: Scalar>(
    alphabets: &Alphabets,
    k: usize,
    parties: &[usize],
    labeling: &FingerprintLabeling,
) -> Result<LinearInequality<T>, MacError> {
    if parties.len() != k + 1 {
        return Err(MacError::BadSubsetSize { expected: k + 1, found: parties.len() });
    }
    alphabets.check_subset(parties)?;
    let n = alphabets.parties();
    if labeling.reference.len() != n || labeling.flipped.len() != n {
        return Err(MacError::ShapeMismatch {
            expected: n,
            found: labeling.reference.len().min(labeling.flipped.len()),
        });
    }
    alphabets.check_inputs(&labeling.reference)?;
    for &s in parties {
        let f = labeling.flipped[s];
        if f >= alphabets.input_size(s) {
            return Err(MacError::SymbolOutOfRange { party: s, symbol: f });
        }
        if f == labeling.reference[s] {
            return Err(MacError::NonBinaryRestriction(s));
        }
    }
    let flips = parties.iter().map(|&s| {
        let mut a = labeling.reference.clone();
        a[s] = labeling.flipped[s];
        a
    });
    let (ref_term, flip_out, bound) = match labeling.output {
        FingerprintOutput::Binary { zero } => {
            if alphabets.output_size() != 2 {
                return Err(MacError::UnsupportedOutputSize(alphabets.output_size()));
            }
            if zero > 1 {
                return Err(MacError::OutputOutOfRange(zero));
            }
            ((T::one(), zero), 1 - zero, k + 1)
        }
        FingerprintOutput::Signed { b } => ((-T::one(), b), b, k),
    };
    let mut terms = vec![(ref_term.0, ref_term.1, labeling.reference.clone())];
    terms.extend(flips.map(|a| (T::one(), flip_out, a)));
    LinearInequality::from_terms(alphabets.clone(), &terms, T::from_ratio(bound as i64, 1))
}

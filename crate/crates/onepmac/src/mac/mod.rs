//! Multiple-access channels over finite alphabets.
//!
//! A MAC stores `p(b|a_1..a_N)` densely. The output index is outermost and
//! party 0 is the most significant input digit. Parties are 0-based here.

mod coords;
mod inequality;
mod interference;
mod vertices;

pub use coords::{from_interference_coords, to_interference_coords, InterferenceCoords};
pub use inequality::{fingerprint_inequality, FingerprintLabeling, FingerprintOutput, LinearInequality};
pub use interference::{
    interference_i2, interference_ik, interference_ik_restricted, is_separable, is_separable_with, max_interference_ik,
};
pub use vertices::{deterministic_tables, enumerate_vertices, vertex_count_bound, DeterministicTables};

use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const VALIDATION_TOL: f64 = 1e-12;
pub const VANISHING_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MacError {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("shape mismatch: expected {expected} entries, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("not stochastic at input {input:?}: deviation {deficit:e}")]
    NotStochastic { input: Vec<usize>, deficit: f64 },
    #[error("party index {index} out of range for {parties} parties")]
    IndexOutOfRange { index: usize, parties: usize },
    #[error("input {symbol} out of range for party {party}")]
    SymbolOutOfRange { party: usize, symbol: usize },
    #[error("output {0} out of range")]
    OutputOutOfRange(usize),
    #[error("party {0} does not have a usable binary restriction")]
    NonBinaryRestriction(usize),
    #[error("output alphabet of size {0} is not supported here (binary output required)")]
    UnsupportedOutputSize(usize),
    #[error("party subset has size {found}, expected {expected}")]
    BadSubsetSize { expected: usize, found: usize },
    #[error("interference coordinates incomplete: {missing} missing")]
    IncompleteCoords { missing: usize },
    #[error("duplicate party {0} in subset")]
    DuplicateParty(usize),
}

/// Input alphabet sizes `|A_i|` and output size `|B|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabets {
    inputs: Vec<usize>,
    output: usize,
}

impl Alphabets {
    pub fn new(inputs: Vec<usize>, output: usize) -> Result<Self, MacError> {
        if inputs.is_empty() {
            return Err(MacError::InvalidAlphabet("at least one party is required".into()));
        }
        if let Some(&bad) = inputs.iter().find(|&&m| m < 2) {
            return Err(MacError::InvalidAlphabet(format!("input size {bad} < 2")));
        }
        if output < 2 {
            return Err(MacError::InvalidAlphabet(format!("output size {output} < 2")));
        }
        Ok(Self { inputs, output })
    }

    /// `N` parties with binary inputs and a binary output.
    pub fn binary(parties: usize) -> Self {
        Self::new(vec![2; parties], 2).expect("binary alphabets are valid")
    }

    pub fn uniform(parties: usize, input: usize, output: usize) -> Result<Self, MacError> {
        Self::new(vec![input; parties], output)
    }

    pub fn parties(&self) -> usize {
        self.inputs.len()
    }

    pub fn input_sizes(&self) -> &[usize] {
        &self.inputs
    }

    pub fn input_size(&self, party: usize) -> usize {
        self.inputs[party]
    }

    pub fn output_size(&self) -> usize {
        self.output
    }

    pub fn is_binary(&self) -> bool {
        self.output == 2 && self.inputs.iter().all(|&m| m == 2)
    }

    /// Number of input tuples `Π|A_i|`.
    pub fn input_count(&self) -> usize {
        self.inputs.iter().product()
    }

    /// Number of transition coordinates `|B|·Π|A_i|`.
    pub fn len(&self) -> usize {
        self.output * self.input_count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn input_index(&self, inputs: &[usize]) -> usize {
        debug_assert_eq!(inputs.len(), self.inputs.len());
        inputs.iter().zip(&self.inputs).fold(0, |acc, (&a, &m)| acc * m + a)
    }

    pub fn input_tuple(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.inputs.len()];
        for (slot, &m) in out.iter_mut().zip(&self.inputs).rev() {
            *slot = index % m;
            index /= m;
        }
        out
    }

    /// Flat coordinate of `p(b|a)`.
    pub fn coord(&self, b: usize, inputs: &[usize]) -> usize {
        b * self.input_count() + self.input_index(inputs)
    }

    /// Splits a flat coordinate into `(b, input index)`.
    pub fn split_coord(&self, coord: usize) -> (usize, usize) {
        let n = self.input_count();
        (coord / n, coord % n)
    }

    /// Stride of `party` within the flat input index.
    pub fn stride(&self, party: usize) -> usize {
        self.inputs[party + 1..].iter().product()
    }

    pub fn input_tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.input_count()).map(|i| self.input_tuple(i))
    }

    pub(crate) fn check_party(&self, party: usize) -> Result<(), MacError> {
        if party >= self.parties() {
            Err(MacError::IndexOutOfRange { index: party, parties: self.parties() })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_subset(&self, parties: &[usize]) -> Result<(), MacError> {
        let mut seen = vec![false; self.parties()];
        for &p in parties {
            self.check_party(p)?;
            if std::mem::replace(&mut seen[p], true) {
                return Err(MacError::DuplicateParty(p));
            }
        }
        Ok(())
    }

    pub(crate) fn check_inputs(&self, inputs: &[usize]) -> Result<(), MacError> {
        if inputs.len() != self.parties() {
            return Err(MacError::ShapeMismatch { expected: self.parties(), found: inputs.len() });
        }
        for (party, (&a, &m)) in inputs.iter().zip(&self.inputs).enumerate() {
            if a >= m {
                return Err(MacError::SymbolOutOfRange { party, symbol: a });
            }
        }
        Ok(())
    }
}

/// Conditional distribution `p(b|a_1..a_N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mac<T = f64> {
    alphabets: Alphabets,
    probs: Vec<T>,
}

impl<T: Scalar> Mac<T> {
    /// Validates with the default tolerance.
    pub fn new(alphabets: Alphabets, probs: Vec<T>) -> Result<Self, MacError> {
        Self::with_tolerance(alphabets, probs, VALIDATION_TOL)
    }

    pub fn with_tolerance(alphabets: Alphabets, probs: Vec<T>, tol: f64) -> Result<Self, MacError> {
        if probs.len() != alphabets.len() {
            return Err(MacError::ShapeMismatch { expected: alphabets.len(), found: probs.len() });
        }
        let n = alphabets.input_count();
        let mut worst: Option<(usize, f64)> = None;
        for a in 0..n {
            let mut total = T::zero();
            let mut deviation = 0.0_f64;
            for b in 0..alphabets.output_size() {
                let p = &probs[b * n + a];
                if *p < T::zero() {
                    deviation = deviation.max(-p.to_f64());
                }
                if *p > T::one() {
                    deviation = deviation.max(p.to_f64() - 1.0);
                }
                total = total + p.clone();
            }
            let miss = total - T::one();
            if !miss.is_negligible(tol) {
                deviation = deviation.max(miss.abs().to_f64());
            }
            let bad = if T::EXACT { deviation > 0.0 || !miss.is_negligible(tol) } else { deviation > tol };
            if bad && worst.is_none_or(|(_, d)| deviation > d) {
                worst = Some((a, deviation));
            }
        }
        match worst {
            Some((a, deficit)) => Err(MacError::NotStochastic { input: alphabets.input_tuple(a), deficit }),
            None => Ok(Self { alphabets, probs }),
        }
    }

    /// Builds `p(b|a) = f(b, a)` and validates it.
    pub fn from_fn(alphabets: Alphabets, f: impl Fn(usize, &[usize]) -> T) -> Result<Self, MacError> {
        let n = alphabets.input_count();
        let mut probs = Vec::with_capacity(alphabets.len());
        for b in 0..alphabets.output_size() {
            for a in 0..n {
                probs.push(f(b, &alphabets.input_tuple(a)));
            }
        }
        Self::new(alphabets, probs)
    }

    /// Deterministic MAC `p(b|a) = [b == f(a)]`.
    pub fn deterministic(alphabets: Alphabets, f: impl Fn(&[usize]) -> usize) -> Self {
        let table: Vec<usize> = alphabets.input_tuples().map(|a| f(&a)).collect();
        Self::from_table(alphabets, &table)
    }

    /// Deterministic MAC from an output table indexed by flat input index.
    pub fn from_table<I: Copy + Into<usize>>(alphabets: Alphabets, table: &[I]) -> Self {
        let n = alphabets.input_count();
        assert_eq!(table.len(), n, "table length must equal the input count");
        let mut probs = vec![T::zero(); alphabets.len()];
        for (a, &b) in table.iter().enumerate() {
            let b: usize = b.into();
            assert!(b < alphabets.output_size(), "output symbol out of range");
            probs[b * n + a] = T::one();
        }
        Self { alphabets, probs }
    }

    /// Constant MAC that always outputs `b`.
    pub fn constant(alphabets: Alphabets, b: usize) -> Self {
        Self::deterministic(alphabets, |_| b)
    }

    /// Convex combination `Σ w_k mac_k`; weights must be nonnegative and sum to one.
    pub fn mixture(parts: &[(T, &Mac<T>)]) -> Result<Self, MacError> {
        let first = parts.first().ok_or_else(|| MacError::InvalidAlphabet("empty mixture".into()))?.1;
        let mut probs = vec![T::zero(); first.probs.len()];
        for (w, mac) in parts {
            if mac.alphabets != first.alphabets {
                return Err(MacError::ShapeMismatch { expected: first.probs.len(), found: mac.probs.len() });
            }
            for (acc, p) in probs.iter_mut().zip(&mac.probs) {
                *acc = acc.clone() + w.clone() * p.clone();
            }
        }
        Self::new(first.alphabets.clone(), probs)
    }

    pub fn alphabets(&self) -> &Alphabets {
        &self.alphabets
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<T> {
        self.probs
    }

    pub fn prob(&self, b: usize, inputs: &[usize]) -> &T {
        &self.probs[self.alphabets.coord(b, inputs)]
    }

    pub(crate) fn prob_at(&self, b: usize, input_index: usize) -> &T {
        &self.probs[b * self.alphabets.input_count() + input_index]
    }

    /// Entrywise conversion without revalidation.
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mac<U> {
        Mac { alphabets: self.alphabets.clone(), probs: self.probs.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> Mac<f64> {
        self.map(|p| p.to_f64())
    }
}

impl Mac<f64> {
    /// Converts to exact rationals, snapping each entry to the shortest
    /// fraction within `tol` and revalidating exactly.
    pub fn to_rational(&self, tol: f64) -> Result<Mac<num_rational::BigRational>, MacError> {
        let probs = self.probs.iter().map(|&p| crate::scalar::rational_approx(p, tol)).collect();
        Mac::with_tolerance(self.alphabets.clone(), probs, 0.0)
    }
}

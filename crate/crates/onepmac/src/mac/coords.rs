//! Interference coordinates.
//!
//! The coordinate `q(b, S, {α_s})` is stored at the flat position of `p(b|a)`
//! where `a_s = α_s` on `S` and `a_j = 0` elsewhere, so both tensors share
//! one layout. The forward map is a per-party difference `v(α) − v(0)`;
//! the inverse is the matching per-party prefix sum.

use super::{Alphabets, Mac, MacError};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceCoords<T = f64> {
    alphabets: Alphabets,
    coords: Vec<T>,
}

impl<T: Scalar> InterferenceCoords<T> {
    /// Builds coordinates from `(b, [(party, α)], value)` entries. Every key
    /// of the full basis must be present exactly once.
    pub fn from_entries(
        alphabets: Alphabets,
        entries: impl IntoIterator<Item = (usize, Vec<(usize, usize)>, T)>,
    ) -> Result<Self, MacError> {
        let mut slots: Vec<Option<T>> = vec![None; alphabets.len()];
        for (b, support, value) in entries {
            let coord = key_coord(&alphabets, b, &support)?;
            slots[coord] = Some(value);
        }
        let missing = slots.iter().filter(|s| s.is_none()).count();
        if missing > 0 {
            return Err(MacError::IncompleteCoords { missing });
        }
        Ok(Self { alphabets, coords: slots.into_iter().map(Option::unwrap).collect() })
    }

    pub fn alphabets(&self) -> &Alphabets {
        &self.alphabets
    }

    /// Full basis in layout order; length `|B|·Π|A_i|`.
    pub fn values(&self) -> &[T] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// `q(b, S, {α_s})` with the support given as `(party, α)` pairs.
    pub fn get(&self, b: usize, support: &[(usize, usize)]) -> Result<&T, MacError> {
        Ok(&self.coords[key_coord(&self.alphabets, b, support)?])
    }

    /// Binary-form `q(S)`: output 0 and `α_s = 1`.
    pub fn q(&self, parties: &[usize]) -> Result<&T, MacError> {
        let support: Vec<(usize, usize)> = parties.iter().map(|&s| (s, 1)).collect();
        self.get(0, &support)
    }

    /// All keys with their values, `(b, support, q)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, Vec<(usize, usize)>, &T)> + '_ {
        let n = self.alphabets.input_count();
        self.coords.iter().enumerate().map(move |(c, v)| {
            let (b, a) = (c / n, c % n);
            let support =
                self.alphabets.input_tuple(a).into_iter().enumerate().filter(|&(_, alpha)| alpha != 0).collect();
            (b, support, v)
        })
    }

    /// Reduced basis: outputs `b < |B| − 1`.
    pub fn reduced(&self) -> BTreeMap<(usize, Vec<(usize, usize)>), T> {
        let last = self.alphabets.output_size() - 1;
        self.entries().filter(|(b, _, _)| *b < last).map(|(b, s, v)| ((b, s), v.clone())).collect()
    }
}

fn key_coord(al: &Alphabets, b: usize, support: &[(usize, usize)]) -> Result<usize, MacError> {
    if b >= al.output_size() {
        return Err(MacError::OutputOutOfRange(b));
    }
    let mut inputs = vec![0; al.parties()];
    for &(party, alpha) in support {
        al.check_party(party)?;
        if alpha == 0 || alpha >= al.input_size(party) {
            return Err(MacError::SymbolOutOfRange { party, symbol: alpha });
        }
        if inputs[party] != 0 {
            return Err(MacError::DuplicateParty(party));
        }
        inputs[party] = alpha;
    }
    Ok(al.coord(b, &inputs))
}

/// Applies `v(α) ← v(α) ∓ v(0)` along every party axis.
fn transform<T: Scalar>(al: &Alphabets, values: &mut [T], forward: bool) {
    let n = al.input_count();
    for party in 0..al.parties() {
        let stride = al.stride(party);
        let m = al.input_size(party);
        for block in values.chunks_mut(n) {
            for index in 0..n {
                let digit = index / stride % m;
                if digit == 0 {
                    continue;
                }
                let base = block[index - digit * stride].clone();
                let v = block[index].clone();
                block[index] = if forward { v - base } else { v + base };
            }
        }
    }
}

pub fn to_interference_coords<T: Scalar>(mac: &Mac<T>) -> InterferenceCoords<T> {
    let al = mac.alphabets().clone();
    let mut coords = mac.probs().to_vec();
    transform(&al, &mut coords, true);
    InterferenceCoords { alphabets: al, coords }
}

pub fn from_interference_coords<T: Scalar>(coords: &InterferenceCoords<T>) -> Result<Mac<T>, MacError> {
    let mut probs = coords.coords.clone();
    transform(&coords.alphabets, &mut probs, false);
    Mac::new(coords.alphabets.clone(), probs)
}

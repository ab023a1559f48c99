//! Deterministic `(N,K)`-local MACs.

use super::{Alphabets, Mac, MacError};
use crate::scalar::Scalar;
use itertools::Itertools;
use std::collections::HashSet;

/// Upper bound `C(N,K)·|B|^(M^K)` on the vertex count, saturating.
pub fn vertex_count_bound(k: usize, alphabets: &Alphabets) -> u128 {
    let n = alphabets.parties();
    let mut total: u128 = 0;
    for subset in (0..n).combinations(k) {
        let domain: u32 = subset.iter().map(|&s| alphabets.input_size(s) as u32).product();
        let count = (alphabets.output_size() as u128).checked_pow(domain).unwrap_or(u128::MAX);
        total = total.saturating_add(count);
    }
    total
}

/// All distinct deterministic MACs whose output depends on at most `k`
/// parties. Requires a binary output.
pub fn enumerate_vertices<T: Scalar>(k: usize, alphabets: &Alphabets) -> Result<Vec<Mac<T>>, MacError> {
    if alphabets.output_size() != 2 {
        return Err(MacError::UnsupportedOutputSize(alphabets.output_size()));
    }
    Ok(deterministic_tables(k, alphabets)?.map(|table| Mac::from_table(alphabets.clone(), &table)).collect())
}

/// Streams the output tables (indexed by flat input) of the deterministic
/// `k`-local MACs, deduplicated, for any output size.
///
/// Order: party subsets lexicographically, then tables by the number of
/// inputs mapped away from output 0, then lexicographically. Low-weight
/// tables come first so rank computations saturate early.
pub fn deterministic_tables(k: usize, alphabets: &Alphabets) -> Result<DeterministicTables, MacError> {
    let n = alphabets.parties();
    if k == 0 || k > n {
        return Err(MacError::BadSubsetSize { expected: n, found: k });
    }
    let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    Ok(DeterministicTables { alphabets: alphabets.clone(), subsets, subset: 0, local: None, seen: HashSet::new() })
}

pub struct DeterministicTables {
    alphabets: Alphabets,
    subsets: Vec<Vec<usize>>,
    subset: usize,
    local: Option<LocalTables>,
    seen: HashSet<Vec<u8>>,
}

/// Functions of one party subset, enumerated by weight.
struct LocalTables {
    domain: usize,
    outputs: usize,
    weight: usize,
    positions: Option<Vec<usize>>,
    symbols: Vec<usize>,
}

impl LocalTables {
    fn new(domain: usize, outputs: usize) -> Self {
        Self { domain, outputs, weight: 0, positions: Some(Vec::new()), symbols: Vec::new() }
    }

    fn next(&mut self) -> Option<Vec<u8>> {
        let positions = self.positions.as_ref()?;
        let mut table = vec![0u8; self.domain];
        for (&p, &s) in positions.iter().zip(&self.symbols) {
            table[p] = (s + 1) as u8;
        }
        self.advance();
        Some(table)
    }

    fn advance(&mut self) {
        // symbols cycle over 0..outputs-1, then the position set advances
        for s in self.symbols.iter_mut().rev() {
            *s += 1;
            if *s + 1 < self.outputs {
                return;
            }
            *s = 0;
        }
        let positions = self.positions.as_mut().unwrap();
        if next_combination(positions, self.domain) {
            return;
        }
        self.weight += 1;
        if self.weight > self.domain {
            self.positions = None;
        } else {
            self.positions = Some((0..self.weight).collect());
            self.symbols = vec![0; self.weight];
        }
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl Iterator for DeterministicTables {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        loop {
            if self.subset >= self.subsets.len() {
                return None;
            }
            let subset = &self.subsets[self.subset];
            let local = self.local.get_or_insert_with(|| {
                let domain = subset.iter().map(|&s| self.alphabets.input_size(s)).product();
                LocalTables::new(domain, self.alphabets.output_size())
            });
            let Some(local_table) = local.next() else {
                self.local = None;
                self.subset += 1;
                continue;
            };
            let al = &self.alphabets;
            let table: Vec<u8> = (0..al.input_count())
                .map(|a| {
                    let tuple = al.input_tuple(a);
                    let local_index = subset.iter().fold(0, |acc, &s| acc * al.input_size(s) + tuple[s]);
                    local_table[local_index]
                })
                .collect();
            if self.seen.insert(table.clone()) {
                return Some(table);
            }
        }
    }
}

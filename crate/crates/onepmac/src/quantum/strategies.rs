//! Encoding strategies that extract interference from a state.

use super::{
    generate_mac, random_joint_encoding, random_np_channel, random_pure_state, random_two_outcome_povm, Encoding,
    GroupEncoding, JointNpChannel, OneParticleState, Povm, QuantumError,
};
use crate::linalg::{eigh, CMatrix};
use crate::mac::{max_interference_ik, Alphabets, Mac, MacError};
use crate::polytope::AffineRank;
use itertools::Itertools;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

fn check_pair(n: usize, i: usize, j: usize) -> Result<(), QuantumError> {
    for p in [i, j] {
        if p >= n {
            return Err(QuantumError::IndexOutOfRange { index: p, dim: n });
        }
    }
    if i == j {
        return Err(MacError::DuplicateParty(i).into());
    }
    Ok(())
}

/// Measurement vector `(|e_i⟩ + u|e_j⟩)/√2` on the full space, with the
/// phase `u` chosen to align with `ρ_ij`.
fn aligned_vector(state: &OneParticleState, i: usize, j: usize) -> Vec<Complex64> {
    let rij = state.entry(i, j);
    let u = if rij.norm() > 0.0 { rij.conj() / rij.norm() } else { Complex64::new(1.0, 0.0) };
    let mut v = vec![Complex64::new(0.0, 0.0); state.dim() + 1];
    v[i + 1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    v[j + 1] = u * FRAC_1_SQRT_2;
    v
}

/// `{0, π}` phases on paths `i` and `j` decoded by a projector aligned with
/// `ρ_ij`; all parties have binary inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct I2Strategy {
    pub i: usize,
    pub j: usize,
    pub measurement: Vec<Complex64>,
}

impl I2Strategy {
    pub fn encoding(&self, n: usize) -> Encoding {
        let phases: Vec<f64> = (0..n).map(|p| if p == self.i || p == self.j { PI } else { 0.0 }).collect();
        Encoding::binary_phases(&phases)
    }

    pub fn povm(&self) -> Povm {
        Povm::projective(&self.measurement).expect("unit vector")
    }

    pub fn mac(&self, state: &OneParticleState) -> Result<Mac<f64>, QuantumError> {
        generate_mac(state, &self.encoding(state.dim()), &self.povm())
    }
}

/// The largest pairwise interference reachable from `state`, `4|ρ_ij|`,
/// with a strategy attaining it (none when `ρ_ij = 0`).
pub fn i2_max_for_state(
    state: &OneParticleState,
    i: usize,
    j: usize,
) -> Result<(f64, Option<I2Strategy>), QuantumError> {
    check_pair(state.dim(), i, j)?;
    let mag = state.entry(i, j).norm();
    if mag == 0.0 {
        return Ok((0.0, None));
    }
    Ok((4.0 * mag, Some(I2Strategy { i, j, measurement: aligned_vector(state, i, j) })))
}

/// Two disjoint groups each flip the phase of one path by the parity of
/// their inputs; the decoder projects onto the aligned pair vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityStrategy {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

fn parity_group(parties: &[usize]) -> GroupEncoding {
    let m = parties.len();
    let channels = (0..1usize << m)
        .map(|local| {
            let mut phases = vec![0.0; m];
            if local.count_ones() % 2 == 1 {
                phases[0] = PI;
            }
            JointNpChannel::phases(parties.to_vec(), &phases)
        })
        .collect();
    GroupEncoding { parties: parties.to_vec(), input_sizes: vec![2; m], channels }
}

impl ParityStrategy {
    /// Paths `first[0]` and `second[0]` carry the phases.
    pub fn encoding(&self, n: usize) -> Result<Encoding, QuantumError> {
        let mut used = vec![false; n];
        for &p in self.first.iter().chain(&self.second) {
            if p >= n {
                return Err(QuantumError::IndexOutOfRange { index: p, dim: n });
            }
            if std::mem::replace(&mut used[p], true) {
                return Err(QuantumError::InvalidPartition(format!("party {p} in both groups")));
            }
        }
        if self.first.is_empty() || self.second.is_empty() {
            return Err(QuantumError::InvalidPartition("empty group".into()));
        }
        let mut groups = vec![parity_group(&self.first), parity_group(&self.second)];
        for p in (0..n).filter(|&p| !used[p]) {
            groups.push(GroupEncoding {
                parties: vec![p],
                input_sizes: vec![2],
                channels: vec![JointNpChannel::identity(vec![p]); 2],
            });
        }
        Ok(Encoding::Joint(groups))
    }
}

/// MAC of [`ParityStrategy`]; its interference over `first ∪ second` is
/// `2^{|first|+|second|} |ρ_ij|`.
pub fn pair_parity_mac(state: &OneParticleState, strategy: &ParityStrategy) -> Result<Mac<f64>, QuantumError> {
    let encoding = strategy.encoding(state.dim())?;
    let (i, j) = (strategy.first[0], strategy.second[0]);
    let povm = Povm::projective(&aligned_vector(state, i, j))?;
    generate_mac(state, &encoding, &povm)
}

/// Largest `|I_{2K+1}|` over random group encodings with groups of at most
/// `k` parties and random two-outcome measurements. Deterministic in `seed`.
pub fn max_odd_interference(state: &OneParticleState, k: usize, trials: usize, seed: u64) -> Result<f64, QuantumError> {
    let n = state.dim();
    let order = 2 * k + 1;
    if k == 0 || order > n {
        return Err(QuantumError::InvalidDim(n));
    }
    let subsets: Vec<Vec<usize>> = (0..n).combinations(order).collect();
    let values = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<f64, QuantumError> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64));
            let enc = random_joint_encoding(&mut rng, n, k);
            let povm = random_two_outcome_povm(&mut rng, n + 1);
            let mac = generate_mac(state, &enc, &povm)?;
            let mut worst = 0.0f64;
            for s in &subsets {
                worst = worst.max(max_interference_ik(&mac, s)?.abs());
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(values.into_iter().fold(0.0, f64::max))
}

/// True when every sampled `I_{2K+1}` is below `1e-9`.
pub fn verify_odd_interference_vanishes(
    state: &OneParticleState,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<bool, QuantumError> {
    Ok(max_odd_interference(state, k, trials, seed)? < 1e-9)
}

/// Affinely independent MACs in the `(N,K)`-local quantum set: the
/// classical points `p(0|a) = Π_{s∈S} [a_s = 1]` for `|S| ≤ K` together
/// with the constant output 1, and a parity point for every `S` with
/// `K < |S| ≤ 2K`. Returned as full transition vectors.
pub fn q_nk_points(n: usize, k: usize) -> Result<Vec<Vec<f64>>, QuantumError> {
    let al = Alphabets::binary(n);
    let mut points = vec![Mac::<f64>::constant(al.clone(), 1).into_probs()];
    for size in 0..=k.min(n) {
        for s in (0..n).combinations(size) {
            let mac = Mac::<f64>::deterministic(al.clone(), |a| usize::from(!s.iter().all(|&p| a[p] == 1)));
            points.push(mac.into_probs());
        }
    }
    for size in k + 1..=(2 * k).min(n) {
        for s in (0..n).combinations(size) {
            let half = size.div_ceil(2);
            let path_i = s[0];
            let path_j = s[half];
            let mut amp = vec![Complex64::new(0.0, 0.0); n];
            amp[path_i] = Complex64::new(FRAC_1_SQRT_2, 0.0);
            amp[path_j] = Complex64::new(FRAC_1_SQRT_2, 0.0);
            let state = OneParticleState::pure(&amp)?;
            let strategy = ParityStrategy { first: s[..half].to_vec(), second: s[half..].to_vec() };
            points.push(pair_parity_mac(&state, &strategy)?.into_probs());
        }
    }
    Ok(points)
}

pub fn q_nk_affine_rank(n: usize, k: usize, tol: f64) -> Result<usize, QuantumError> {
    let mut rank = AffineRank::<f64>::new(tol);
    for p in q_nk_points(n, k)? {
        rank.push(&p).map_err(|e| QuantumError::InvalidPartition(e.to_string()))?;
    }
    Ok(rank.rank())
}

/// Best values found while trying to reproduce the two-party AND table
/// `p(0|00) = 1`, `p(0|01) = p(0|10) = p(0|11) = 0` with local encodings.
/// Sampling evidence only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationEvidence {
    pub samples: usize,
    /// Largest `p(0|00)` among strategies whose leak is at most `leak_cap`.
    pub best_and_value: f64,
    pub leak_cap: f64,
    /// Largest `p(0|00) − (p(0|01)+p(0|10)+p(0|11))` seen.
    pub best_margin: f64,
}

/// Random local encodings of random two-path states; for each, the decoder
/// is optimized exactly for a few penalty weights.
pub fn and_table_separation_evidence(samples: usize, leak_cap: f64, seed: u64) -> SeparationEvidence {
    let results: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .flat_map_iter(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64));
            let state = random_pure_state(&mut rng, 2);
            let enc = Encoding::Product(
                (0..2).map(|_| vec![random_np_channel(&mut rng), random_np_channel(&mut rng)]).collect(),
            );
            let sigma: Vec<CMatrix> =
                [[0, 0], [0, 1], [1, 0], [1, 1]].iter().map(|a| enc.encode(&state, a).expect("two parties")).collect();
            let others: CMatrix = &sigma[1] + &sigma[2] + &sigma[3];
            [0.5, 1.0, 4.0, 20.0, 100.0]
                .into_iter()
                .map(|lambda| {
                    let x = &sigma[0] - &others * Complex64::new(lambda, 0.0);
                    let proj = eigh(&x).expect("Hermitian").projector_above(0.0);
                    let p00 = (&proj * &sigma[0]).trace().re;
                    let leak = (&proj * &others).trace().re;
                    (p00, leak)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let best_and_value = results.iter().filter(|(_, l)| *l <= leak_cap).map(|(p, _)| *p).fold(0.0, f64::max);
    let best_margin = results.iter().map(|(p, l)| p - l).fold(f64::NEG_INFINITY, f64::max);
    SeparationEvidence { samples, best_and_value, leak_cap, best_margin }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mac::{interference_i2, interference_ik};
    use crate::quantum::{random_mixed_state, random_pure_amplitudes};
    use rand::Rng;

    #[test]
    fn i2_examples() {
        let psi = OneParticleState::equal_superposition(2).unwrap();
        let (v, s) = i2_max_for_state(&psi, 0, 1).unwrap();
        assert!((v - 2.0).abs() < 1e-15);
        let mac = s.unwrap().mac(&psi).unwrap();
        assert!((interference_i2(&mac, 0, 1).unwrap() - 2.0).abs() < 1e-12);
        let diag = OneParticleState::diagonal(&[0.5, 0.5]).unwrap();
        assert_eq!(i2_max_for_state(&diag, 0, 1).unwrap(), (0.0, None));
        for theta in [0.0, 1.0, 2.5, -2.0] {
            let c = Complex64::from_polar(0.3, theta);
            let rho = CMatrix::from_row_slice(2, 2, &[Complex64::new(0.5, 0.0), c, c.conj(), Complex64::new(0.5, 0.0)]);
            let s = OneParticleState::new(rho).unwrap();
            let (v, strat) = i2_max_for_state(&s, 0, 1).unwrap();
            assert!((v - 1.2).abs() < 1e-12);
            assert!((interference_i2(&strat.unwrap().mac(&s).unwrap(), 0, 1).unwrap() - 1.2).abs() < 1e-12);
        }
        assert!(i2_max_for_state(&psi, 0, 2).is_err());
        assert!(i2_max_for_state(&psi, 1, 1).is_err());
    }

    #[test]
    fn random_strategies_stay_below_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let n = rng.random_range(2..4);
            let state = random_mixed_state(&mut rng, n, 2);
            let bound = 4.0 * state.entry(0, 1).norm();
            for _ in 0..30 {
                let enc = Encoding::Product(
                    (0..n).map(|_| vec![random_np_channel(&mut rng), random_np_channel(&mut rng)]).collect(),
                );
                let povm = random_two_outcome_povm(&mut rng, n + 1);
                let mac = generate_mac(&state, &enc, &povm).unwrap();
                assert!(interference_i2(&mac, 0, 1).unwrap() <= bound + 1e-9);
            }
            let (v, s) = i2_max_for_state(&state, 0, 1).unwrap();
            let got = interference_i2(&s.unwrap().mac(&state).unwrap(), 0, 1).unwrap();
            assert!((got - v).abs() < 1e-10);
        }
    }

    #[test]
    fn parity_strategy_reaches_higher_orders() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (n, k) in [(2, 1), (4, 2), (5, 2)] {
            let amp = random_pure_amplitudes(&mut rng, n);
            let state = OneParticleState::pure(&amp).unwrap();
            let first: Vec<usize> = (0..k).collect();
            let second: Vec<usize> = (k..2 * k).collect();
            let mac =
                pair_parity_mac(&state, &ParityStrategy { first: first.clone(), second: second.clone() }).unwrap();
            let s: Vec<usize> = (0..2 * k).collect();
            let context = vec![0; n];
            let value = interference_ik(&mac, &s, &context).unwrap();
            let want = (1u32 << (2 * k)) as f64 * state.entry(first[0], second[0]).norm();
            assert!((value - want).abs() < 1e-10, "({n},{k}): {value} vs {want}");
        }
    }

    #[test]
    fn odd_orders_vanish() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let s3 = random_pure_state(&mut rng, 3);
        assert!(verify_odd_interference_vanishes(&s3, 1, 20, 1).unwrap());
        let diag = OneParticleState::diagonal(&[0.2, 0.3, 0.5]).unwrap();
        assert!(verify_odd_interference_vanishes(&diag, 1, 10, 2).unwrap());
        assert!(max_odd_interference(&s3, 2, 1, 0).is_err());
    }

    #[test]
    fn generic_pairs_show_second_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let state = random_pure_state(&mut rng, 2);
        let mut seen = 0.0f64;
        for t in 0..20 {
            let mut r = ChaCha8Rng::seed_from_u64(t);
            let enc = random_joint_encoding(&mut r, 2, 1);
            let povm = random_two_outcome_povm(&mut r, 3);
            let mac = generate_mac(&state, &enc, &povm).unwrap();
            seen = seen.max(interference_i2(&mac, 0, 1).unwrap());
        }
        assert!(seen > 1e-3);
    }

    #[test]
    fn quantum_points_have_full_rank() {
        assert_eq!(q_nk_affine_rank(3, 1, 1e-8).unwrap(), 7);
        assert_eq!(q_nk_affine_rank(4, 1, 1e-8).unwrap(), 11);
        assert_eq!(q_nk_affine_rank(4, 2, 1e-8).unwrap(), 16);
    }

    #[test]
    fn quantum_columns_follow_the_triangular_pattern() {
        // interference coordinates of the N=3 pair points: q(∅)=1,
        // q({i})=q({j})=−1, q({i,j})=2
        let points = q_nk_points(3, 1).unwrap();
        let al = Alphabets::binary(3);
        let pair = Mac::new(al, points[5].clone()).unwrap();
        let coords = crate::mac::to_interference_coords(&pair);
        assert!((coords.q(&[]).unwrap() - 1.0).abs() < 1e-12);
        assert!((coords.q(&[0]).unwrap() + 1.0).abs() < 1e-12);
        assert!((coords.q(&[1]).unwrap() + 1.0).abs() < 1e-12);
        assert!(coords.q(&[2]).unwrap().abs() < 1e-12);
        assert!((coords.q(&[0, 1]).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn separation_harness_runs() {
        let ev = and_table_separation_evidence(50, 1e-3, 3);
        assert_eq!(ev.samples, 50);
        assert!(ev.best_and_value < 1.0);
    }
}

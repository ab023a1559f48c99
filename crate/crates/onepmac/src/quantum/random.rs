//! Samplers for property tests and Monte-Carlo harnesses.

use super::{Encoding, GroupEncoding, JointNpChannel, NpBranch, NpChannel, OneParticleState, Povm};
use crate::linalg::CMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use std::f64::consts::TAU;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Uniform (Haar) unit vector.
pub fn random_pure_amplitudes<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|c| c / norm).collect()
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> OneParticleState {
    OneParticleState::pure(&random_pure_amplitudes(rng, n)).expect("unit vector")
}

/// `G G† / Tr` with `G` an `n × rank` Gaussian matrix.
pub fn random_mixed_state<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> OneParticleState {
    let g = CMatrix::from_fn(n, rank, |_, _| gaussian(rng));
    let rho = &g * g.adjoint();
    let tr = rho.trace().re;
    let mut rho = rho / Complex64::new(tr, 0.0);
    for i in 0..n {
        rho[(i, i)].im = 0.0;
    }
    OneParticleState::new(rho).expect("Gaussian Gram matrix")
}

/// One to three damping branches with Dirichlet-uniform weights (normalized
/// exponentials), `y = r e^{iθ}` with `r` uniform and a uniformly phased `z`.
pub fn random_np_channel<R: Rng + ?Sized>(rng: &mut R) -> NpChannel {
    let k = rng.random_range(1..=3);
    let raw: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    let branches = raw
        .iter()
        .map(|w| {
            let r: f64 = rng.random();
            NpBranch {
                weight: w / total,
                y: Complex64::from_polar(r, rng.random_range(0.0..TAU)),
                z: Complex64::from_polar((1.0 - r * r).sqrt(), rng.random_range(0.0..TAU)),
            }
        })
        .collect();
    NpChannel::new(branches).expect("normalized by construction")
}

fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = nalgebra::DVector::from_fn(d, |i, _| {
        let x = r[(i, i)];
        if x.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x / x.norm()
        }
    });
    q * CMatrix::from_diagonal(&phases)
}

/// Random group channel: a mixture of one to three channels, each built
/// from a Haar unitary on `2|S|` modes whose left half splits into a
/// transmitted block and a loss block.
pub fn random_joint_channel<R: Rng + ?Sized>(rng: &mut R, parties: Vec<usize>) -> JointNpChannel {
    let m = parties.len();
    let d = m + 1;
    let mixes = rng.random_range(1..=3);
    let raw: Vec<f64> = (0..mixes).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    let mut kraus = Vec::new();
    for w in raw {
        let s = Complex64::new((w / total).sqrt(), 0.0);
        let u = haar_unitary(rng, 2 * m);
        let mut keep = CMatrix::zeros(d, d);
        keep[(0, 0)] = Complex64::from_polar(1.0, rng.random_range(0.0..TAU));
        for r in 0..m {
            for c in 0..m {
                keep[(r + 1, c + 1)] = u[(r, c)];
            }
        }
        kraus.push(keep * s);
        for lost in 0..m {
            let mut l = CMatrix::zeros(d, d);
            for c in 0..m {
                l[(0, c + 1)] = u[(m + lost, c)];
            }
            kraus.push(l * s);
        }
    }
    JointNpChannel::new(parties, kraus).expect("isometry columns are complete")
}

/// Random partition into groups of at most `k` parties, each with binary
/// inputs and an independent random channel per local input.
pub fn random_joint_encoding<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Encoding {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut groups = Vec::new();
    let mut rest = &order[..];
    while !rest.is_empty() {
        let size = rng.random_range(1..=k.min(rest.len()));
        let (head, tail) = rest.split_at(size);
        rest = tail;
        let parties = head.to_vec();
        let channels = (0..1usize << size).map(|_| random_joint_channel(rng, parties.clone())).collect();
        groups.push(GroupEncoding { input_sizes: vec![2; size], parties, channels });
    }
    Encoding::Joint(groups)
}

/// `{E, I − E}` with `E = U diag(u) U†`, `u` uniform in `[0, 1]`.
pub fn random_two_outcome_povm<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Povm {
    let u = haar_unitary(rng, d);
    let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(d, |_, _| Complex64::new(rng.random(), 0.0)));
    let mut e = &u * diag * u.adjoint();
    for i in 0..d {
        e[(i, i)].im = 0.0;
        for j in i + 1..d {
            e[(j, i)] = e[(i, j)].conj();
        }
    }
    Povm::two_outcome(e).expect("eigenvalues in [0, 1]")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samplers_produce_valid_objects() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..5 {
            let s = random_mixed_state(&mut rng, n, 2);
            assert_eq!(s.dim(), n);
            let u = haar_unitary(&mut rng, n);
            assert!((u.adjoint() * &u - CMatrix::identity(n, n)).map(|c| c.norm()).max() < 1e-12);
            let _ = random_two_outcome_povm(&mut rng, n + 1);
            let parties: Vec<usize> = (0..n).collect();
            let _ = random_joint_channel(&mut rng, parties);
        }
        match random_joint_encoding(&mut rng, 5, 2) {
            Encoding::Joint(groups) => {
                assert!(groups.iter().all(|g| g.parties.len() <= 2));
                assert_eq!(groups.iter().map(|g| g.parties.len()).sum::<usize>(), 5);
            }
            Encoding::Product(_) => unreachable!(),
        }
    }
}

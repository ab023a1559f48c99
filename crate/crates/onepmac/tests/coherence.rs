use num_complex::Complex64;
use onepmac::coherence::{
    comparison_matrix_test, counterexample_state, ensemble_game_threshold, ensemble_game_value, phase_scan_witness,
    pure_state_witness,
};
use onepmac::linalg::CMatrix;
use onepmac::quantum::{random_pure_amplitudes, OneParticleState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn uniform_qutrit_scan_values() {
    let scan = phase_scan_witness(&OneParticleState::equal_superposition(3).unwrap(), 200).unwrap();
    println!("{:?}", scan);
    let want = [3.6667, 3.15, 4.6667];
    for c in 0..3 {
        assert!((scan.maxima[c] - want[c]).abs() < 0.01, "class {c}: {}", scan.maxima[c]);
    }
}

#[test]
fn counterexample_passes_comparison_but_not_phase_scan() {
    let state = counterexample_state();
    let (t, flag) = comparison_matrix_test(&state).unwrap();
    assert!(flag, "trace norm {t}");
    let scan = phase_scan_witness(&state, 200).unwrap();
    println!("{:?}", scan);
    for c in 0..3 {
        assert!(scan.maxima[c] <= scan.bounds[c] + 1e-6, "class {c}: {}", scan.maxima[c]);
    }
}

fn with_rank<R: Rng>(rng: &mut R, n: usize, rank: usize) -> Vec<Complex64> {
    let mut support: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        support.swap(i, rng.random_range(0..=i));
    }
    let small = random_pure_amplitudes(rng, rank);
    let mut amp = vec![Complex64::new(0.0, 0.0); n];
    for (s, a) in support.iter().zip(small) {
        amp[*s] = a;
    }
    amp
}

#[test]
fn witness_separates_coherence_ranks() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..500 {
        let k = rng.random_range(1..4);
        let n = rng.random_range(k + 1..k + 3);
        let rank = rng.random_range(1..=k);
        assert_eq!(pure_state_witness(&with_rank(&mut rng, n, rank), k).unwrap().delta, 0.0);
    }
    for _ in 0..500 {
        let k = rng.random_range(1..4);
        let n = rng.random_range(k + 1..k + 3);
        assert!(pure_state_witness(&with_rank(&mut rng, n, k + 1), k).unwrap().delta > 0.0);
    }
}

#[test]
fn incoherent_states_never_win_the_game() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..1000 {
        let n = rng.random_range(2..6);
        let k = rng.random_range(1..n);
        let w: Vec<f64> = (0..=n).map(|_| rng.random::<f64>()).collect();
        let total: f64 = w.iter().sum();
        let rho = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n + 1,
            w.iter().map(|x| Complex64::new(x / total, 0.0)),
        ));
        assert!(ensemble_game_value(&rho, k).unwrap() <= ensemble_game_threshold(k) + 1e-10);
    }
}

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::Zero;
use onepmac::mac::{
    enumerate_vertices, fingerprint_inequality, from_interference_coords, interference_i2, is_separable,
    to_interference_coords, Alphabets, FingerprintLabeling, Mac,
};
use proptest::prelude::*;

fn alphabets() -> impl Strategy<Value = Alphabets> {
    (2usize..=4, 2usize..=3)
        .prop_flat_map(|(n, out)| (prop::collection::vec(2usize..=3, n), Just(out)))
        .prop_map(|(inputs, out)| Alphabets::new(inputs, out).unwrap())
}

/// Column-normalized positive weights.
fn stochastic(raw: &[f64], columns: usize, outputs: usize) -> Vec<f64> {
    let mut p = raw.to_vec();
    for a in 0..columns {
        let total: f64 = (0..outputs).map(|b| raw[b * columns + a]).sum();
        for b in 0..outputs {
            p[b * columns + a] /= total;
        }
    }
    p
}

fn random_mac() -> impl Strategy<Value = Mac<f64>> {
    alphabets()
        .prop_flat_map(|al| {
            let len = al.len();
            (Just(al), prop::collection::vec(0.01f64..1.0, len))
        })
        .prop_map(|(al, raw)| {
            let p = stochastic(&raw, al.input_count(), al.output_size());
            Mac::new(al, p).unwrap()
        })
}

/// `Σ_i w_i g_i(b|a_i)` with random weights and local channels.
fn separable_mac() -> impl Strategy<Value = Mac<f64>> {
    alphabets()
        .prop_flat_map(|al| {
            let n = al.parties();
            let locals: Vec<_> =
                (0..n).map(|i| prop::collection::vec(0.01f64..1.0, al.input_size(i) * al.output_size())).collect();
            (Just(al), prop::collection::vec(0.01f64..1.0, n), locals)
        })
        .prop_map(|(al, w, raw)| {
            let total: f64 = w.iter().sum();
            let out = al.output_size();
            let g: Vec<Vec<f64>> = raw.iter().enumerate().map(|(i, r)| stochastic(r, al.input_size(i), out)).collect();
            Mac::from_fn(al.clone(), |b, a| {
                (0..al.parties()).map(|i| w[i] / total * g[i][b * al.input_size(i) + a[i]]).sum()
            })
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn separable_macs_have_no_pair_interference(mac in separable_mac()) {
        prop_assert!(is_separable(&mac));
        let n = mac.alphabets().parties();
        for (i, j) in (0..n).tuple_combinations() {
            prop_assert!(interference_i2(&mac, i, j).unwrap() < 1e-10);
        }
    }

    #[test]
    fn coordinate_round_trip(mac in random_mac()) {
        let back = from_interference_coords(&to_interference_coords(&mac)).unwrap();
        let dev = mac.probs().iter().zip(back.probs()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(dev < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// In a MAC without pair interference, turning on the first `L` inputs
    /// adds up the single-party changes.
    #[test]
    fn superposition_identity(mac in separable_mac()) {
        let al = mac.alphabets().clone();
        let n = al.parties();
        for l in 1..=n {
            for b in 0..al.output_size() {
                let mut many = vec![0; n];
                many[..l].fill(1);
                let lhs = *mac.prob(b, &many);
                let base = *mac.prob(b, &vec![0; n]);
                let singles: f64 = (0..l).map(|i| {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    *mac.prob(b, &e)
                }).sum();
                prop_assert!((lhs - (-(l as f64 - 1.0) * base + singles)).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn vertex_coordinates_vanish_above_locality() {
    for n in 1..=4 {
        for k in 1..=n {
            let al = Alphabets::binary(n);
            for v in enumerate_vertices::<BigRational>(k, &al).unwrap() {
                let coords = to_interference_coords(&v);
                for (_, support, q) in coords.entries() {
                    if support.len() > k {
                        assert!(q.is_zero(), "N={n} K={k} support {support:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn fingerprint_bounds_hold_on_vertices() {
    for n in 2..=4 {
        for k in 1..n {
            let al = Alphabets::binary(n);
            let vertices = enumerate_vertices::<BigRational>(k, &al).unwrap();
            for subset in (0..n).combinations(k + 1) {
                let ineq =
                    fingerprint_inequality::<BigRational>(&al, k, &subset, &FingerprintLabeling::standard(n)).unwrap();
                let mut saturated = false;
                for v in &vertices {
                    let value = ineq.eval(v).unwrap();
                    assert!(value <= *ineq.bound());
                    saturated |= value == *ineq.bound();
                }
                assert!(saturated);
            }
        }
    }
}

#[test]
fn quantum_pair_strategy_is_not_separable() {
    use onepmac::quantum::{i2_max_for_state, OneParticleState};
    let psi = OneParticleState::equal_superposition(2).unwrap();
    let (value, strategy) = i2_max_for_state(&psi, 0, 1).unwrap();
    let mac = strategy.unwrap().mac(&psi).unwrap();
    assert!(!is_separable(&mac));
    assert!((interference_i2(&mac, 0, 1).unwrap() - value).abs() < 1e-12);
}

/// `Σ_i w_i Σ_m d(b|m) q_i(m|a_i)` over two parties with messages
/// `m ∈ {vacuum, particle}` and one shared decoder.
fn one_particle_mac(al: &Alphabets, w: [f64; 2], decoder: [[f64; 3]; 3], q: [[[f64; 2]; 2]; 2]) -> Mac<f64> {
    // decoder[m][b] with m = 0 vacuum, 1 + i particle from party i
    Mac::from_fn(al.clone(), |b, a| {
        (0..2).map(|i| w[i] * (q[i][a[i]][0] * decoder[0][b] + q[i][a[i]][1] * decoder[1 + i][b])).sum()
    })
    .unwrap()
}

#[test]
fn non_convexity_fixtures_are_separable() {
    let al = Alphabets::uniform(2, 2, 3).unwrap();
    // first party alone: input 0 → output 0 via vacuum, input 1 → output 1 via particle
    let first = one_particle_mac(
        &al,
        [1.0, 0.0],
        [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        [[[1.0, 0.0], [0.0, 1.0]], [[1.0, 0.0], [1.0, 0.0]]],
    );
    // second party alone: input 0 → uniform over {0, 1}, input 1 → output 2
    let second = one_particle_mac(
        &al,
        [0.0, 1.0],
        [[0.5, 0.5, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        [[[1.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 1.0]]],
    );
    for x in 0..2 {
        assert_eq!(*first.prob(0, &[0, x]), 1.0);
        assert_eq!(*first.prob(1, &[1, x]), 1.0);
        assert_eq!(*second.prob(0, &[x, 0]), 0.5);
        assert_eq!(*second.prob(1, &[x, 0]), 0.5);
        assert_eq!(*second.prob(2, &[x, 1]), 1.0);
    }
    for lambda in [0.25, 0.5, 0.75] {
        let mix = Mac::mixture(&[(lambda, &first), (1.0 - lambda, &second)]).unwrap();
        assert!(is_separable(&mix));
        // the zero pattern that forces the decomposition back onto the endpoints
        for (b, a) in [(0, [1, 1]), (1, [0, 1]), (2, [0, 0]), (2, [1, 0])] {
            assert_eq!(*mix.prob(b, &a), 0.0);
        }
    }
}

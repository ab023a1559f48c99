//! One PASS/FAIL line per acceptance criterion. Exits nonzero on any failure.

use itertools::Itertools;
use num_complex::Complex64;
use num_traits::One;
use onepmac::coherence::{comparison_matrix_test, counterexample_state, phase_scan_witness, pure_state_witness};
use onepmac::mac::{interference_i2, is_separable, max_interference_ik, Alphabets, LinearInequality, Mac};
use onepmac::polytope::{canonical_facet, census, vertex_affine_dimension, RationalPolytope, SymmetryGroup};
use onepmac::quantum::{
    i2_max_for_state, max_odd_interference, pair_parity_mac, q_nk_affine_rank, random_mixed_state,
    random_pure_amplitudes, random_pure_state, OneParticleState, ParityStrategy,
};
use onepmac::Rational;
use onepmac_cli::{cmd_census, cmd_violate, Format, RunConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

type Check = Result<String, String>;

fn config() -> RunConfig {
    RunConfig { tol: 1e-9, grid: 200, seed: 0, format: Format::Json, force: false }
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> OneParticleState {
    if rng.random_bool(0.5) {
        random_pure_state(rng, n)
    } else {
        let rank = rng.random_range(1..=n);
        random_mixed_state(rng, n, rank)
    }
}

fn violation_table() -> Check {
    let reported = [1.0, 0.6667, 0.1250, 0.0333, 0.0139];
    let mut worst = Duration::ZERO;
    for (n, want) in (2..=6).zip(reported) {
        let start = Instant::now();
        let report = cmd_violate(n, 1000, &config()).map_err(|e| e.to_string())?;
        worst = worst.max(start.elapsed());
        let delta = report.json["report"]["delta"].as_f64().unwrap();
        let closed = report.json["closed_form_delta"].as_f64().unwrap();
        ensure((delta - want).abs() < 5e-5, format!("N={n}: δ={delta} vs reported {want}"))?;
        ensure((delta - closed).abs() < 1e-9, format!("N={n}: δ={delta} vs closed form {closed}"))?;
        ensure(report.certified, format!("N={n}: random phases beat the optimum"))?;
    }
    ensure(worst < Duration::from_secs(1), format!("slowest N took {worst:?}"))?;
    Ok(format!("δ matches for N=2..6, slowest {worst:.2?}"))
}

fn known_facet(al: &Alphabets, terms: &[(usize, [usize; 3])], bound: i64) -> LinearInequality<Rational> {
    let terms: Vec<(Rational, usize, Vec<usize>)> =
        terms.iter().map(|(b, a)| (Rational::one(), *b, a.to_vec())).collect();
    LinearInequality::from_terms(al.clone(), &terms, Rational::from_integer(bound.into())).unwrap()
}

fn census_c32() -> Check {
    let start = Instant::now();
    let report = cmd_census(3, 2, &config()).map_err(|e| e.to_string())?;
    let s = &report.json["summary"];
    let counts = [&s["vertices"], &s["dim"], &s["facets"], &s["positivity"], &s["nontrivial_classes"]]
        .map(|v| v.as_u64().unwrap());
    ensure(counts == [38, 7, 96, 16, 3], format!("counts {counts:?}"))?;

    let al = Alphabets::binary(3);
    let c = census(2, &al).map_err(|e| e.to_string())?;
    let hull = RationalPolytope::from_vertices(c.vertices.clone()).hull().map_err(|e| e.to_string())?;
    let group = SymmetryGroup::for_alphabets(&al);
    let known = [
        known_facet(&al, &[(0, [0, 0, 0]), (1, [0, 0, 1]), (1, [0, 1, 0]), (1, [1, 0, 0])], 3),
        known_facet(&al, &[(0, [0, 0, 0]), (1, [0, 0, 1]), (1, [0, 1, 0]), (0, [1, 0, 1])], 3),
        known_facet(&al, &[(0, [0, 0, 0]), (1, [0, 0, 1]), (1, [0, 1, 0]), (1, [0, 1, 1]), (0, [1, 1, 1])], 4),
    ];
    let reps: Vec<_> =
        known.iter().map(|ineq| group.orbit(&canonical_facet(&hull, ineq.coeffs(), ineq.bound()))[0].clone()).collect();
    let mut classes: Vec<_> = c.nontrivial_classes().map(|x| x.representative.clone()).collect();
    ensure(
        reps.iter().collect::<std::collections::HashSet<_>>().len() == 3,
        "known inequalities fall into fewer than three classes",
    )?;
    for r in &reps {
        ensure(classes.contains(r), "a known inequality is not a facet class")?;
    }
    classes.retain(|x| !reps.contains(x));
    ensure(classes.is_empty(), "census has an unexpected class")?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("38/7/96/16/3 with the three known classes, {elapsed:.2?}"))
}

fn dimensions() -> Check {
    for n in 1..=5 {
        for k in 1..=n {
            let got = vertex_affine_dimension(k, &Alphabets::binary(n)).map_err(|e| e.to_string())?;
            let want: usize = (0..=k).map(|j| binomial(n, j)).sum();
            ensure(got == want, format!("N={n} K={k}: {got} vs {want}"))?;
        }
    }
    for (a, b) in [(3, 2), (2, 3)] {
        for k in 1..=2 {
            let al = Alphabets::uniform(2, a, b).map_err(|e| e.to_string())?;
            let got = vertex_affine_dimension(k, &al).map_err(|e| e.to_string())?;
            let want = (b - 1) * (0..=k).map(|j| (a - 1).pow(j as u32) * binomial(2, j)).sum::<usize>();
            ensure(got == want, format!("(2,{a},{b}) K={k}: {got} vs {want}"))?;
        }
    }
    Ok("binary N<=5 and (2,3,2), (2,2,3) match".into())
}

fn fingerprint_values() -> Check {
    let scan =
        phase_scan_witness(&OneParticleState::equal_superposition(3).unwrap(), 200).map_err(|e| e.to_string())?;
    let want = [3.6667, 3.15, 4.6667];
    for c in 0..3 {
        ensure((scan.maxima[c] - want[c]).abs() <= 0.01, format!("class {c}: {} vs {}", scan.maxima[c], want[c]))?;
    }
    Ok(format!("maxima {:.4}, {:.4}, {:.4}", scan.maxima[0], scan.maxima[1], scan.maxima[2]))
}

fn separability() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for t in 0..1000 {
        let n = rng.random_range(2..=4);
        let al = Alphabets::binary(n);
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
        let total: f64 = w.iter().sum();
        let g: Vec<[f64; 2]> = (0..n).map(|_| [rng.random(), rng.random()]).collect();
        let mac = Mac::<f64>::from_fn(al, |b, a| {
            (0..n)
                .map(|i| {
                    let p0 = g[i][a[i]];
                    w[i] / total * if b == 0 { p0 } else { 1.0 - p0 }
                })
                .sum::<f64>()
        })
        .map_err(|e| e.to_string())?;
        ensure(is_separable(&mac), format!("separable sample {t} rejected"))?;
    }
    let mut quantum = 0;
    while quantum < 1000 {
        let n = rng.random_range(2..=4);
        let state = random_state(&mut rng, n);
        let Some((i, j)) = (0..n)
            .tuple_combinations()
            .max_by(|&(a, b), &(c, d)| state.entry(a, b).norm().total_cmp(&state.entry(c, d).norm()))
        else {
            continue;
        };
        let mag = state.entry(i, j).norm();
        if mag < 0.1 {
            continue;
        }
        quantum += 1;
        let (_, strategy) = i2_max_for_state(&state, i, j).map_err(|e| e.to_string())?;
        let mac = strategy.unwrap().mac(&state).map_err(|e| e.to_string())?;
        ensure(!is_separable(&mac), "quantum MAC accepted as separable")?;
        let i2 = interference_i2(&mac, i, j).map_err(|e| e.to_string())?;
        ensure(i2 >= 4.0 * 0.1 - 1e-9 && (i2 - 4.0 * mag).abs() < 1e-9, format!("I_2 = {i2} at |ρ_ij| = {mag}"))?;
    }
    Ok("1000 separable pass, 1000 quantum fail".into())
}

fn odd_interference() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for (n, k) in [(3, 1), (5, 2)] {
        for trial in 0..4 {
            let state = random_state(&mut rng, n);
            worst = worst.max(max_odd_interference(&state, k, 500, 100 * trial).map_err(|e| e.to_string())?);
        }
        ensure(worst < 1e-9, format!("({n},{k}): |I_{}| = {worst:e}", 2 * k + 1))?;
        for _ in 0..50 {
            let state = random_state(&mut rng, n);
            let strategy = ParityStrategy { first: (0..k).collect(), second: (k..2 * k).collect() };
            let mac = pair_parity_mac(&state, &strategy).map_err(|e| e.to_string())?;
            let got = max_interference_ik(&mac, &(0..2 * k).collect::<Vec<_>>()).map_err(|e| e.to_string())?;
            let want = (1u32 << (2 * k)) as f64 * state.entry(0, k).norm();
            ensure((got - want).abs() < 1e-10, format!("({n},{k}): I_{} = {got} vs {want}", 2 * k))?;
        }
    }
    Ok(format!("max odd interference {worst:.1e}, parity strategy exact"))
}

fn with_rank(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> Vec<Complex64> {
    let mut support: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        support.swap(i, rng.random_range(0..=i));
    }
    let mut amp = vec![Complex64::new(0.0, 0.0); n];
    for (s, a) in support.iter().zip(random_pure_amplitudes(rng, rank)) {
        amp[*s] = a;
    }
    amp
}

fn coherence() -> Check {
    let (t, _) =
        comparison_matrix_test(&OneParticleState::equal_superposition(3).unwrap()).map_err(|e| e.to_string())?;
    ensure((t - 5.0 / 3.0).abs() < 1e-10, format!("maximally coherent: {t}"))?;
    let state = counterexample_state();
    let (tc, flag) = comparison_matrix_test(&state).map_err(|e| e.to_string())?;
    ensure(flag && tc > 1.0, format!("counterexample test {tc}"))?;
    let scan = phase_scan_witness(&state, 200).map_err(|e| e.to_string())?;
    for c in 0..3 {
        ensure(scan.maxima[c] <= scan.bounds[c] + 1e-6, format!("counterexample class {c}: {}", scan.maxima[c]))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..500 {
        let k = rng.random_range(1..4);
        let n = rng.random_range(k + 1..k + 3);
        let rank = rng.random_range(1..=k);
        let d = pure_state_witness(&with_rank(&mut rng, n, rank), k).map_err(|e| e.to_string())?.delta;
        ensure(d == 0.0, format!("crk {rank} <= K={k} gave δ'={d}"))?;
    }
    for _ in 0..500 {
        let k = rng.random_range(1..4);
        let n = rng.random_range(k + 1..k + 3);
        let d = pure_state_witness(&with_rank(&mut rng, n, k + 1), k).map_err(|e| e.to_string())?.delta;
        ensure(d > 0.0, format!("crk {} at K={k} gave δ'=0", k + 1))?;
    }
    Ok(format!("5/3 exact, counterexample {tc:.4} > 1 without scan violation, 500/500 witness"))
}

fn quantum_dimension() -> Check {
    for (n, want) in [(3, 7), (4, 11)] {
        let got = q_nk_affine_rank(n, 1, 1e-8).map_err(|e| e.to_string())?;
        ensure(got == want, format!("N={n}: rank {got} vs {want}"))?;
    }
    Ok("ranks 7 and 11".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("violation table", violation_table),
        ("C_{3,2} census", census_c32),
        ("dimension formulas", dimensions),
        ("fingerprinting LHS values", fingerprint_values),
        ("separability suite", separability),
        ("odd interference suite", odd_interference),
        ("coherence witnesses", coherence),
        ("Q_{N,1} dimension", quantum_dimension),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Subcommands of the `onepmac` binary. Each returns a [`Report`] that the
//! binary renders in the requested format; errors map to exit code 2.

use clap::ValueEnum;
use num_complex::Complex64;
use onepmac::coherence::{
    comparison_matrix_test, counterexample_state, phase_scan_witness, scan_inequalities, CoherenceError,
    CoherenceReport,
};
use onepmac::io::{from_json_str, FormatError, InequalityJson, MacJson};
use onepmac::linalg::eigh;
use onepmac::mac::enumerate_vertices;
use onepmac::mac::{interference_i2, max_interference_ik, Alphabets, Mac, MacError};
use onepmac::polytope::{census, lp_membership, to_points, Certificate, PolytopeError};
use onepmac::quantum::{max_violation, OneParticleState, QuantumError, StateJson, ViolationReport};
use onepmac::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::f64::consts::TAU;
use std::path::Path;
use thiserror::Error;

/// Largest party count `census` runs without `--force`.
pub const CENSUS_GUARD: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tol: f64,
    pub grid: usize,
    pub seed: u64,
    pub format: Format,
    pub force: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { tol: 1e-9, grid: 200, seed: 0, format: Format::Text, force: false }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0) {
            return Err(CliError::Usage(format!("--tol must be positive, got {}", self.tol)));
        }
        if self.grid < 8 {
            return Err(CliError::Usage(format!("--grid must be at least 8, got {}", self.grid)));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: FormatError },
    #[error(transparent)]
    Mac(#[from] MacError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Coherence(#[from] CoherenceError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Result of a subcommand. `certified` is false when the claim being
/// checked does not hold (exit code 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub certified: bool,
    pub text: String,
    pub json: Value,
    pub csv: Vec<Vec<String>>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.certified {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("JSON value"),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in &self.csv {
                    w.write_record(row).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("flush")).expect("UTF-8").trim_end().to_string()
            }
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.display().to_string(), source })
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    from_json_str(&read(path)?).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

pub fn load_mac(path: &Path, tol: f64) -> Result<Mac<f64>, CliError> {
    let json: MacJson = parse(path)?;
    json.to_mac(tol).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

pub fn load_state(path: &Path) -> Result<OneParticleState, CliError> {
    let json: StateJson = parse(path)?;
    Ok(OneParticleState::from_json(&json)?)
}

fn fmt_rational(x: &Rational) -> String {
    x.to_string()
}

/// `Σ c·p(b|a) ≤ bound` with inputs written as digit strings.
pub fn render_inequality(al: &Alphabets, coeffs: &[Rational], bound: &Rational) -> String {
    use num_traits::{One, Signed, Zero};
    let mut out = String::new();
    for (idx, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (b, a) = al.split_coord(idx);
        let inputs: String = al.input_tuple(a).iter().map(|d| d.to_string()).collect();
        let sign = if c.is_negative() {
            "-"
        } else if out.is_empty() {
            ""
        } else {
            "+"
        };
        let mag = c.abs();
        let coef = if mag.is_one() { String::new() } else { format!("{}·", fmt_rational(&mag)) };
        out.push_str(&format!("{sign}{coef}p({b}|{inputs})"));
    }
    if out.is_empty() {
        out.push('0');
    }
    format!("{out} <= {}", fmt_rational(bound))
}

/// Vertices, dimension, facets and facet classes of the `k`-local polytope
/// over `n` binary parties.
pub fn cmd_census(n: usize, k: usize, cfg: &RunConfig) -> Result<Report, CliError> {
    if n > CENSUS_GUARD && !cfg.force {
        return Err(CliError::Usage(format!("census with N = {n} > {CENSUS_GUARD} needs --force")));
    }
    if n == 0 || k == 0 || k > n {
        return Err(CliError::Usage(format!("need 1 <= K <= N, got N = {n}, K = {k}")));
    }
    let al = Alphabets::binary(n);
    let c = census(k, &al)?;
    let s = c.summary();
    let nontrivial = s.nontrivial_classes;
    let mut text = format!(
        "{} vertices, dim {}, {} facets, {} positivity, {} nontrivial classes",
        s.vertices, s.dim, s.facets, s.positivity, nontrivial
    );
    if nontrivial == 0 {
        text.push_str(" (positivity-only facets)");
    }
    let mut csv = vec![vec!["representative".into(), "orbit_size".into(), "is_positivity".into()]];
    let mut classes = Vec::new();
    for class in &c.classes {
        let ineq = render_inequality(&al, &class.display.normal, &class.display.offset);
        if !class.positivity {
            text.push_str(&format!("\n  [{}] {}", class.size, ineq));
        }
        csv.push(vec![ineq.clone(), class.size.to_string(), class.positivity.to_string()]);
        let json_ineq = InequalityJson::from(&class.display.to_inequality(&al)?);
        classes.push(json!({
            "representative": ineq,
            "inequality": json_ineq,
            "size": class.size,
            "positivity": class.positivity,
        }));
    }
    let json = json!({ "summary": s, "classes": classes });
    Ok(Report { certified: true, text, json, csv })
}

#[derive(Debug, Clone, Serialize)]
struct ViolateJson {
    report: ViolationReport,
    closed_form_delta: f64,
    optimal_phase: f64,
    random_phase_samples: usize,
    random_phase_max_delta: f64,
}

/// Optimal fingerprinting violation of the equal superposition over `n`
/// paths, with a seeded random-phase cross-check.
pub fn cmd_violate(n: usize, samples: usize, cfg: &RunConfig) -> Result<Report, CliError> {
    if n < 2 {
        return Err(CliError::Usage(format!("violate needs N >= 2, got {n}")));
    }
    let report = ViolationReport::optimal(n);
    let (closed, phi) = max_violation(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let random_max = (0..samples)
        .map(|_| {
            let phases: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
            ViolationReport::for_phases(&phases).delta
        })
        .fold(0.0, f64::max);
    let certified = (report.delta - closed).abs() < 1e-9 && random_max <= closed + 1e-9;
    let text = format!(
        "N={n} δ={:.4} (closed form {:.10}) φ*={:.6} LHS={:.6} bound={n}\nrandom phases: {samples} samples, max δ {:.6}",
        report.delta, closed, phi, report.lhs, random_max
    );
    let csv = vec![
        vec!["N".into(), "delta".into(), "phi".into()],
        vec![n.to_string(), format!("{:.10}", report.delta), format!("{phi:.10}")],
    ];
    let body = ViolateJson {
        report,
        closed_form_delta: closed,
        optimal_phase: phi,
        random_phase_samples: samples,
        random_phase_max_delta: random_max,
    };
    Ok(Report { certified, text, json: serde_json::to_value(body).expect("serializable"), csv })
}

fn largest_interference(mac: &Mac<f64>, order: usize) -> Result<Option<(Vec<usize>, f64)>, CliError> {
    use itertools::Itertools;
    let n = mac.alphabets().parties();
    if order > n || !mac.alphabets().is_binary() {
        return Ok(None);
    }
    let mut best: Option<(Vec<usize>, f64)> = None;
    for s in (0..n).combinations(order) {
        let v = max_interference_ik(mac, &s)?.abs();
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((s, v));
        }
    }
    Ok(best)
}

/// Exact membership of a MAC in the `k`-local polytope.
pub fn cmd_membership(path: &Path, k: usize, cfg: &RunConfig) -> Result<Report, CliError> {
    let mac = load_mac(path, cfg.tol)?;
    let al = mac.alphabets().clone();
    if k == 0 || k > al.parties() {
        return Err(CliError::Usage(format!("need 1 <= K <= N = {}, got K = {k}", al.parties())));
    }
    if al.parties() > CENSUS_GUARD + 1 && !cfg.force {
        return Err(CliError::Usage(format!("membership with N = {} needs --force", al.parties())));
    }
    let exact = mac.to_rational(cfg.tol)?;
    let vertices = to_points(&enumerate_vertices::<Rational>(k, &al)?);
    let result = lp_membership(exact.probs(), &vertices)?;
    let evidence = largest_interference(&mac, k + 1)?;
    let mut text = format!("member of C_{{{},{}}}: {}", al.parties(), k, result.member);
    let mut json = json!({ "member": result.member, "parties": al.parties(), "locality": k });
    match &result.certificate {
        Certificate::Weights(w) => {
            let support: Vec<Value> = w
                .iter()
                .enumerate()
                .filter(|(_, x)| !num_traits::Zero::is_zero(*x))
                .map(|(i, x)| json!({ "vertex": i, "weight": fmt_rational(x) }))
                .collect();
            text.push_str(&format!("\nconvex combination of {} vertices", support.len()));
            json["weights"] = Value::Array(support);
        }
        Certificate::Separator(f) => {
            let ineq = render_inequality(&al, &f.normal, &f.offset);
            text.push_str(&format!("\nseparating inequality: {ineq}"));
            json["separator"] = json!({ "inequality": ineq, "json": InequalityJson::from(&f.to_inequality(&al)?) });
        }
    }
    if let Some((s, v)) = evidence {
        let label: Vec<usize> = s.iter().map(|p| p + 1).collect();
        text.push_str(&format!("\nlargest |I_{}| = {v:.6} on parties {label:?}", k + 1));
        json["interference"] = json!({ "order": k + 1, "parties": label, "value": v });
    }
    let csv = vec![vec!["member".into()], vec![result.member.to_string()]];
    Ok(Report { certified: result.member, text, json, csv })
}

fn state_hash(state: &OneParticleState) -> String {
    let canonical = serde_json::to_string(&state.to_json()).expect("serializable");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

/// Amplitudes when the state is pure to within `tol`.
fn pure_amplitudes(state: &OneParticleState, tol: f64) -> Result<Option<Vec<Complex64>>, CliError> {
    let eig = eigh(state.matrix()).map_err(QuantumError::from)?;
    let top = eig.values.len() - 1;
    if (eig.values[top] - 1.0).abs() > tol {
        return Ok(None);
    }
    Ok(Some(eig.vectors.column(top).iter().copied().collect()))
}

/// Coherence certificate for a state file.
pub fn cmd_witness(path: &Path, k: usize, cfg: &RunConfig) -> Result<Report, CliError> {
    let state = load_state(path)?;
    let report = match pure_amplitudes(&state, cfg.tol)? {
        Some(amp) => CoherenceReport::for_pure(&amp, k, cfg.tol)?,
        None => CoherenceReport::for_state(&state, k)?,
    };
    let certified = report.witness_level > 0;
    let hash = state_hash(&state);
    let verdict = if certified {
        format!("{}-level coherence certified, δ={:.4}", k + 1, report.fingerprint_delta)
    } else {
        format!("{}-level coherence not certified, δ=0", k + 1)
    };
    let crk = report.crk.map_or("n/a (mixed)".to_string(), |c| c.to_string());
    let text = format!(
        "{verdict}\nstate sha256: {hash}\ndim: {}\ncoherence rank: {crk}\nfingerprint LHS: {:.6} (bound {})\ncomparison-matrix trace norm: {:.6}\ntolerance: {:e}",
        state.dim(),
        report.fingerprint_lhs,
        report.bound,
        report.comparison_trace_norm,
        cfg.tol
    );
    let json = json!({
        "state_sha256": hash,
        "dim": state.dim(),
        "k": k,
        "tolerance": cfg.tol,
        "report": report,
    });
    let csv = vec![
        vec!["sha256".into(), "k".into(), "delta".into(), "trace_norm".into(), "level".into()],
        vec![
            hash,
            k.to_string(),
            format!("{:.10}", report.fingerprint_delta),
            format!("{:.10}", report.comparison_trace_norm),
            report.witness_level.to_string(),
        ],
    ];
    Ok(Report { certified, text, json, csv })
}

/// Interference of a set of parties (1-based), maximized over contexts.
pub fn cmd_interference(path: &Path, parties: &[usize], cfg: &RunConfig) -> Result<Report, CliError> {
    let mac = load_mac(path, cfg.tol)?;
    let n = mac.alphabets().parties();
    if parties.is_empty() {
        return Err(CliError::Usage("give at least one party".into()));
    }
    let s: Vec<usize> = parties
        .iter()
        .map(|&p| if p == 0 || p > n { Err(CliError::Usage(format!("party {p} outside 1..={n}"))) } else { Ok(p - 1) })
        .collect::<Result<_, _>>()?;
    let value = max_interference_ik(&mac, &s)?;
    let pair = if s.len() == 2 { Some(interference_i2(&mac, s[0], s[1])?) } else { None };
    let mut text = format!("max |I_{}| over contexts on parties {parties:?}: {value:.10}", s.len());
    if let Some(p) = pair {
        text.push_str(&format!("\nI_2 (max over outputs, inputs and contexts): {p:.10}"));
    }
    let json = json!({ "parties": parties, "order": s.len(), "value": value, "i2": pair });
    let csv = vec![vec!["order".into(), "value".into()], vec![s.len().to_string(), format!("{value:.12}")]];
    Ok(Report { certified: true, text, json, csv })
}

/// Phase-encoding scan of the three-party facet classes; by default on the
/// state whose coherence the comparison matrix detects but fingerprinting
/// with phases does not.
pub fn cmd_scan_counterexample(state_path: Option<&Path>, cfg: &RunConfig) -> Result<Report, CliError> {
    let state = match state_path {
        Some(p) => load_state(p)?,
        None => counterexample_state(),
    };
    let (trace_norm, coherent) = comparison_matrix_test(&state)?;
    let scan = phase_scan_witness(&state, cfg.grid)?;
    let violated = scan.violates(1e-6);
    let certified = coherent && !violated.iter().any(|v| *v);
    let names = scan_inequalities().map(|q| q.name);
    let mut text = format!("comparison-matrix trace norm {trace_norm:.6} (> 1: {coherent})\ngrid {}^3", cfg.grid);
    let mut csv = vec![vec!["class".into(), "max_lhs".into(), "bound".into(), "violated".into()]];
    for c in 0..3 {
        text.push_str(&format!(
            "\n{}: max {:.6}, bound {}, violated {}",
            names[c], scan.maxima[c], scan.bounds[c], violated[c]
        ));
        csv.push(vec![
            names[c].to_string(),
            format!("{:.10}", scan.maxima[c]),
            scan.bounds[c].to_string(),
            violated[c].to_string(),
        ]);
    }
    let json = json!({
        "comparison_trace_norm": trace_norm,
        "coherent": coherent,
        "scan": scan,
        "violated": violated,
    });
    Ok(Report { certified, text, json, csv })
}

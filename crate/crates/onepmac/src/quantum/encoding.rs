use super::{JointNpChannel, NpChannel, OneParticleState, QuantumError, CHANNEL_TOL};
use crate::linalg::{eigh, CMatrix};
use crate::mac::{Alphabets, Mac};
use num_complex::Complex64;

/// Output of local channels on every path, in closed form:
/// populations shrink by the transmission and leak into the vacuum,
/// coherences pick up the mean amplitudes.
pub fn apply_product_encoding(state: &OneParticleState, channels: &[NpChannel]) -> Result<CMatrix, QuantumError> {
    let n = state.dim();
    if channels.len() != n {
        return Err(QuantumError::ChannelCountMismatch { expected: n, found: channels.len() });
    }
    let amp: Vec<Complex64> = channels.iter().map(NpChannel::mean_amplitude).collect();
    let mut out = CMatrix::zeros(n + 1, n + 1);
    let mut vacuum = 0.0;
    for i in 0..n {
        let rii = state.entry(i, i).re;
        let t = channels[i].transmission();
        out[(i + 1, i + 1)] = Complex64::new(t * rii, 0.0);
        vacuum += (1.0 - t) * rii;
        for j in 0..n {
            if i != j {
                out[(i + 1, j + 1)] = state.entry(i, j) * amp[i] * amp[j].conj();
            }
        }
    }
    out[(0, 0)] = Complex64::new(vacuum, 0.0);
    Ok(out)
}

/// Diagonal-unitary encoding `D ρ D†` with `D = diag(e^{iφ_i})`, on the
/// one-particle block only.
pub fn phase_encode(state: &OneParticleState, phases: &[f64]) -> CMatrix {
    let n = state.dim();
    let d: Vec<Complex64> = phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect();
    CMatrix::from_fn(n, n, |i, j| state.entry(i, j) * d[i] * d[j].conj())
}

fn check_partition(n: usize, channels: &[JointNpChannel]) -> Result<(), QuantumError> {
    let mut seen = vec![false; n];
    for ch in channels {
        for &p in ch.parties() {
            if p >= n {
                return Err(QuantumError::InvalidPartition(format!("party {p} out of range")));
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(QuantumError::InvalidPartition(format!("party {p} in two groups")));
            }
        }
    }
    if let Some(p) = seen.iter().position(|s| !s) {
        return Err(QuantumError::InvalidPartition(format!("party {p} not covered")));
    }
    Ok(())
}

/// Applies one group channel per group of a partition of the parties.
pub fn apply_joint_encoding(state: &OneParticleState, channels: &[JointNpChannel]) -> Result<CMatrix, QuantumError> {
    apply_joint_to_density(&state.embed(), channels)
}

/// As [`apply_joint_encoding`], for a density that may carry vacuum weight.
pub fn apply_joint_to_density(x: &CMatrix, channels: &[JointNpChannel]) -> Result<CMatrix, QuantumError> {
    let n = x.nrows() - 1;
    check_partition(n, channels)?;
    let mut out = x.clone();
    for ch in channels {
        out = ch.lift(n).iter().map(|k| k * &out * k.adjoint()).sum();
    }
    Ok(out)
}

/// Decoding measurement on the vacuum ⊕ one-particle space.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<CMatrix>,
}

impl Povm {
    pub fn new(effects: Vec<CMatrix>) -> Result<Self, QuantumError> {
        let d = effects.first().map_or(0, |e| e.nrows());
        if effects.len() < 2 || d == 0 {
            return Err(QuantumError::InvalidPovm("need at least two effects".into()));
        }
        let mut sum = CMatrix::zeros(d, d);
        for e in &effects {
            if e.shape() != (d, d) {
                return Err(QuantumError::InvalidPovm("effects differ in shape".into()));
            }
            let min = eigh(e)?.min();
            if min < -CHANNEL_TOL {
                return Err(QuantumError::InvalidPovm(format!("effect has eigenvalue {min:e}")));
            }
            sum += e;
        }
        let dev = (sum - CMatrix::identity(d, d)).map(|c| c.norm()).max();
        if dev > CHANNEL_TOL {
            return Err(QuantumError::InvalidPovm(format!("effects sum to I ± {dev:e}")));
        }
        Ok(Self { effects })
    }

    /// `{E, I − E}`.
    pub fn two_outcome(e0: CMatrix) -> Result<Self, QuantumError> {
        let d = e0.nrows();
        let e1 = CMatrix::identity(d, d) - &e0;
        Self::new(vec![e0, e1])
    }

    /// `{|v⟩⟨v|, I − |v⟩⟨v|}` for a unit vector on the full space.
    pub fn projective(v: &[Complex64]) -> Result<Self, QuantumError> {
        Self::two_outcome(crate::linalg::outer(v, v))
    }

    /// Number-basis measurement followed by classical post-processing;
    /// `post[k][b]` is the probability of output `b` after detecting basis
    /// state `k` (0 = vacuum).
    pub fn number_basis(post: &[Vec<f64>]) -> Result<Self, QuantumError> {
        let d = post.len();
        let outputs = post.first().map_or(0, Vec::len);
        let effects =
            (0..outputs)
                .map(|b| {
                    CMatrix::from_fn(d, d, |i, j| {
                        if i == j {
                            Complex64::new(post[i][b], 0.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    })
                })
                .collect();
        Self::new(effects)
    }

    pub fn effects(&self) -> &[CMatrix] {
        &self.effects
    }

    pub fn outputs(&self) -> usize {
        self.effects.len()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].nrows()
    }

    pub fn probabilities(&self, sigma: &CMatrix) -> Vec<f64> {
        self.effects.iter().map(|e| (e * sigma).trace().re).collect()
    }
}

/// Channels of one group, indexed by the group's flattened local input
/// (first listed party most significant).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupEncoding {
    pub parties: Vec<usize>,
    pub input_sizes: Vec<usize>,
    pub channels: Vec<JointNpChannel>,
}

/// Input-dependent encoding of every party.
#[derive(Debug, Clone, PartialEq)]
pub enum Encoding {
    /// `channels[party][symbol]`.
    Product(Vec<Vec<NpChannel>>),
    Joint(Vec<GroupEncoding>),
}

impl Encoding {
    /// Binary phase encoding: symbol 1 of party `i` applies `e^{iφ_i}`.
    pub fn binary_phases(phases: &[f64]) -> Self {
        Encoding::Product(phases.iter().map(|&p| vec![NpChannel::identity(), NpChannel::phase(p)]).collect())
    }

    pub fn input_sizes(&self, n: usize) -> Result<Vec<usize>, QuantumError> {
        match self {
            Encoding::Product(ch) => {
                if ch.len() != n {
                    return Err(QuantumError::ChannelCountMismatch { expected: n, found: ch.len() });
                }
                Ok(ch.iter().map(Vec::len).collect())
            }
            Encoding::Joint(groups) => {
                let mut sizes = vec![0; n];
                for g in groups {
                    let count: usize = g.input_sizes.iter().product();
                    if g.parties.len() != g.input_sizes.len() || g.channels.len() != count {
                        return Err(QuantumError::InvalidPartition("group shape mismatch".into()));
                    }
                    for (&p, &s) in g.parties.iter().zip(&g.input_sizes) {
                        if p >= n || sizes[p] != 0 {
                            return Err(QuantumError::InvalidPartition(format!("party {p} misplaced")));
                        }
                        sizes[p] = s;
                    }
                }
                if sizes.contains(&0) {
                    return Err(QuantumError::InvalidPartition("uncovered party".into()));
                }
                Ok(sizes)
            }
        }
    }

    /// Encoded state for one input tuple.
    pub fn encode(&self, state: &OneParticleState, inputs: &[usize]) -> Result<CMatrix, QuantumError> {
        match self {
            Encoding::Product(ch) => {
                let chosen: Vec<NpChannel> = ch.iter().zip(inputs).map(|(c, &a)| c[a].clone()).collect();
                apply_product_encoding(state, &chosen)
            }
            Encoding::Joint(groups) => {
                let chosen: Vec<JointNpChannel> = groups
                    .iter()
                    .map(|g| {
                        let local = g.parties.iter().zip(&g.input_sizes).fold(0, |acc, (&p, &s)| acc * s + inputs[p]);
                        g.channels[local].clone()
                    })
                    .collect();
                apply_joint_encoding(state, &chosen)
            }
        }
    }
}

/// `p(b|a) = Tr[Π_b σ_a]`.
pub fn generate_mac(state: &OneParticleState, encoding: &Encoding, povm: &Povm) -> Result<Mac<f64>, QuantumError> {
    let n = state.dim();
    if povm.dim() != n + 1 {
        return Err(QuantumError::InvalidPovm(format!("POVM acts on dimension {}, expected {}", povm.dim(), n + 1)));
    }
    let alphabets = Alphabets::new(encoding.input_sizes(n)?, povm.outputs())?;
    let inputs = alphabets.input_count();
    let mut probs = vec![0.0; alphabets.len()];
    for a in 0..inputs {
        let sigma = encoding.encode(state, &alphabets.input_tuple(a))?;
        for (b, p) in povm.probabilities(&sigma).into_iter().enumerate() {
            probs[b * inputs + a] = p;
        }
    }
    Ok(Mac::new(alphabets, probs)?)
}

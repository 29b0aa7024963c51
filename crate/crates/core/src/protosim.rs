//! Monte-Carlo runs of the dense-coding protocols.
//!
//! Each trial draws a message, prepares the encoded state and samples the
//! decoder outcome from its Born distribution. Trial `t` draws all its
//! randomness from `rng_for(seed, t)`, so traces are identical whether the
//! trials run sequentially or in parallel.
//!
//! The decoders are projective measurements. Measuring only the received
//! particle therefore yields a single-shot rate, which can fall below the
//! asymptotic Holevo capacity of the same ensemble.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encodings::{weyl_set, EncodingEnsemble};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::qstate::{check_dim, BipartiteState, DensityMatrix, Subsystem};
use crate::sampling::rng_for;

/// Counts of (message, outcome) pairs from a protocol run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CountTable {
    pub counts: Vec<Vec<u64>>,
}

impl CountTable {
    pub fn zeros(messages: usize, outcomes: usize) -> Self {
        Self {
            counts: vec![vec![0; outcomes]; messages],
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    fn merge(mut self, other: Self) -> Self {
        for (row, orow) in self.counts.iter_mut().zip(other.counts) {
            for (x, y) in row.iter_mut().zip(orow) {
                *x += y;
            }
        }
        self
    }

    /// Plug-in mutual information of the empirical joint distribution, in bits.
    pub fn mutual_information(&self) -> f64 {
        let n = self.total() as f64;
        if n == 0.0 {
            return 0.0;
        }
        let rows: Vec<f64> = self
            .counts
            .iter()
            .map(|r| r.iter().sum::<u64>() as f64)
            .collect();
        let cols: Vec<f64> = (0..self.counts.first().map_or(0, Vec::len))
            .map(|b| self.counts.iter().map(|r| r[b]).sum::<u64>() as f64)
            .collect();
        let mut mi = 0.0;
        for (a, row) in self.counts.iter().enumerate() {
            for (b, &k) in row.iter().enumerate() {
                if k > 0 {
                    let k = k as f64;
                    mi += k / n * (k * n / (rows[a] * cols[b])).log2();
                }
            }
        }
        mi.max(0.0)
    }

    /// Trials whose outcome differs from the message index.
    pub fn off_diagonal(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(a, row)| {
                row.iter()
                    .enumerate()
                    .filter(move |(b, _)| *b != a)
                    .map(|(_, k)| *k)
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTrace {
    pub trials: u64,
    pub counts: CountTable,
    pub empirical_mi: f64,
    pub seed: u64,
}

impl ProtocolTrace {
    fn new(counts: CountTable, seed: u64) -> Self {
        Self {
            trials: counts.total(),
            empirical_mi: counts.mutual_information(),
            counts,
            seed,
        }
    }

    /// Trials decoded to a label other than the message sent.
    pub fn decoding_errors(&self) -> u64 {
        self.counts.off_diagonal()
    }
}

/// An orthonormal measurement basis, stored as the columns of a unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    vectors: CMatrix,
}

impl MeasurementBasis {
    pub fn new(vectors: CMatrix) -> Result<Self> {
        let d = vectors.nrows();
        check_dim(d, vectors.ncols())?;
        let deviation =
            linalg::max_abs_entry(&(vectors.adjoint() * &vectors - linalg::identity(d)));
        if deviation > 1e-10 {
            return Err(Error::NotUnitary {
                index: 0,
                deviation,
            });
        }
        Ok(Self { vectors })
    }

    pub fn computational(d: usize) -> Self {
        Self {
            vectors: linalg::identity(d),
        }
    }

    /// Eigenbasis of a Pauli operator, `+1` eigenvector first.
    pub fn pauli(axis: PauliAxis) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let vectors = match axis {
            PauliAxis::Z => linalg::identity(2),
            PauliAxis::X => {
                CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
            }
            PauliAxis::Y => {
                CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(0.0, s), c(0.0, -s)])
            }
        };
        Self { vectors }
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    /// Born probabilities `<v_b| rho |v_b>`.
    fn probabilities(&self, rho: &CMatrix) -> Vec<f64> {
        (0..self.dim())
            .map(|b| {
                let v = self.vectors.column(b);
                (v.adjoint() * rho * v)[(0, 0)].re.max(0.0)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// How Bob reads out the message.
#[derive(Debug, Clone, PartialEq)]
pub enum Decoder {
    /// Joint measurement in the maximally entangled basis.
    Bell,
    /// Measure only the received particle.
    SingleParticle(MeasurementBasis),
}

/// Maximally entangled basis of `C^d ⊗ C^d`.
///
/// For qubits the order is `(psi+, phi+, phi-, psi-)` in the convention
/// `psi± = (|00> ± |11>)/√2`, `phi± = (|01> ± |10>)/√2`, which is
/// `(sigma_a ⊗ 1)|psi+>` for `sigma = (1, X, Y, Z)` up to phases. For
/// `d > 2` it is `(X^p Z^q ⊗ 1)|Phi_d>` in [`weyl_set`] order.
pub fn bell_basis(d: usize) -> Result<MeasurementBasis> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    if d == 2 {
        let z = linalg::ZERO;
        let p = c(s, 0.0);
        let columns = [[p, z, z, p], [z, p, p, z], [z, p, -p, z], [p, z, z, -p]];
        return Ok(MeasurementBasis {
            vectors: CMatrix::from_fn(4, 4, |i, j| columns[j][i]),
        });
    }
    let ensemble = weyl_set(d)?;
    let mut phi = CVector::zeros(d * d);
    for k in 0..d {
        phi[k * d + k] = c(1.0 / (d as f64).sqrt(), 0.0);
    }
    let mut vectors = CMatrix::zeros(d * d, d * d);
    for (a, u) in ensemble.unitaries().iter().enumerate() {
        let col = linalg::kron(u, &linalg::identity(d)) * &phi;
        vectors.set_column(a, &col);
    }
    MeasurementBasis::new(vectors)
}

/// Draws an index from a discrete distribution with one uniform variate.
fn sample_index(probs: &[f64], u: f64) -> usize {
    let total: f64 = probs.iter().sum();
    let mut acc = 0.0;
    let target = u * total;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if target < acc {
            return i;
        }
    }
    // rounding: fall back to the last index with positive weight
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Tallies `trials` independent draws of `(message, outcome)`.
///
/// `draw` maps the trial's generator to a cell of the table.
fn run_trials<F>(messages: usize, outcomes: usize, trials: u64, seed: u64, draw: F) -> CountTable
where
    F: Fn(&mut crate::sampling::StreamRng) -> (usize, usize) + Sync,
{
    const CHUNK: u64 = 4096;
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut table = CountTable::zeros(messages, outcomes);
            for t in chunk * CHUNK..((chunk + 1) * CHUNK).min(trials) {
                let mut rng = rng_for(seed, t);
                let (a, b) = draw(&mut rng);
                table.counts[a][b] += 1;
            }
            table
        })
        .reduce(|| CountTable::zeros(messages, outcomes), CountTable::merge)
}

/// Quantum dense coding: Alice applies `U_a ⊗ 1` to her half of `s` and sends
/// it; Bob decodes with `decoder`.
pub fn run_quantum_dense(
    s: &BipartiteState,
    e: &EncodingEnsemble,
    decoder: &Decoder,
    trials: u64,
    seed: u64,
) -> Result<ProtocolTrace> {
    if trials < 1 {
        return Err(Error::InvalidTrials);
    }
    let (da, db) = s.dims();
    check_dim(da, e.dim())?;
    // outcome distribution for each message
    let conditionals: Vec<Vec<f64>> = match decoder {
        Decoder::Bell => {
            check_dim(da, db)?;
            let basis = bell_basis(da)?;
            e.unitaries()
                .iter()
                .map(|u| Ok(basis.probabilities(s.apply_local(u, Subsystem::A)?.matrix())))
                .collect::<Result<_>>()?
        }
        Decoder::SingleParticle(basis) => {
            check_dim(da, basis.dim())?;
            e.unitaries()
                .iter()
                .map(|u| Ok(basis.probabilities(s.reduced_a().conjugate(u)?.matrix())))
                .collect::<Result<_>>()?
        }
    };
    let outcomes = conditionals[0].len();
    let prior = e.prior().to_vec();
    let table = run_trials(e.len(), outcomes, trials, seed, |rng| {
        let a = sample_index(&prior, rng.random());
        let b = sample_index(&conditionals[a], rng.random());
        (a, b)
    });
    Ok(ProtocolTrace::new(table, seed))
}

/// Joint distribution `p(ij)` of two classical bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalJointState {
    probabilities: [[f64; 2]; 2],
}

impl ClassicalJointState {
    pub fn new(probabilities: [[f64; 2]; 2]) -> Result<Self> {
        let flat: Vec<f64> = probabilities.iter().flatten().copied().collect();
        crate::encodings::check_prior(&flat, 4)?;
        Ok(Self { probabilities })
    }

    /// `p(00) = p(11) = 1/2`.
    pub fn maximally_correlated() -> Self {
        Self {
            probabilities: [[0.5, 0.0], [0.0, 0.5]],
        }
    }

    /// `p(ij) = 1/4`.
    pub fn uncorrelated() -> Self {
        Self {
            probabilities: [[0.25, 0.25], [0.25, 0.25]],
        }
    }

    pub fn probabilities(&self) -> [[f64; 2]; 2] {
        self.probabilities
    }

    /// The same distribution as a diagonal two-qubit density matrix.
    pub fn as_density_matrix(&self) -> DensityMatrix {
        let p = self.probabilities;
        DensityMatrix::diagonal(&[p[0][0], p[0][1], p[1][0], p[1][1]])
            .expect("validated distribution")
    }
}

/// Classical analogue: Alice sends `j_A xor k`; with the key Bob outputs
/// `received xor j_B`, otherwise the raw bit.
pub fn run_classical_dense(
    s: &ClassicalJointState,
    use_key: bool,
    trials: u64,
    seed: u64,
) -> Result<ProtocolTrace> {
    if trials < 1 {
        return Err(Error::InvalidTrials);
    }
    let joint: Vec<f64> = s.probabilities.iter().flatten().copied().collect();
    let table = run_trials(2, 2, trials, seed, |rng| {
        let cell = sample_index(&joint, rng.random());
        let (ja, jb) = (cell / 2, cell % 2);
        let k = usize::from(rng.random_bool(0.5));
        let sent = ja ^ k;
        let decoded = if use_key { sent ^ jb } else { sent };
        (k, decoded)
    });
    Ok(ProtocolTrace::new(table, seed))
}

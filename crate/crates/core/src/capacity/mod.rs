//! Holevo quantities and noiseless-channel capacities.
//!
//! For a noiseless channel and unitary encodings every signal state has the
//! entropy of the input, so the Holevo quantity reduces to
//! `S(average) - S(input)`. With a twirling ensemble the average is the total
//! mixture, which yields the closed forms
//!
//! ```text
//! C_normal         = log2 d   - S(rho_A)
//! C_dense(A -> B)  = log2 d_A + S(rho_B) - S(rho_AB)
//! C_dense(B -> A)  = log2 d_B + S(rho_A) - S(rho_AB)
//! ```
//!
//! and `C_dense - C_normal` equals the quantum mutual information in either
//! direction.

mod prior;

pub use prior::{optimize_prior, CapacityReport, PriorOptions};

use serde::{Deserialize, Serialize};

use crate::encodings::{weyl_set, EncodingEnsemble};
use crate::error::Result;
use crate::qstate::{check_dim, von_neumann_entropy, BipartiteState, DensityMatrix, Subsystem};

/// Who sends the encoded particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    AtoB,
    BtoA,
}

impl Direction {
    pub fn sender(self) -> Subsystem {
        match self {
            Direction::AtoB => Subsystem::A,
            Direction::BtoA => Subsystem::B,
        }
    }

    pub fn receiver(self) -> Subsystem {
        self.sender().other()
    }
}

/// `sum_a pi_a U_a rho U_a†`.
pub fn average_state(e: &EncodingEnsemble, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_dim(e.dim(), rho.dim())?;
    Ok(DensityMatrix::from_trusted(e.twirl(rho.matrix())?))
}

/// Holevo quantity of an explicit ensemble `{pi_a, rho_a}` in bits.
pub fn holevo_quantity(prior: &[f64], states: &[DensityMatrix]) -> Result<f64> {
    let avg = DensityMatrix::mixture(prior, states)?;
    let mean_entropy: f64 = prior
        .iter()
        .zip(states)
        .map(|(p, s)| p * von_neumann_entropy(s))
        .sum();
    Ok((von_neumann_entropy(&avg) - mean_entropy).max(0.0))
}

/// Holevo quantity of the signal ensemble `{pi_a, U_a rho U_a†}`, which for
/// unitary encodings is `S(average) - S(rho)`.
pub fn holevo_chi(e: &EncodingEnsemble, rho: &DensityMatrix) -> Result<f64> {
    let avg = average_state(e, rho)?;
    Ok((von_neumann_entropy(&avg) - von_neumann_entropy(rho)).max(0.0))
}

/// `log2 d - S(rho)`.
pub fn normal_capacity(rho: &DensityMatrix) -> f64 {
    ((rho.dim() as f64).log2() - von_neumann_entropy(rho)).max(0.0)
}

/// Dense-coding capacity `log2 d_sender + S(rho_receiver) - S(rho_AB)`.
pub fn dense_capacity(s: &BipartiteState, direction: Direction) -> f64 {
    let d_sender = s.dim_of(direction.sender()) as f64;
    d_sender.log2() + von_neumann_entropy(s.reduced(direction.receiver()))
        - von_neumann_entropy(s.joint())
}

/// `S(rho_A) + S(rho_B) - S(rho_AB)`.
pub fn mutual_information(s: &BipartiteState) -> f64 {
    (von_neumann_entropy(s.reduced_a()) + von_neumann_entropy(s.reduced_b())
        - von_neumann_entropy(s.joint()))
    .max(0.0)
}

/// Average state of the dense-coding signals `(U_a ⊗ 1) rho_AB (U_a ⊗ 1)†`
/// (or `1 ⊗ U_a` when B sends).
pub fn dense_average_state(
    s: &BipartiteState,
    e: &EncodingEnsemble,
    direction: Direction,
) -> Result<DensityMatrix> {
    let lifted = e.lift(s.dims(), direction.sender())?;
    average_state(&lifted, s.joint())
}

/// Dense capacity obtained by maximizing the Holevo quantity of the `d^2`
/// Weyl-encoded signal states numerically, alongside the closed form.
#[derive(Debug, Clone)]
pub struct DenseCrossCheck {
    pub closed_form: f64,
    pub optimized: CapacityReport,
}

impl DenseCrossCheck {
    pub fn residual(&self) -> f64 {
        (self.closed_form - self.optimized.chi).abs()
    }
}

pub fn dense_capacity_cross_check(
    s: &BipartiteState,
    direction: Direction,
    options: &PriorOptions,
) -> Result<DenseCrossCheck> {
    let ensemble = weyl_set(s.dim_of(direction.sender()))?.lift(s.dims(), direction.sender())?;
    let signals = ensemble.signal_states(s.joint())?;
    Ok(DenseCrossCheck {
        closed_form: dense_capacity(s, direction),
        optimized: optimize_prior(&signals, options)?,
    })
}

//! The correlation functional
//!
//! ```text
//! E(rho_AB) = min over {p_k, |psi_k>} of sum_k p_k [S(rho_A^k) + S(rho_B^k)]
//! ```
//!
//! i.e. the convex roof of the pure-state mutual information. Since both
//! marginals of a pure state have equal entropy, `E = 2 E_F`. The minimum is
//! searched numerically ([`convex_roof`]) and always reported as an upper
//! bound; for two qubits [`concurrence_oracle`] gives `E_F` in closed form.

mod roof;
mod wootters;

pub use roof::{convex_roof, default_terms, RoofOptions, RoofReport};
pub use wootters::{concurrence_oracle, ConcurrenceReport};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::qstate::{partial_trace, von_neumann_entropy, DensityMatrix, Subsystem};

const NORM_TOL: f64 = 1e-12;

/// A convex decomposition `sum_k p_k |psi_k><psi_k|` of a joint state.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    dims: (usize, usize),
    weights: Vec<f64>,
    vectors: Vec<CVector>,
}

impl Decomposition {
    pub fn new(dims: (usize, usize), weights: Vec<f64>, vectors: Vec<CVector>) -> Result<Self> {
        crate::encodings::check_prior(&weights, vectors.len())?;
        let n = dims.0 * dims.1;
        for v in &vectors {
            if v.len() != n {
                return Err(Error::SplitMismatch { len: v.len(), dims });
            }
            let norm = v.norm();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::InvalidTrace(norm * norm));
            }
        }
        Ok(Self {
            dims,
            weights,
            vectors,
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `sum_k p_k |psi_k><psi_k|`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.dims.0 * self.dims.1;
        let mut m = CMatrix::zeros(n, n);
        for (p, v) in self.weights.iter().zip(&self.vectors) {
            m += (v * v.adjoint()).scale(*p);
        }
        m
    }
}

/// `sum_k p_k [S(rho_A^k) + S(rho_B^k)]` in bits.
pub fn decomposition_cost(d: &Decomposition) -> Result<f64> {
    let mut total = 0.0;
    for (p, v) in d.weights.iter().zip(&d.vectors) {
        let pure = DensityMatrix::pure(v)?;
        let a = partial_trace(&pure, d.dims, Subsystem::A)?;
        let b = partial_trace(&pure, d.dims, Subsystem::B)?;
        total += p * (von_neumann_entropy(&a) + von_neumann_entropy(&b));
    }
    Ok(total)
}

/// Entanglement entropy `S(rho_A)` of a pure joint vector, in bits.
pub fn entanglement_entropy(psi: &CVector, dims: (usize, usize)) -> Result<f64> {
    if psi.len() != dims.0 * dims.1 {
        return Err(Error::SplitMismatch {
            len: psi.len(),
            dims,
        });
    }
    let norm_sq = psi.norm_squared();
    Ok(roof::weighted_marginal_entropy(psi.as_slice(), dims) / norm_sq)
}

pub(crate) fn max_reconstruction_error(d: &Decomposition, target: &DensityMatrix) -> f64 {
    linalg::max_abs_entry(&(d.reconstruct() - target.matrix()))
}

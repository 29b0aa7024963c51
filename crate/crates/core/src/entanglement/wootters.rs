use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::qstate::BipartiteState;

/// Two-qubit concurrence and entanglement of formation (bits).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceReport {
    pub concurrence: f64,
    pub formation: f64,
}

/// Wootters' closed form for two qubits.
///
/// `C = max(0, mu_1 - mu_2 - mu_3 - mu_4)` where `mu_i` are the square roots
/// of the eigenvalues of `rho (sy ⊗ sy) rho* (sy ⊗ sy)` in decreasing order,
/// and `E_F = h((1 + sqrt(1 - C^2)) / 2)`.
pub fn concurrence_oracle(s: &BipartiteState) -> Result<ConcurrenceReport> {
    if s.dims() != (2, 2) {
        return Err(Error::DimensionUnsupported(s.dims()));
    }
    let rho = s.joint().matrix();
    let sy = &linalg::paulis()[1];
    let yy = linalg::kron(sy, sy);
    let flipped = &yy * rho.map(|z| z.conj()) * &yy;

    // rho * flipped has the spectrum of the Hermitian sqrt(rho) flipped sqrt(rho)
    let (vals, vecs) = linalg::hermitian_eigen(rho);
    let sqrt_diag = CMatrix::from_fn(4, 4, |i, j| {
        if i == j {
            linalg::c(vals[i].max(0.0).sqrt(), 0.0)
        } else {
            linalg::ZERO
        }
    });
    let sqrt_rho = &vecs * sqrt_diag * vecs.adjoint();
    let r = &sqrt_rho * flipped * &sqrt_rho;
    let mut mu: Vec<f64> = linalg::hermitian_eigenvalues(&r)
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    mu.sort_by(|a, b| b.total_cmp(a));

    let concurrence = (mu[0] - mu[1] - mu[2] - mu[3]).clamp(0.0, 1.0);
    let formation = linalg::binary_entropy(0.5 * (1.0 + (1.0 - concurrence * concurrence).sqrt()));
    Ok(ConcurrenceReport {
        concurrence,
        formation,
    })
}

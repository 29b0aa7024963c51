use crate::error::{Error, Result};
use crate::linalg;
use crate::qstate::{check_dim, relative_entropy_with, von_neumann_entropy, DensityMatrix};

/// Stopping rule for [`optimize_prior`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorOptions {
    /// Stop once `max_a D(rho_a || avg) - chi < tol`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PriorOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 100_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CapacityReport {
    /// Holevo quantity at the final prior, in bits.
    pub chi: f64,
    pub optimal_prior: Vec<f64>,
    pub average_state: DensityMatrix,
    /// Number of multiplicative updates applied.
    pub iterations: usize,
    pub converged: bool,
    /// `max_a D(rho_a || avg) - chi` at the final prior; bounds the distance
    /// of `chi` from the optimum.
    pub gap: f64,
    /// Holevo quantity at each visited prior, starting from the uniform one.
    pub history: Vec<f64>,
}

/// Maximizes `chi(pi) = S(sum pi_a rho_a) - sum pi_a S(rho_a)` over priors.
///
/// Uses the classical-quantum Blahut-Arimoto fixed point
/// `pi_a <- pi_a 2^{D(rho_a || avg)} / Z` from the uniform prior. Each step
/// does not decrease `chi`, and `max_a D(rho_a || avg)` is an upper bound on
/// the maximum, so the gap to it certifies the result. Hitting `max_iter`
/// is reported through `converged = false`.
pub fn optimize_prior(states: &[DensityMatrix], options: &PriorOptions) -> Result<CapacityReport> {
    let n = states.len();
    if n == 0 {
        return Err(Error::NoStates);
    }
    let d = states[0].dim();
    for s in states {
        check_dim(d, s.dim())?;
    }
    let entropies: Vec<f64> = states.iter().map(von_neumann_entropy).collect();
    let mut prior = vec![1.0 / n as f64; n];
    let mut history = Vec::new();
    let mut iterations = 0;

    loop {
        let avg = DensityMatrix::mixture(&prior, states)?;
        let (vals, vecs) = linalg::hermitian_eigen(avg.matrix());
        let divergences: Vec<f64> = states
            .iter()
            .zip(&entropies)
            .map(|(s, &h)| relative_entropy_with(s, h, &vals, &vecs))
            .collect();
        let chi: f64 = prior.iter().zip(&divergences).map(|(p, d)| p * d).sum();
        let max_div = divergences
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let gap = (max_div - chi).max(0.0);
        history.push(chi);

        let converged = gap < options.tol;
        if converged || iterations >= options.max_iter {
            return Ok(CapacityReport {
                chi,
                optimal_prior: prior,
                average_state: avg,
                iterations,
                converged,
                gap,
                history,
            });
        }

        // shift by max_div so the exponent stays <= 0
        for (p, &dv) in prior.iter_mut().zip(&divergences) {
            *p *= (dv - max_div).exp2();
        }
        let z: f64 = prior.iter().sum();
        prior.iter_mut().for_each(|p| *p /= z);
        iterations += 1;
    }
}

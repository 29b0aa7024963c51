//! Convex-roof search over pure-state decompositions.
//!
//! Every decomposition of `rho = sum_i l_i |e_i><e_i|` into `m` terms has the
//! form `|psi~_k> = sum_i V_ki sqrt(l_i) |e_i>` with `V` an `m x r` matrix with
//! orthonormal columns, and `p_k = <psi~_k|psi~_k>`. Left-multiplying `V` by a
//! unitary mixes the (unnormalized) vectors, so the search keeps the rows
//! `psi~_k` directly and applies Givens rotations to pairs of rows. A rotation
//! of rows `i, j` only changes two terms of the cost, which keeps each trial
//! move cheap.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{max_reconstruction_error, Decomposition};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::qstate::{BipartiteState, PSD_FLOOR};
use crate::sampling::{random_unitary, rng_for};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoofOptions {
    /// Number of decomposition terms `m`; `None` picks [`default_terms`].
    pub terms: Option<usize>,
    pub restarts: usize,
    /// Descent stops once the rotation step falls below this angle.
    pub tol: f64,
    pub seed: u64,
    pub max_sweeps: usize,
}

impl Default for RoofOptions {
    fn default() -> Self {
        Self {
            terms: None,
            restarts: 32,
            tol: 1e-6,
            seed: 0,
            max_sweeps: 20_000,
        }
    }
}

/// `min(r^2, 2r)` for a state of rank `r`.
pub fn default_terms(rank: usize) -> usize {
    (rank * rank).min(2 * rank).max(1)
}

/// Best decomposition found. `value` is an upper bound on the true minimum.
#[derive(Debug, Clone)]
pub struct RoofReport {
    pub value: f64,
    pub decomposition: Decomposition,
    pub restarts_used: usize,
    /// Index of the restart that produced `value` (restart 0 starts from the
    /// eigen-decomposition).
    pub best_restart: usize,
    pub converged: bool,
}

impl RoofReport {
    /// Always true: a nonconvex search only certifies an upper bound.
    pub fn is_upper_bound(&self) -> bool {
        true
    }
}

pub fn convex_roof(s: &BipartiteState, options: &RoofOptions) -> Result<RoofReport> {
    let dims = s.dims();
    let n = dims.0 * dims.1;
    let (vals, vecs) = linalg::hermitian_eigen(s.joint().matrix());
    let support: Vec<usize> = (0..n).filter(|&i| vals[i] > PSD_FLOOR).collect();
    let rank = support.len();
    let terms = options.terms.unwrap_or_else(|| default_terms(rank));
    if terms < rank {
        return Err(Error::RankTooLarge { rank, terms });
    }
    // columns sqrt(l_i) e_i of the support
    let weighted: Vec<CVector> = support
        .iter()
        .map(|&i| vecs.column(i).scale(vals[i].sqrt()))
        .collect();

    let restarts = options.restarts.max(1);
    let runs: Vec<Run> = (0..restarts)
        .into_par_iter()
        .map(|k| {
            let mixing = if k == 0 {
                CMatrix::identity(terms, rank)
            } else {
                let mut rng = rng_for(options.seed, k as u64);
                random_unitary(&mut rng, terms)
                    .columns(0, rank)
                    .into_owned()
            };
            let rows: Vec<Vec<Complex64>> = (0..terms)
                .map(|t| {
                    let mut row = vec![linalg::ZERO; n];
                    for (i, w) in weighted.iter().enumerate() {
                        let coeff = mixing[(t, i)];
                        for (x, y) in row.iter_mut().zip(w.iter()) {
                            *x += coeff * y;
                        }
                    }
                    row
                })
                .collect();
            descend(rows, dims, options)
        })
        .collect();

    let mut best = 0;
    for (k, run) in runs.iter().enumerate() {
        if run.value < runs[best].value {
            best = k;
        }
    }
    let run = &runs[best];
    let decomposition = to_decomposition(&run.rows, dims)?;
    debug_assert!(max_reconstruction_error(&decomposition, s.joint()) < 1e-8);
    Ok(RoofReport {
        value: run.value,
        decomposition,
        restarts_used: restarts,
        best_restart: best,
        converged: run.converged,
    })
}

struct Run {
    rows: Vec<Vec<Complex64>>,
    value: f64,
    converged: bool,
}

const INITIAL_STEP: f64 = 0.5;
const MAX_SWEEPS_PER_STEP: usize = 40;

/// Greedy Givens coordinate descent with a shrinking step.
fn descend(mut rows: Vec<Vec<Complex64>>, dims: (usize, usize), options: &RoofOptions) -> Run {
    let m = rows.len();
    let mut costs: Vec<f64> = rows.iter().map(|r| term_cost(r, dims)).collect();
    let mut step = INITIAL_STEP;
    let mut at_step = 0;
    let mut converged = m < 2;
    let phases = [linalg::ONE, linalg::I];

    for _ in 0..options.max_sweeps {
        if converged {
            break;
        }
        let mut gain = 0.0;
        for i in 0..m {
            for j in i + 1..m {
                for phase in phases {
                    for sign in [1.0, -1.0] {
                        let angle = sign * step;
                        let mut accepted = false;
                        // repeat a successful move while it keeps paying off
                        for _ in 0..8 {
                            let (ri, rj) = rotate(&rows[i], &rows[j], angle, phase);
                            let (ci, cj) = (term_cost(&ri, dims), term_cost(&rj, dims));
                            let delta = costs[i] + costs[j] - ci - cj;
                            if delta <= 1e-15 {
                                break;
                            }
                            rows[i] = ri;
                            rows[j] = rj;
                            costs[i] = ci;
                            costs[j] = cj;
                            gain += delta;
                            accepted = true;
                        }
                        if accepted {
                            break;
                        }
                    }
                }
            }
        }
        at_step += 1;
        if gain <= 1e-14 || at_step >= MAX_SWEEPS_PER_STEP {
            step *= 0.5;
            at_step = 0;
            converged = step < options.tol;
        }
    }

    Run {
        value: costs.iter().sum::<f64>().max(0.0),
        rows,
        converged,
    }
}

/// Rows `(c r_i - conj(ph) s r_j, ph s r_i + c r_j)` for a unit phase `ph`.
fn rotate(
    ri: &[Complex64],
    rj: &[Complex64],
    angle: f64,
    phase: Complex64,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let (s, c) = angle.sin_cos();
    let a = phase.conj() * s;
    let b = phase * s;
    let new_i = ri.iter().zip(rj).map(|(x, y)| x * c - a * y).collect();
    let new_j = ri.iter().zip(rj).map(|(x, y)| b * x + y * c).collect();
    (new_i, new_j)
}

/// `2 p S(psi / sqrt p)` for an unnormalized vector with `p = |psi|^2`.
fn term_cost(psi: &[Complex64], dims: (usize, usize)) -> f64 {
    2.0 * weighted_marginal_entropy(psi, dims)
}

/// `p S(rho_A)` of the normalized vector, computed as
/// `-sum mu log2 mu + p log2 p` with `mu` the eigenvalues of the unnormalized
/// reduced operator.
pub(super) fn weighted_marginal_entropy(psi: &[Complex64], (da, db): (usize, usize)) -> f64 {
    let p: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if p <= 0.0 {
        return 0.0;
    }
    // coefficient matrix M[i][j] = psi[i * db + j]; reduce over the larger side
    let reduced = if da <= db {
        CMatrix::from_fn(da, da, |i, k| {
            (0..db)
                .map(|j| psi[i * db + j] * psi[k * db + j].conj())
                .sum()
        })
    } else {
        CMatrix::from_fn(db, db, |j, l| {
            (0..da)
                .map(|i| psi[i * db + j] * psi[i * db + l].conj())
                .sum()
        })
    };
    let mu = linalg::hermitian_eigenvalues(&reduced);
    let mut h = p * p.log2();
    for x in mu {
        let x = x.clamp(0.0, p);
        if x > 0.0 {
            h -= x * x.log2();
        }
    }
    h.max(0.0)
}

fn to_decomposition(rows: &[Vec<Complex64>], dims: (usize, usize)) -> Result<Decomposition> {
    let mut weights = Vec::new();
    let mut vectors = Vec::new();
    for row in rows {
        let p: f64 = row.iter().map(|z| z.norm_sqr()).sum();
        if p > 1e-15 {
            let norm = p.sqrt();
            weights.push(p);
            vectors.push(CVector::from_iterator(
                row.len(),
                row.iter().map(|z| z / norm),
            ));
        }
    }
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    Decomposition::new(dims, weights, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::{concurrence_oracle, decomposition_cost};
    use crate::qstate::{von_neumann_entropy, DensityMatrix};
    use crate::sampling::{random_bipartite, random_pure};
    use approx::assert_abs_diff_eq;

    fn quick() -> RoofOptions {
        RoofOptions {
            restarts: 8,
            ..RoofOptions::default()
        }
    }

    #[test]
    fn pure_bell_has_unique_decomposition() {
        let r = convex_roof(&BipartiteState::bell(), &quick()).unwrap();
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-12);
        assert_eq!(r.decomposition.len(), 1);
        assert!(r.converged);
    }

    #[test]
    fn pure_states_give_twice_the_marginal_entropy() {
        let mut rng = rng_for(12, 0);
        for dims in [(2, 2), (2, 3), (3, 3)] {
            let psi = random_pure(&mut rng, dims.0 * dims.1);
            let s = BipartiteState::pure(&psi, dims).unwrap();
            let r = convex_roof(&s, &quick()).unwrap();
            assert_abs_diff_eq!(
                r.value,
                2.0 * von_neumann_entropy(s.reduced_a()),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn classical_mixture_is_unentangled() {
        let rho = DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5]).unwrap();
        let s = BipartiteState::new(rho, (2, 2)).unwrap();
        let r = convex_roof(&s, &quick()).unwrap();
        assert!(r.value < 1e-6, "{}", r.value);
    }

    #[test]
    fn werner_matches_wootters() {
        let s = BipartiteState::werner(0.8).unwrap();
        let oracle = concurrence_oracle(&s).unwrap();
        let r = convex_roof(&s, &RoofOptions::default()).unwrap();
        assert!(
            (r.value - 2.0 * oracle.formation).abs() < 5e-3,
            "{} vs {}",
            r.value,
            2.0 * oracle.formation
        );
        assert!(r.value >= 2.0 * oracle.formation - 1e-9);
    }

    #[test]
    fn never_worse_than_eigendecomposition() {
        let mut rng = rng_for(13, 0);
        let s = random_bipartite(&mut rng, (2, 2), 3);
        let (vals, vecs) = linalg::hermitian_eigen(s.joint().matrix());
        let keep: Vec<usize> = (0..4).filter(|&i| vals[i] > PSD_FLOOR).collect();
        let eig = Decomposition::new(
            (2, 2),
            keep.iter()
                .map(|&i| vals[i])
                .collect::<Vec<_>>()
                .iter()
                .map(|v| v / keep.iter().map(|&i| vals[i]).sum::<f64>())
                .collect(),
            keep.iter().map(|&i| vecs.column(i).into_owned()).collect(),
        )
        .unwrap();
        let r = convex_roof(&s, &quick()).unwrap();
        assert!(r.value <= decomposition_cost(&eig).unwrap() + 1e-12);
        assert!(max_reconstruction_error(&r.decomposition, s.joint()) < 1e-8);
        assert_abs_diff_eq!(
            decomposition_cost(&r.decomposition).unwrap(),
            r.value,
            epsilon = 1e-9
        );
    }

    #[test]
    fn too_few_terms_is_an_error() {
        let s = BipartiteState::werner(0.5).unwrap();
        let options = RoofOptions {
            terms: Some(3),
            ..quick()
        };
        assert_eq!(
            convex_roof(&s, &options).unwrap_err(),
            Error::RankTooLarge { rank: 4, terms: 3 }
        );
        assert_eq!(default_terms(1), 1);
        assert_eq!(default_terms(4), 8);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let s = BipartiteState::werner(0.6).unwrap();
        let a = convex_roof(&s, &quick()).unwrap();
        let b = convex_roof(&s, &quick()).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.best_restart, b.best_restart);
    }
}

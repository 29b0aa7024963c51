//! Density-matrix algebra.
//!
//! [`DensityMatrix`] is the universal state carrier: single systems, joint
//! states, reduced states and averaged signal states are all stored this way.
//! Construction validates the three defining properties (Hermitian, unit trace,
//! positive semidefinite) with fixed tolerances; everything downstream may
//! assume them.

mod bipartite;
mod bloch;

pub use bipartite::{lift_local, BipartiteState, Subsystem};
pub use bloch::{from_bloch, to_bloch, BlochVector};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

/// Max entrywise |M - M†|.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Max |Tr M - 1|.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues in [-PSD_FLOOR, 0) are treated as zero; anything lower is rejected.
pub const PSD_FLOOR: f64 = 1e-10;

/// A validated `d x d` density operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates `matrix` and wraps it.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::NotSquare(rows, cols));
        }
        if rows == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let herm_dev = linalg::max_abs_entry(&(&matrix - matrix.adjoint()));
        if herm_dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(herm_dev));
        }
        let tr = linalg::trace(&matrix);
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let min_eig = linalg::hermitian_eigenvalues(&matrix)[0];
        if min_eig < -PSD_FLOOR {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix produced by a trace-preserving operation on valid
    /// states. Rounding asymmetry is removed; nothing else is checked.
    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        Self {
            matrix: linalg::hermitize(&matrix),
        }
    }

    /// `|psi><psi|` for a (not necessarily normalized) nonzero vector.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidTrace(0.0));
        }
        let v = psi.unscale(norm);
        Ok(Self::from_trusted(&v * v.adjoint()))
    }

    /// The total mixture `1/d`.
    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(d));
        }
        Ok(Self {
            matrix: linalg::identity(d).unscale(d as f64),
        })
    }

    /// A diagonal state with the given probabilities.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let d = probs.len();
        Self::new(CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                linalg::c(probs[i], 0.0)
            } else {
                linalg::ZERO
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Eigenvalues in ascending order, with the PSD floor applied.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
            .into_iter()
            .map(|l| l.clamp(0.0, 1.0))
            .collect()
    }

    /// Number of eigenvalues above `PSD_FLOOR`.
    pub fn rank(&self) -> usize {
        self.eigenvalues()
            .iter()
            .filter(|&&l| l > PSD_FLOOR)
            .count()
    }

    /// `U rho U†` for a unitary `u`.
    pub fn conjugate(&self, u: &CMatrix) -> Result<Self> {
        check_dim(self.dim(), u.nrows())?;
        Ok(Self::from_trusted(linalg::conjugate_by(u, &self.matrix)))
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self::from_trusted(linalg::kron(&self.matrix, &other.matrix))
    }

    /// Convex combination `sum_k w_k rho_k`. Weights must form a probability vector.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::NoStates);
        }
        crate::encodings::check_prior(weights, states.len())?;
        let d = states[0].dim();
        let mut acc = CMatrix::zeros(d, d);
        for (w, s) in weights.iter().zip(states) {
            check_dim(d, s.dim())?;
            acc += s.matrix.scale(*w);
        }
        Ok(Self::from_trusted(acc))
    }

    /// Frobenius distance to another state of the same dimension.
    pub fn distance(&self, other: &DensityMatrix) -> f64 {
        linalg::frobenius(&(&self.matrix - &other.matrix))
    }
}

pub(crate) fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

/// Partial trace of a joint state on `d_a * d_b` dimensions, keeping one side.
pub fn partial_trace(
    state: &DensityMatrix,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<DensityMatrix> {
    check_dim(dims.0 * dims.1, state.dim())?;
    Ok(DensityMatrix::from_trusted(partial_trace_matrix(
        state.matrix(),
        dims,
        keep,
    )))
}

/// Partial trace on a raw operator; no validation.
pub(crate) fn partial_trace_matrix(
    m: &CMatrix,
    (da, db): (usize, usize),
    keep: Subsystem,
) -> CMatrix {
    match keep {
        Subsystem::A => CMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        }),
        Subsystem::B => CMatrix::from_fn(db, db, |k, l| {
            (0..da).map(|i| m[(i * db + k, i * db + l)]).sum()
        }),
    }
}

/// Von Neumann entropy `-Tr rho log2 rho` in bits.
pub fn von_neumann_entropy(state: &DensityMatrix) -> f64 {
    linalg::spectral_entropy(&state.eigenvalues())
}

/// Quantum relative entropy `D(rho || sigma)` in bits.
///
/// When `rho` has weight outside the support of `sigma` the divergence is
/// infinite; it is reported as [`RELATIVE_ENTROPY_CAP`] instead.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dim(rho.dim(), sigma.dim())?;
    let (vals, vecs) = linalg::hermitian_eigen(sigma.matrix());
    Ok(relative_entropy_with(
        rho,
        von_neumann_entropy(rho),
        &vals,
        &vecs,
    ))
}

/// Cap for divergences with mismatched supports.
pub const RELATIVE_ENTROPY_CAP: f64 = 50.0;

/// `D(rho || sigma)` given `S(rho)` and the eigensystem of `sigma`.
pub(crate) fn relative_entropy_with(
    rho: &DensityMatrix,
    rho_entropy: f64,
    sigma_vals: &[f64],
    sigma_vecs: &CMatrix,
) -> f64 {
    let mut cross = 0.0;
    for (j, &s) in sigma_vals.iter().enumerate() {
        let v = sigma_vecs.column(j);
        let weight = (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
        if s <= 0.0 {
            if weight > 1e-12 {
                return RELATIVE_ENTROPY_CAP;
            }
            continue;
        }
        cross += weight * s.log2();
    }
    (-rho_entropy - cross).clamp(0.0, RELATIVE_ENTROPY_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::sampling::{random_density_matrix, random_unitary, rng_for};
    use approx::assert_abs_diff_eq;

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&CVector::from_vec(vec![
            c(s, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(s, 0.0),
        ]))
        .unwrap()
    }

    #[test]
    fn rejects_invalid_matrices() {
        let nonherm =
            CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.0), c(0.2, 0.0), c(0.5, 0.0)]);
        assert!(matches!(
            DensityMatrix::new(nonherm),
            Err(Error::NotHermitian(_))
        ));
        let bad_trace = CMatrix::identity(2, 2);
        assert!(matches!(
            DensityMatrix::new(bad_trace),
            Err(Error::InvalidTrace(_))
        ));
        let negative = CMatrix::from_row_slice(
            2,
            2,
            &[c(1.5, 0.0), linalg::ZERO, linalg::ZERO, c(-0.5, 0.0)],
        );
        assert!(matches!(
            DensityMatrix::new(negative),
            Err(Error::NotPositive(_))
        ));
        assert!(matches!(
            DensityMatrix::new(CMatrix::zeros(2, 3)),
            Err(Error::NotSquare(2, 3))
        ));
    }

    #[test]
    fn tolerates_tiny_negative_eigenvalues() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                c(1.0 + 1e-11, 0.0),
                linalg::ZERO,
                linalg::ZERO,
                c(-1e-11, 0.0),
            ],
        );
        let rho = DensityMatrix::new(m).unwrap();
        assert_eq!(rho.eigenvalues()[0], 0.0);
        assert_eq!(von_neumann_entropy(&rho), 0.0);
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let a = partial_trace(&bell(), (2, 2), Subsystem::A).unwrap();
        let b = partial_trace(&bell(), (2, 2), Subsystem::B).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(a.distance(&mixed) < 1e-12);
        assert!(b.distance(&mixed) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_recovers_factors() {
        let mut rng = rng_for(7, 0);
        let a = random_density_matrix(&mut rng, 3, 3);
        let b = random_density_matrix(&mut rng, 2, 1);
        let ab = a.tensor(&b);
        assert!(
            partial_trace(&ab, (3, 2), Subsystem::A)
                .unwrap()
                .distance(&a)
                < 1e-12
        );
        assert!(
            partial_trace(&ab, (3, 2), Subsystem::B)
                .unwrap()
                .distance(&b)
                < 1e-12
        );
    }

    #[test]
    fn partial_trace_matches_index_contraction() {
        let mut rng = rng_for(11, 0);
        let rho = random_density_matrix(&mut rng, 4, 4);
        let m = rho.matrix();
        // rho[(i,k),(j,l)] with composite index i*2+k
        let entry = |i: usize, k: usize, j: usize, l: usize| m[(2 * i + k, 2 * j + l)];
        let a = partial_trace(&rho, (2, 2), Subsystem::A).unwrap();
        let b = partial_trace(&rho, (2, 2), Subsystem::B).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                let ea = entry(x, 0, y, 0) + entry(x, 1, y, 1);
                let eb = entry(0, x, 0, y) + entry(1, x, 1, y);
                assert!((a.matrix()[(x, y)] - ea).norm() < 1e-14);
                assert!((b.matrix()[(x, y)] - eb).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn partial_trace_dimension_mismatch() {
        let rho = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(matches!(
            partial_trace(&rho, (2, 3), Subsystem::A),
            Err(Error::DimensionMismatch {
                expected: 6,
                actual: 4
            })
        ));
    }

    #[test]
    fn entropy_reference_values() {
        assert_abs_diff_eq!(
            von_neumann_entropy(&DensityMatrix::maximally_mixed(2).unwrap()),
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(von_neumann_entropy(&bell()), 0.0, epsilon = 1e-12);
        // Werner p = 0.5: spectrum (5/8, 1/8, 1/8, 1/8)
        let expected = -(0.625f64) * 0.625f64.log2() - 3.0 * 0.125 * 0.125f64.log2();
        assert_abs_diff_eq!(expected, 1.548795, epsilon = 1e-6);
        let werner = DensityMatrix::mixture(
            &[0.5, 0.5],
            &[bell(), DensityMatrix::maximally_mixed(4).unwrap()],
        )
        .unwrap();
        assert_abs_diff_eq!(von_neumann_entropy(&werner), expected, epsilon = 1e-12);
    }

    #[test]
    fn entropy_within_bounds_and_unitarily_invariant() {
        let mut rng = rng_for(3, 0);
        for d in 2..=5 {
            let rho = random_density_matrix(&mut rng, d, d);
            let s = von_neumann_entropy(&rho);
            assert!(s >= 0.0 && s <= (d as f64).log2() + 1e-12);
            let u = random_unitary(&mut rng, d);
            assert_abs_diff_eq!(
                von_neumann_entropy(&rho.conjugate(&u).unwrap()),
                s,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn relative_entropy_basics() {
        let mut rng = rng_for(5, 0);
        let rho = random_density_matrix(&mut rng, 3, 3);
        assert_abs_diff_eq!(relative_entropy(&rho, &rho).unwrap(), 0.0, epsilon = 1e-10);
        // D(rho || 1/d) = log d - S(rho)
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        assert_abs_diff_eq!(
            relative_entropy(&rho, &mixed).unwrap(),
            3f64.log2() - von_neumann_entropy(&rho),
            epsilon = 1e-10
        );
        let up = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let down = DensityMatrix::diagonal(&[0.0, 1.0]).unwrap();
        assert_eq!(relative_entropy(&up, &down).unwrap(), RELATIVE_ENTROPY_CAP);
    }
}

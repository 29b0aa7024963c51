//! Encoding unitaries and operator bases.
//!
//! Two families twirl every input to the total mixture under a uniform prior:
//! the frame-generated qubit set `{1, n_1.sigma, n_2.sigma, n_3.sigma}` and,
//! for any `d`, the `d^2` Weyl-Heisenberg operators `X^p Z^q`. Both satisfy
//! `Tr U_a† U_b = d delta_ab`. The antipodal pair `{1, U}` only works for a
//! known input direction.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};
use crate::qstate::{check_dim, BlochVector, DensityMatrix, Subsystem};

const FRAME_TOL: f64 = 1e-12;
const UNITARY_TOL: f64 = 1e-12;
const PRIOR_TOL: f64 = 1e-12;
/// Gram matrices within this of the identity count as orthonormal.
pub const GRAM_TOL: f64 = 1e-10;

/// Three orthonormal real 3-vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrthonormalFrame {
    vectors: [[f64; 3]; 3],
}

impl OrthonormalFrame {
    pub fn new(n1: [f64; 3], n2: [f64; 3], n3: [f64; 3]) -> Result<Self> {
        let vectors = [n1, n2, n3];
        let mut dev: f64 = 0.0;
        for k in 0..3 {
            for l in 0..3 {
                let dot: f64 = (0..3).map(|i| vectors[k][i] * vectors[l][i]).sum();
                let target = if k == l { 1.0 } else { 0.0 };
                dev = dev.max((dot - target).abs());
            }
        }
        // completeness: sum_k n_k^a n_k^b = delta^ab
        for a in 0..3 {
            for b in 0..3 {
                let s: f64 = (0..3).map(|k| vectors[k][a] * vectors[k][b]).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                dev = dev.max((s - target).abs());
            }
        }
        if dev > FRAME_TOL || !dev.is_finite() {
            return Err(Error::FrameNotOrthonormal(dev));
        }
        Ok(Self { vectors })
    }

    /// The coordinate axes.
    pub fn standard() -> Self {
        Self {
            vectors: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Frame whose vectors are the columns of an orthogonal matrix.
    pub fn from_columns(m: &Matrix3<f64>) -> Result<Self> {
        let col = |j: usize| [m[(0, j)], m[(1, j)], m[(2, j)]];
        Self::new(col(0), col(1), col(2))
    }

    pub fn vectors(&self) -> &[[f64; 3]; 3] {
        &self.vectors
    }
}

/// Unitaries `U_a` on a `d`-dimensional space with a prior `pi_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodingEnsemble {
    dim: usize,
    unitaries: Vec<CMatrix>,
    prior: Vec<f64>,
}

impl EncodingEnsemble {
    pub fn new(unitaries: Vec<CMatrix>, prior: Vec<f64>) -> Result<Self> {
        let dim = unitaries.first().ok_or(Error::NoStates)?.nrows();
        for (index, u) in unitaries.iter().enumerate() {
            if u.nrows() != u.ncols() {
                return Err(Error::NotSquare(u.nrows(), u.ncols()));
            }
            check_dim(dim, u.nrows())?;
            let deviation = linalg::max_abs_entry(&(u.adjoint() * u - linalg::identity(dim)));
            if deviation > UNITARY_TOL || !deviation.is_finite() {
                return Err(Error::NotUnitary { index, deviation });
            }
        }
        check_prior(&prior, unitaries.len())?;
        Ok(Self {
            dim,
            unitaries,
            prior,
        })
    }

    /// Same unitaries with the uniform prior.
    pub fn uniform(unitaries: Vec<CMatrix>) -> Result<Self> {
        let n = unitaries.len().max(1);
        Self::new(unitaries, vec![1.0 / n as f64; n])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.unitaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unitaries.is_empty()
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.unitaries
    }

    pub fn prior(&self) -> &[f64] {
        &self.prior
    }

    pub fn with_prior(&self, prior: Vec<f64>) -> Result<Self> {
        Self::new(self.unitaries.clone(), prior)
    }

    /// `sum_a pi_a U_a X U_a†` for an arbitrary operator `X`.
    pub fn twirl(&self, op: &CMatrix) -> Result<CMatrix> {
        check_dim(self.dim, op.nrows())?;
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for (u, &p) in self.unitaries.iter().zip(&self.prior) {
            if p != 0.0 {
                acc += linalg::conjugate_by(u, op).scale(p);
            }
        }
        Ok(acc)
    }

    /// Signal states `U_a rho U_a†`.
    pub fn signal_states(&self, rho: &DensityMatrix) -> Result<Vec<DensityMatrix>> {
        self.unitaries.iter().map(|u| rho.conjugate(u)).collect()
    }

    /// The ensemble acting on one side of a `dims` split: `U_a ⊗ 1` or `1 ⊗ U_a`.
    pub fn lift(&self, dims: (usize, usize), side: Subsystem) -> Result<Self> {
        let local = match side {
            Subsystem::A => dims.0,
            Subsystem::B => dims.1,
        };
        check_dim(local, self.dim)?;
        Ok(Self {
            dim: dims.0 * dims.1,
            unitaries: self
                .unitaries
                .iter()
                .map(|u| crate::qstate::lift_local(u, dims, side))
                .collect(),
            prior: self.prior.clone(),
        })
    }
}

pub(crate) fn check_prior(prior: &[f64], n: usize) -> Result<()> {
    if prior.len() != n {
        return Err(Error::InvalidPrior(format!(
            "{} weights for {n} entries",
            prior.len()
        )));
    }
    if let Some(p) = prior.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::InvalidPrior(format!(
            "weight {p} is negative or not finite"
        )));
    }
    let total: f64 = prior.iter().sum();
    if (total - 1.0).abs() > PRIOR_TOL {
        return Err(Error::InvalidPrior(format!("weights sum to {total}")));
    }
    Ok(())
}

/// `d^2 - 1` traceless Hermitian operators with `Tr L_a L_b = d delta_ab`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBasis {
    dim: usize,
    lambdas: Vec<CMatrix>,
}

impl OperatorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lambdas(&self) -> &[CMatrix] {
        &self.lambdas
    }

    /// Expansion coefficients `n_a = Tr(rho L_a) / d` such that
    /// `rho = 1/d + sum_a n_a L_a`.
    pub fn coefficients(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        check_dim(self.dim, rho.dim())?;
        Ok(self
            .lambdas
            .iter()
            .map(|l| linalg::trace(&(rho.matrix() * l)).re / self.dim as f64)
            .collect())
    }
}

/// `{1, n_1.sigma, n_2.sigma, n_3.sigma}` with prior 1/4 each.
pub fn canonical_qubit_set(frame: &OrthonormalFrame) -> EncodingEnsemble {
    let mut unitaries = vec![linalg::identity(2)];
    unitaries.extend(frame.vectors().iter().map(|n| linalg::pauli_dot(*n)));
    EncodingEnsemble {
        dim: 2,
        unitaries,
        prior: vec![0.25; 4],
    }
}

/// `{1, U}` with prior (1/2, 1/2), where `U` is a pi rotation that sends the
/// Bloch vector `v` to `-v`.
///
/// The rotation axis is `v × y` normalized (falling back to `v × z` when `v`
/// is along `y`), with its sign fixed so the largest component is positive.
/// Hence `z -> sigma_x` and `x -> sigma_z`.
pub fn antipodal_pair(v: BlochVector) -> Result<EncodingEnsemble> {
    let n = v.norm();
    if n <= 1e-12 {
        return Err(Error::ZeroBlochVector);
    }
    let u = [v.x / n, v.y / n, v.z / n];
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let mut axis = cross(u, [0.0, 1.0, 0.0]);
    let mut len = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
    if len < 1e-8 {
        axis = cross(u, [0.0, 0.0, 1.0]);
        len = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
    }
    let largest = axis
        .iter()
        .copied()
        .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    let sign = largest.signum() / len;
    let axis = axis.map(|x| x * sign);
    Ok(EncodingEnsemble {
        dim: 2,
        unitaries: vec![linalg::identity(2), linalg::pauli_dot(axis)],
        prior: vec![0.5, 0.5],
    })
}

/// Generalized Gell-Mann basis scaled to `Tr L_a L_b = d delta_ab`.
///
/// Ordering: symmetric `E_jk + E_kj` for `j < k` lexicographic, then
/// antisymmetric `-i E_jk + i E_kj` in the same order, then the `d - 1`
/// diagonal operators. For `d = 2` this is `(sigma_x, sigma_y, sigma_z)`.
pub fn gellmann_basis(d: usize) -> Result<OperatorBasis> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    // standard Gell-Mann matrices have Tr = 2 delta
    let scale = (d as f64 / 2.0).sqrt();
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|j| (j + 1..d).map(move |k| (j, k)))
        .collect();
    let mut lambdas = Vec::with_capacity(d * d - 1);
    for &(j, k) in &pairs {
        let mut m = CMatrix::zeros(d, d);
        m[(j, k)] = c(scale, 0.0);
        m[(k, j)] = c(scale, 0.0);
        lambdas.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = CMatrix::zeros(d, d);
        m[(j, k)] = c(0.0, -scale);
        m[(k, j)] = c(0.0, scale);
        lambdas.push(m);
    }
    for l in 1..d {
        let norm = scale * (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut m = CMatrix::zeros(d, d);
        for i in 0..l {
            m[(i, i)] = c(norm, 0.0);
        }
        m[(l, l)] = c(-(l as f64) * norm, 0.0);
        lambdas.push(m);
    }
    Ok(OperatorBasis { dim: d, lambdas })
}

/// Cyclic shift `X|k> = |k+1 mod d>`.
pub fn shift_operator(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| {
        if i == (j + 1) % d {
            linalg::ONE
        } else {
            linalg::ZERO
        }
    })
}

/// Clock `Z|k> = omega^k |k>`, `omega = exp(2 pi i / d)`.
pub fn clock_operator(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            root_of_unity(d, i)
        } else {
            linalg::ZERO
        }
    })
}

fn root_of_unity(d: usize, k: usize) -> num_complex::Complex64 {
    num_complex::Complex64::cis(2.0 * std::f64::consts::PI * (k % d) as f64 / d as f64)
}

/// The `d^2` Weyl-Heisenberg operators `X^p Z^q`, uniform prior.
///
/// Index `a = p + d q`, so for `d = 2` the order is `1, X, Z, XZ`.
pub fn weyl_set(d: usize) -> Result<EncodingEnsemble> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut unitaries = Vec::with_capacity(d * d);
    for q in 0..d {
        for p in 0..d {
            // (X^p Z^q)|k> = omega^{qk} |k + p>
            unitaries.push(CMatrix::from_fn(d, d, |i, k| {
                if i == (k + p) % d {
                    root_of_unity(d, (q * k) % d)
                } else {
                    linalg::ZERO
                }
            }));
        }
    }
    Ok(EncodingEnsemble {
        dim: d,
        unitaries,
        prior: vec![1.0 / (d * d) as f64; d * d],
    })
}

/// Gram matrix `(1/d) Tr U_a† U_b` of an ensemble and whether it is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalityReport {
    pub gram: CMatrix,
    pub max_deviation: f64,
    pub orthonormal: bool,
}

pub fn verify_orthogonality(e: &EncodingEnsemble) -> OrthogonalityReport {
    let n = e.len();
    let d = e.dim() as f64;
    let gram = CMatrix::from_fn(n, n, |a, b| {
        // Tr(U_a† U_b) = sum_ij conj(U_a[i,j]) U_b[i,j]
        e.unitaries[a]
            .iter()
            .zip(e.unitaries[b].iter())
            .map(|(x, y)| x.conj() * y)
            .sum::<num_complex::Complex64>()
            / d
    });
    let max_deviation = linalg::max_abs_entry(&(&gram - linalg::identity(n)));
    OrthogonalityReport {
        orthonormal: max_deviation <= GRAM_TOL,
        gram,
        max_deviation,
    }
}

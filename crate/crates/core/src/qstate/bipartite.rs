use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{check_dim, partial_trace_matrix, DensityMatrix};
use crate::encodings::gellmann_basis;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

/// One side of a bipartite split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

/// A joint state `rho_AB` together with its marginals and correlation tensor.
///
/// The correlation tensor `gamma` is defined through
///
/// ```text
/// rho_AB = rho_A ⊗ rho_B + sum_cd gamma_cd L_c ⊗ L_d
/// ```
///
/// where `L_c`, `L_d` run over the traceless Hermitian bases returned by
/// [`gellmann_basis`] for each side (the Pauli matrices for qubits).
#[derive(Debug, Clone)]
pub struct BipartiteState {
    joint: DensityMatrix,
    dims: (usize, usize),
    reduced_a: DensityMatrix,
    reduced_b: DensityMatrix,
    gamma: DMatrix<f64>,
}

impl BipartiteState {
    pub fn new(joint: DensityMatrix, dims: (usize, usize)) -> Result<Self> {
        if dims.0 < 2 {
            return Err(Error::InvalidDimension(dims.0));
        }
        if dims.1 < 2 {
            return Err(Error::InvalidDimension(dims.1));
        }
        check_dim(dims.0 * dims.1, joint.dim())?;
        let reduced_a =
            DensityMatrix::from_trusted(partial_trace_matrix(joint.matrix(), dims, Subsystem::A));
        let reduced_b =
            DensityMatrix::from_trusted(partial_trace_matrix(joint.matrix(), dims, Subsystem::B));
        let gamma = correlation_tensor(joint.matrix(), &reduced_a, &reduced_b, dims);
        Ok(Self {
            joint,
            dims,
            reduced_a,
            reduced_b,
            gamma,
        })
    }

    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        Self::new(a.tensor(b), (a.dim(), b.dim()))
    }

    pub fn pure(psi: &CVector, dims: (usize, usize)) -> Result<Self> {
        Self::new(DensityMatrix::pure(psi)?, dims)
    }

    /// `sum_k |kk> / sqrt(d)`.
    pub fn maximally_entangled(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let mut psi = CVector::zeros(d * d);
        for k in 0..d {
            psi[k * d + k] = linalg::c(1.0, 0.0);
        }
        Self::pure(&psi, (d, d))
    }

    /// `(|00> + |11>) / sqrt 2`.
    pub fn bell() -> Self {
        Self::maximally_entangled(2).expect("d = 2 is valid")
    }

    /// `p |psi+><psi+| + (1 - p) 1/4` for `p` in [0, 1].
    pub fn werner(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidPrior(format!(
                "Werner weight {p} outside [0, 1]"
            )));
        }
        let joint = DensityMatrix::mixture(
            &[p, 1.0 - p],
            &[Self::bell().joint, DensityMatrix::maximally_mixed(4)?],
        )?;
        Self::new(joint, (2, 2))
    }

    pub fn joint(&self) -> &DensityMatrix {
        &self.joint
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn dim_of(&self, side: Subsystem) -> usize {
        match side {
            Subsystem::A => self.dims.0,
            Subsystem::B => self.dims.1,
        }
    }

    pub fn reduced(&self, side: Subsystem) -> &DensityMatrix {
        match side {
            Subsystem::A => &self.reduced_a,
            Subsystem::B => &self.reduced_b,
        }
    }

    pub fn reduced_a(&self) -> &DensityMatrix {
        &self.reduced_a
    }

    pub fn reduced_b(&self) -> &DensityMatrix {
        &self.reduced_b
    }

    /// Correlation coefficients, `(d_A^2 - 1) x (d_B^2 - 1)`.
    pub fn gamma(&self) -> &DMatrix<f64> {
        &self.gamma
    }

    /// Rebuilds `rho_AB` from the marginals and `gamma`.
    pub fn reconstruct(&self) -> CMatrix {
        let basis_a = gellmann_basis(self.dims.0).expect("validated dimension");
        let basis_b = gellmann_basis(self.dims.1).expect("validated dimension");
        let mut m = linalg::kron(self.reduced_a.matrix(), self.reduced_b.matrix());
        for (c, la) in basis_a.lambdas().iter().enumerate() {
            for (d, lb) in basis_b.lambdas().iter().enumerate() {
                let g = self.gamma[(c, d)];
                if g != 0.0 {
                    m += linalg::kron(la, lb).scale(g);
                }
            }
        }
        m
    }

    /// Applies `local` to one side: `(U ⊗ 1) rho (U ⊗ 1)†` or `(1 ⊗ U) rho (1 ⊗ U)†`.
    pub fn apply_local(&self, local: &CMatrix, side: Subsystem) -> Result<DensityMatrix> {
        check_dim(self.dim_of(side), local.nrows())?;
        self.joint.conjugate(&lift_local(local, self.dims, side))
    }
}

/// Embeds a one-sided operator into the joint space.
pub fn lift_local(local: &CMatrix, (da, db): (usize, usize), side: Subsystem) -> CMatrix {
    match side {
        Subsystem::A => linalg::kron(local, &linalg::identity(db)),
        Subsystem::B => linalg::kron(&linalg::identity(da), local),
    }
}

/// `gamma_cd = Tr[(L_c ⊗ L_d)(rho_AB - rho_A ⊗ rho_B)] / (d_A d_B)`.
fn correlation_tensor(
    joint: &CMatrix,
    a: &DensityMatrix,
    b: &DensityMatrix,
    dims: (usize, usize),
) -> DMatrix<f64> {
    let (da, db) = dims;
    let basis_a = gellmann_basis(da).expect("validated dimension");
    let basis_b = gellmann_basis(db).expect("validated dimension");
    let delta = joint - linalg::kron(a.matrix(), b.matrix());
    let norm = (da * db) as f64;
    let mut gamma = DMatrix::zeros(da * da - 1, db * db - 1);
    for (d, lb) in basis_b.lambdas().iter().enumerate() {
        // contracted[(i, j)] = sum_kl (L_d)_kl delta[(j,l),(i,k)]
        let contracted = CMatrix::from_fn(da, da, |i, j| {
            let mut acc = linalg::ZERO;
            for k in 0..db {
                for l in 0..db {
                    acc += lb[(k, l)] * delta[(j * db + l, i * db + k)];
                }
            }
            acc
        });
        for (c, la) in basis_a.lambdas().iter().enumerate() {
            let t: f64 = (0..da)
                .flat_map(|i| (0..da).map(move |j| (i, j)))
                .map(|(i, j)| (la[(i, j)] * contracted[(i, j)]).re)
                .sum();
            gamma[(c, d)] = t / norm;
        }
    }
    gamma
}

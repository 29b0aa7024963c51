use serde::{Deserialize, Serialize};

use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Bloch vector `v` of a qubit state `rho = (1 + v.sigma) / 2`, `|v| <= 1`.
///
/// Some texts write `rho = 1/2 + n.sigma` with `|n| <= 1/2`; that `n` is `v / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

const NORM_TOL: f64 = 1e-12;

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Self { x, y, z };
        if v.norm() > 1.0 + NORM_TOL {
            return Err(Error::BlochNormExceeded(v.norm()));
        }
        Ok(v)
    }

    pub fn from_array(v: [f64; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

impl std::ops::Neg for BlochVector {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

/// `(1 + v.sigma) / 2`.
pub fn from_bloch(v: BlochVector) -> Result<DensityMatrix> {
    if v.norm() > 1.0 + NORM_TOL {
        return Err(Error::BlochNormExceeded(v.norm()));
    }
    let m: CMatrix = (linalg::identity(2) + linalg::pauli_dot(v.to_array())).scale(0.5);
    Ok(DensityMatrix::from_trusted(m))
}

/// `v_k = Tr(rho sigma_k)`.
pub fn to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    super::check_dim(2, rho.dim())?;
    let m = rho.matrix();
    Ok(BlochVector {
        x: 2.0 * m[(0, 1)].re,
        y: 2.0 * m[(1, 0)].im,
        z: (m[(0, 0)] - m[(1, 1)]).re,
    })
}

//! Seeded random states, unitaries and frames for verification runs.
//!
//! All randomness in the crate flows through [`rng_for`]: a ChaCha8 generator
//! keyed by `seed` and positioned on stream `stream`. Independent work items
//! (protocol trials, optimizer restarts, verification samples) each take their
//! own stream index, so results do not depend on execution order.

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::encodings::OrthonormalFrame;
use crate::linalg::{self, c, CMatrix, CVector};
use crate::qstate::{BipartiteState, DensityMatrix};

pub type StreamRng = ChaCha8Rng;

/// Generator for `(seed, stream)`.
pub fn rng_for(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// `rows x cols` matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c(gaussian(rng), gaussian(rng)))
}

/// Uniformly random unit vector in `C^n`.
pub fn random_pure<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    let v = CVector::from_fn(n, |_, _| c(gaussian(rng), gaussian(rng)));
    let norm = v.norm();
    v.unscale(norm)
}

/// Induced-measure random state `G G† / Tr(G G†)` with `G` of shape `d x rank`.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R, d: usize, rank: usize) -> DensityMatrix {
    let g = ginibre(rng, d, rank.clamp(1, d));
    let m = &g * g.adjoint();
    let tr = linalg::trace(&m).re;
    DensityMatrix::from_trusted(m.unscale(tr))
}

/// Random joint state on `dims` with the given rank.
pub fn random_bipartite<R: Rng + ?Sized>(
    rng: &mut R,
    dims: (usize, usize),
    rank: usize,
) -> BipartiteState {
    let rho = random_density_matrix(rng, dims.0 * dims.1, rank);
    BipartiteState::new(rho, dims).expect("dims >= 2 and consistent")
}

/// Random joint state whose rank is itself uniform over `1..=d_A d_B`.
pub fn random_bipartite_any_rank<R: Rng + ?Sized>(
    rng: &mut R,
    dims: (usize, usize),
) -> BipartiteState {
    let n = dims.0 * dims.1;
    let rank = rng.random_range(1..=n);
    random_bipartite(rng, dims, rank)
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let qr = ginibre(rng, d, d).qr();
    let mut q = qr.q();
    let r = qr.r();
    // fix column phases so the distribution is Haar
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            linalg::ONE
        };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Uniformly random orthonormal frame; both handednesses occur.
pub fn random_frame<R: Rng + ?Sized>(rng: &mut R) -> OrthonormalFrame {
    let q = nalgebra::UnitQuaternion::from_quaternion(nalgebra::Quaternion::new(
        gaussian(rng),
        gaussian(rng),
        gaussian(rng),
        gaussian(rng),
    ));
    let mut m: Matrix3<f64> = q.to_rotation_matrix().into_inner();
    if rng.random_bool(0.5) {
        m.set_column(0, &(-Vector3::from(m.column(0))));
    }
    OrthonormalFrame::from_columns(&m).expect("rotation columns are orthonormal")
}

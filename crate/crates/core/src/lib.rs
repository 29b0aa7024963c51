//! Classical capacity of dense coding with noisy shared entanglement.
//!
//! Density matrices and bipartite states live in [`qstate`], unitary
//! encoding ensembles in [`encodings`], Holevo-bound capacities and the
//! prior optimizer in [`capacity`], the convex-roof correlation functional
//! in [`entanglement`] and Monte-Carlo protocol runs in [`protosim`].
//! All entropies are in bits.

pub mod capacity;
pub mod encodings;
pub mod entanglement;
pub mod error;
pub mod formats;
pub mod linalg;
pub mod protosim;
pub mod qstate;
pub mod sampling;

pub use error::{Error, Result};

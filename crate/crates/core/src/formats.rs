//! JSON wire formats for states, ensembles and reports.
//!
//! Complex matrices are written row-major as nested arrays of `[re, im]`
//! pairs. A state file holds one of
//!
//! ```text
//! {"dim": d, "matrix": [[[re, im], ...], ...], "dims": [d_A, d_B]}   // "dims" optional
//! {"bloch": [x, y, z]}
//! {"tensor": {"a": <state>, "b": <state>}}
//! ```
//!
//! and an ensemble file is `{"dim": d, "unitaries": [matrix, ...], "prior": [...]}`.

use serde::{Deserialize, Serialize};

use crate::capacity::CapacityReport;
use crate::encodings::EncodingEnsemble;
use crate::entanglement::RoofReport;
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, CVector};
use crate::qstate::{from_bloch, BipartiteState, BlochVector, DensityMatrix};

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &CMatrix) -> MatrixJson {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<CMatrix> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
        return Err(Error::NotSquare(n, bad.len()));
    }
    Ok(CMatrix::from_fn(n, cols, |i, j| {
        c(rows[i][j][0], rows[i][j][1])
    }))
}

pub fn vector_to_json(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Matrix {
        dim: usize,
        matrix: MatrixJson,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dims: Option<(usize, usize)>,
    },
    Bloch {
        bloch: [f64; 3],
    },
    Tensor {
        tensor: Box<TensorSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorSpec {
    pub a: StateSpec,
    pub b: StateSpec,
}

/// A decoded state and, when known, its bipartite split.
#[derive(Debug, Clone)]
pub struct ParsedState {
    pub state: DensityMatrix,
    pub dims: Option<(usize, usize)>,
}

impl ParsedState {
    /// The state as a bipartite state. Without an explicit split, a
    /// dimension `k^2` is read as `k ⊗ k`.
    pub fn bipartite(&self) -> Result<BipartiteState> {
        let dims = match self.dims {
            Some(dims) => dims,
            None => {
                let d = self.state.dim();
                let k = (d as f64).sqrt().round() as usize;
                if k < 2 || k * k != d {
                    return Err(Error::SplitMismatch {
                        len: d,
                        dims: (k, k),
                    });
                }
                (k, k)
            }
        };
        BipartiteState::new(self.state.clone(), dims)
    }
}

impl StateSpec {
    pub fn resolve(&self) -> Result<ParsedState> {
        match self {
            StateSpec::Matrix { dim, matrix, dims } => {
                let m = matrix_from_json(matrix)?;
                if m.nrows() != *dim {
                    return Err(Error::DimensionMismatch {
                        expected: *dim,
                        actual: m.nrows(),
                    });
                }
                let state = DensityMatrix::new(m)?;
                if let Some((da, db)) = dims {
                    if da * db != *dim {
                        return Err(Error::DimensionMismatch {
                            expected: *dim,
                            actual: da * db,
                        });
                    }
                }
                Ok(ParsedState { state, dims: *dims })
            }
            StateSpec::Bloch { bloch } => Ok(ParsedState {
                state: from_bloch(BlochVector::from_array(*bloch)?)?,
                dims: None,
            }),
            StateSpec::Tensor { tensor } => {
                let a = tensor.a.resolve()?.state;
                let b = tensor.b.resolve()?.state;
                Ok(ParsedState {
                    dims: Some((a.dim(), b.dim())),
                    state: a.tensor(&b),
                })
            }
        }
    }

    pub fn from_state(state: &DensityMatrix, dims: Option<(usize, usize)>) -> Self {
        StateSpec::Matrix {
            dim: state.dim(),
            matrix: matrix_to_json(state.matrix()),
            dims,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub dim: usize,
    pub unitaries: Vec<MatrixJson>,
    pub prior: Vec<f64>,
}

impl EnsembleSpec {
    pub fn resolve(&self) -> Result<EncodingEnsemble> {
        let unitaries = self
            .unitaries
            .iter()
            .map(matrix_from_json)
            .collect::<Result<Vec<_>>>()?;
        let e = EncodingEnsemble::new(unitaries, self.prior.clone())?;
        if e.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: e.dim(),
            });
        }
        Ok(e)
    }
}

impl From<&EncodingEnsemble> for EnsembleSpec {
    fn from(e: &EncodingEnsemble) -> Self {
        Self {
            dim: e.dim(),
            unitaries: e.unitaries().iter().map(matrix_to_json).collect(),
            prior: e.prior().to_vec(),
        }
    }
}

/// `{chi, prior, iterations, converged}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityRecord {
    pub chi: f64,
    pub prior: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl From<&CapacityReport> for CapacityRecord {
    fn from(r: &CapacityReport) -> Self {
        Self {
            chi: r.chi,
            prior: r.optimal_prior.clone(),
            iterations: r.iterations,
            converged: r.converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionRecord {
    pub weights: Vec<f64>,
    pub vectors: Vec<Vec<[f64; 2]>>,
}

/// `{value, decomposition: {weights, vectors}, restarts_used, converged}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoofRecord {
    pub value: f64,
    pub upper_bound: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionRecord>,
    pub restarts_used: usize,
    pub converged: bool,
}

impl RoofRecord {
    pub fn new(r: &RoofReport, with_decomposition: bool) -> Self {
        let decomposition = with_decomposition.then(|| DecompositionRecord {
            weights: r.decomposition.weights().to_vec(),
            vectors: r
                .decomposition
                .vectors()
                .iter()
                .map(vector_to_json)
                .collect(),
        });
        Self {
            value: r.value,
            upper_bound: r.is_upper_bound(),
            decomposition,
            restarts_used: r.restarts_used,
            converged: r.converged,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::weyl_set;
    use crate::linalg;

    #[test]
    fn parses_each_state_form() {
        let matrix: StateSpec = serde_json::from_str(
            r#"{"dim": 2, "matrix": [[[0.5, 0], [0, -0.25]], [[0, 0.25], [0.5, 0]]]}"#,
        )
        .unwrap();
        let parsed = matrix.resolve().unwrap();
        assert_eq!(parsed.state.dim(), 2);
        assert_eq!(parsed.state.matrix()[(0, 1)], c(0.0, -0.25));

        let bloch: StateSpec = serde_json::from_str(r#"{"bloch": [0, 0, 1]}"#).unwrap();
        let north = bloch.resolve().unwrap().state;
        assert!(north.distance(&DensityMatrix::diagonal(&[1.0, 0.0]).unwrap()) < 1e-15);

        let tensor: StateSpec = serde_json::from_str(
            r#"{"tensor": {"a": {"bloch": [0, 0, 1]}, "b": {"bloch": [0, 0, 0]}}}"#,
        )
        .unwrap();
        let parsed = tensor.resolve().unwrap();
        assert_eq!(parsed.dims, Some((2, 2)));
        let s = parsed.bipartite().unwrap();
        assert!(s.reduced_a().distance(&north) < 1e-15);
    }

    #[test]
    fn state_round_trip_and_split_inference() {
        let bell = crate::qstate::BipartiteState::bell();
        let spec = StateSpec::from_state(bell.joint(), None);
        let text = serde_json::to_string(&spec).unwrap();
        let back: StateSpec = serde_json::from_str(&text).unwrap();
        let parsed = back.resolve().unwrap();
        assert!(parsed.state.distance(bell.joint()) == 0.0);
        assert_eq!(parsed.bipartite().unwrap().dims(), (2, 2));

        let qutrit = ParsedState {
            state: DensityMatrix::maximally_mixed(3).unwrap(),
            dims: None,
        };
        assert!(qutrit.bipartite().is_err());
    }

    #[test]
    fn invalid_states_are_rejected() {
        let bad_trace: StateSpec =
            serde_json::from_str(r#"{"dim": 2, "matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}"#)
                .unwrap();
        assert!(matches!(bad_trace.resolve(), Err(Error::InvalidTrace(_))));
        let ragged: StateSpec =
            serde_json::from_str(r#"{"dim": 2, "matrix": [[[1, 0]], [[0, 0], [0, 0]]]}"#).unwrap();
        assert!(ragged.resolve().is_err());
        let wrong_dim: StateSpec =
            serde_json::from_str(r#"{"dim": 3, "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}"#)
                .unwrap();
        assert!(matches!(
            wrong_dim.resolve(),
            Err(Error::DimensionMismatch { .. })
        ));
        let long: StateSpec = serde_json::from_str(r#"{"bloch": [1, 1, 0]}"#).unwrap();
        assert!(matches!(long.resolve(), Err(Error::BlochNormExceeded(_))));
    }

    #[test]
    fn ensemble_round_trip() {
        let e = weyl_set(3).unwrap();
        let text = serde_json::to_string(&EnsembleSpec::from(&e)).unwrap();
        let back: EnsembleSpec = serde_json::from_str(&text).unwrap();
        let e2 = back.resolve().unwrap();
        for (u, v) in e.unitaries().iter().zip(e2.unitaries()) {
            assert!(linalg::max_abs_entry(&(u - v)) == 0.0);
        }
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["dim"], 3);
        assert_eq!(value["unitaries"].as_array().unwrap().len(), 9);
    }
}

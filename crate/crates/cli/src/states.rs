//! Named states and file loading.

use std::fs;
use std::path::Path;

use densecap::encodings::{
    antipodal_pair, canonical_qubit_set, weyl_set, EncodingEnsemble, OrthonormalFrame,
};
use densecap::formats::{EnsembleSpec, StateSpec};
use densecap::protosim::ClassicalJointState;
use densecap::qstate::{from_bloch, BipartiteState, BlochVector, DensityMatrix};
use serde::de::DeserializeOwned;

use crate::error::CliError;

#[derive(Debug, Clone)]
pub enum Loaded {
    Single(DensityMatrix),
    Joint(BipartiteState),
}

impl Loaded {
    pub fn into_joint(self, spec: &str) -> Result<BipartiteState, CliError> {
        match self {
            Loaded::Joint(s) => Ok(s),
            Loaded::Single(rho) => Err(CliError::Parse(format!(
                "{spec}: a single {}-level system, expected a bipartite state",
                rho.dim()
            ))),
        }
    }
}

fn number<T: std::str::FromStr>(text: &str, what: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    text.trim()
        .parse()
        .map_err(|e| CliError::Parse(format!("{what} {text:?}: {e}")))
}

fn numbers(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',').map(|x| number(x, what)).collect()
}

/// `p |Phi_d><Phi_d| + (1 - p) 1/d^2`; for `d = 2` this is the Werner state.
pub fn isotropic(d: usize, p: f64) -> Result<BipartiteState, CliError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(
            densecap::Error::InvalidPrior(format!("mixing parameter {p} outside [0, 1]")).into(),
        );
    }
    let entangled = BipartiteState::maximally_entangled(d)?;
    let noise = DensityMatrix::maximally_mixed(d * d)?;
    let joint = DensityMatrix::mixture(&[p, 1.0 - p], &[entangled.joint().clone(), noise])?;
    Ok(BipartiteState::new(joint, (d, d))?)
}

fn named(spec: &str) -> Result<Option<Loaded>, CliError> {
    let (name, arg) = match spec.split_once(':') {
        Some((name, arg)) => (name, Some(arg)),
        None => (spec, None),
    };
    let need = |example: &str| CliError::Parse(format!("{name} needs a parameter, e.g. {example}"));
    let state = match (name, arg) {
        ("bell", None) => Loaded::Joint(BipartiteState::bell()),
        ("werner", Some(p)) => {
            Loaded::Joint(BipartiteState::werner(number(p, "werner parameter")?)?)
        }
        ("werner", None) => return Err(need("werner:0.5")),
        ("isotropic", Some(rest)) => {
            let (d, p) = rest
                .split_once(':')
                .ok_or_else(|| need("isotropic:3:0.5"))?;
            Loaded::Joint(isotropic(
                number(d, "dimension")?,
                number(p, "isotropic parameter")?,
            )?)
        }
        ("isotropic", None) => return Err(need("isotropic:3:0.5")),
        ("max-entangled", Some(d)) => Loaded::Joint(BipartiteState::maximally_entangled(number(
            d,
            "dimension",
        )?)?),
        ("max-entangled", None) => return Err(need("max-entangled:3")),
        ("bloch", Some(v)) => {
            let v = numbers(v, "Bloch component")?;
            let [x, y, z] = v.as_slice() else {
                return Err(CliError::Parse("bloch takes three components x,y,z".into()));
            };
            Loaded::Single(from_bloch(BlochVector::new(*x, *y, *z)?)?)
        }
        ("bloch", None) => return Err(need("bloch:0,0,1")),
        ("mixed", Some(d)) => {
            Loaded::Single(DensityMatrix::maximally_mixed(number(d, "dimension")?)?)
        }
        ("mixed", None) => return Err(need("mixed:2")),
        _ => return Ok(None),
    };
    Ok(Some(state))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::FileNotFound(path.to_path_buf()),
        _ => CliError::Io(e),
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// A named state, or else a JSON state file. A file state whose dimension
/// is a square `k^2` and carries no `"dims"` is split as `k ⊗ k`.
pub fn load(spec: &str) -> Result<Loaded, CliError> {
    if let Some(state) = named(spec)? {
        return Ok(state);
    }
    let parsed = read_json::<StateSpec>(Path::new(spec))?.resolve()?;
    if parsed.dims.is_some() {
        return Ok(Loaded::Joint(parsed.bipartite()?));
    }
    let d = parsed.state.dim();
    let k = (d as f64).sqrt().round() as usize;
    if k >= 2 && k * k == d {
        Ok(Loaded::Joint(parsed.bipartite()?))
    } else {
        Ok(Loaded::Single(parsed.state))
    }
}

pub fn load_joint(spec: &str) -> Result<BipartiteState, CliError> {
    load(spec)?.into_joint(spec)
}

/// A one-parameter family for sweeps.
#[derive(Debug, Clone, Copy)]
pub enum Family {
    Werner,
    Isotropic(usize),
}

impl Family {
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        match spec.split_once(':') {
            None if spec == "werner" => Ok(Family::Werner),
            Some(("isotropic", d)) => Ok(Family::Isotropic(number(d, "dimension")?)),
            _ => Err(CliError::Parse(format!(
                "{spec:?} is not a sweepable family (werner, isotropic:d)"
            ))),
        }
    }

    pub fn at(self, p: f64) -> Result<BipartiteState, CliError> {
        match self {
            Family::Werner => Ok(BipartiteState::werner(p)?),
            Family::Isotropic(d) => isotropic(d, p),
        }
    }
}

pub fn load_classical(spec: &str) -> Result<ClassicalJointState, CliError> {
    match spec.split_once(':') {
        None if spec == "correlated" => Ok(ClassicalJointState::maximally_correlated()),
        None if spec == "uncorrelated" => Ok(ClassicalJointState::uncorrelated()),
        Some(("classical", p)) => {
            let p = numbers(p, "probability")?;
            let [p00, p01, p10, p11] = p.as_slice() else {
                return Err(CliError::Parse("classical takes four probabilities p00,p01,p10,p11".into()));
            };
            Ok(ClassicalJointState::new([[*p00, *p01], [*p10, *p11]])?)
        }
        _ => Err(CliError::Parse(format!(
            "{spec:?} is not a classical state (correlated, uncorrelated, classical:p00,p01,p10,p11)"
        ))),
    }
}

/// `auto` picks the canonical qubit set for `d = 2` and the Weyl set otherwise.
pub fn load_ensemble(spec: &str, d: usize) -> Result<(String, EncodingEnsemble), CliError> {
    let qubits_only = |name: &str| {
        if d == 2 {
            Ok(())
        } else {
            Err(CliError::Parse(format!(
                "ensemble {name} is only defined for qubits"
            )))
        }
    };
    let ensemble = match spec {
        "auto" if d == 2 => return load_ensemble("canonical", d),
        "auto" => return load_ensemble("weyl", d),
        "canonical" => {
            qubits_only(spec)?;
            canonical_qubit_set(&OrthonormalFrame::standard())
        }
        "weyl" => weyl_set(d)?,
        "pair" => {
            qubits_only(spec)?;
            antipodal_pair(BlochVector::new(0.0, 0.0, 1.0)?)?
        }
        path => {
            let e = read_json::<EnsembleSpec>(Path::new(path))?.resolve()?;
            if e.dim() != d {
                return Err(densecap::Error::DimensionMismatch {
                    expected: d,
                    actual: e.dim(),
                }
                .into());
            }
            e
        }
    };
    Ok((spec.to_string(), ensemble))
}

#[cfg(test)]
mod tests {
    use super::*;
    use densecap::linalg;

    #[test]
    fn named_states() {
        assert!(matches!(load("bell").unwrap(), Loaded::Joint(s) if s.dims() == (2, 2)));
        assert!(matches!(load("max-entangled:3").unwrap(), Loaded::Joint(s) if s.dims() == (3, 3)));
        assert!(matches!(load("bloch:0,0,1").unwrap(), Loaded::Single(r) if r.dim() == 2));
        assert!(matches!(load("mixed:3").unwrap(), Loaded::Single(r) if r.dim() == 3));
        let w = load_joint("werner:0.3").unwrap();
        let iso = isotropic(2, 0.3).unwrap();
        assert!(linalg::max_abs_entry(&(w.joint().matrix() - iso.joint().matrix())) < 1e-15);
    }

    #[test]
    fn malformed_names_are_parse_errors() {
        for spec in [
            "werner",
            "werner:x",
            "bloch:1,2",
            "isotropic:3",
            "max-entangled:q",
        ] {
            assert!(matches!(load(spec), Err(CliError::Parse(_))), "{spec}");
        }
        assert!(matches!(load("werner:1.5"), Err(CliError::InvalidState(_))));
        assert!(matches!(
            load("bloch:1,1,1"),
            Err(CliError::InvalidState(_))
        ));
        assert!(matches!(
            load("no/such/file.json"),
            Err(CliError::FileNotFound(_))
        ));
        assert!(matches!(load_joint("bloch:0,0,1"), Err(CliError::Parse(_))));
    }

    #[test]
    fn families_and_ensembles() {
        assert!(matches!(Family::parse("werner").unwrap(), Family::Werner));
        assert!(matches!(
            Family::parse("isotropic:3").unwrap(),
            Family::Isotropic(3)
        ));
        assert!(Family::parse("bell").is_err());
        assert_eq!(load_ensemble("auto", 2).unwrap().1.len(), 4);
        assert_eq!(load_ensemble("auto", 3).unwrap().1.len(), 9);
        assert_eq!(load_ensemble("pair", 2).unwrap().1.len(), 2);
        assert!(matches!(
            load_ensemble("canonical", 3),
            Err(CliError::Parse(_))
        ));
        assert!(load_classical("classical:0.5,0,0,0.5").is_ok());
        assert!(matches!(
            load_classical("classical:0.5,0,0,0.6"),
            Err(CliError::InvalidState(_))
        ));
    }
}

//! File formats.
//!
//! States: `{"n": 3, "coeffs": [[re, im], ...]}` with coefficients in index
//! order. Densities: `{"n": 3, "rho": [[[re, im], ...], ...]}` row-major.
//! Chain parameters: `{"omega": [400, 200, 100], "J": 10, "Jp": 0.4,
//! "gamma": [0.05, 0.05, 0.05]}`.
//!
//! CSV emitters write a header row and shortest round-trip float formatting,
//! so identical inputs produce byte-identical files.

use std::fs;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::ObservableSeries;
use crate::factorization::ConditionSet;
use crate::statevec::{DensityMatrix, PureState, StateError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid data: {0}")]
    State(#[from] StateError),
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    n: usize,
    coeffs: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct DensityFile {
    n: usize,
    rho: Vec<Vec<[f64; 2]>>,
}

pub fn state_to_json(state: &PureState) -> String {
    let file = StateFile {
        n: state.n_qubits(),
        coeffs: state.coeffs().iter().map(|c| [c.re, c.im]).collect(),
    };
    serde_json::to_string_pretty(&file).expect("state serializes")
}

pub fn state_from_json(text: &str) -> Result<PureState, IoError> {
    let file: StateFile = serde_json::from_str(text)?;
    let coeffs = file
        .coeffs
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    Ok(PureState::new(file.n, coeffs)?)
}

pub fn read_state(path: &Path) -> Result<PureState, IoError> {
    state_from_json(&fs::read_to_string(path)?)
}

pub fn write_state(path: &Path, state: &PureState) -> Result<(), IoError> {
    Ok(fs::write(path, state_to_json(state))?)
}

pub fn density_to_json(rho: &DensityMatrix) -> String {
    let file = DensityFile {
        n: rho.n_qubits(),
        rho: (0..rho.dim())
            .map(|n| {
                (0..rho.dim())
                    .map(|m| {
                        let z = rho.elem(n, m);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("density serializes")
}

pub fn density_from_json(text: &str) -> Result<DensityMatrix, IoError> {
    let file: DensityFile = serde_json::from_str(text)?;
    // range-check before sizing anything by 2^n
    if !(1..=crate::statevec::MAX_QUBITS).contains(&file.n) {
        return Err(StateError::UnsupportedQubitCount { n: file.n }.into());
    }
    let dim = 1usize << file.n;
    let mut elems = Array2::zeros((dim, dim));
    if file.rho.len() != dim || file.rho.iter().any(|row| row.len() != dim) {
        return Err(StateError::DimensionMismatch {
            n_qubits: file.n,
            expected: dim,
            actual: file.rho.len(),
        }
        .into());
    }
    for (n, row) in file.rho.iter().enumerate() {
        for (m, [re, im]) in row.iter().enumerate() {
            elems[(n, m)] = Complex64::new(*re, *im);
        }
    }
    Ok(DensityMatrix::try_new(file.n, elems)?)
}

pub fn read_density(path: &Path) -> Result<DensityMatrix, IoError> {
    density_from_json(&fs::read_to_string(path)?)
}

pub fn write_density(path: &Path, rho: &DensityMatrix) -> Result<(), IoError> {
    Ok(fs::write(path, density_to_json(rho))?)
}

pub fn params_from_json(text: &str) -> Result<crate::dynamics::ChainParams, IoError> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_params(path: &Path) -> Result<crate::dynamics::ChainParams, IoError> {
    params_from_json(&fs::read_to_string(path)?)
}

/// Condition-set export: `n,i,j,k,l,provenance`.
pub fn conditions_csv(set: &ConditionSet) -> String {
    let mut out = String::from("n,i,j,k,l,provenance\n");
    for cond in set.iter() {
        let (i, j, k, l) = cond.indices();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            set.n_qubits(),
            i,
            j,
            k,
            l,
            set.provenance().as_str()
        ));
    }
    out
}

/// Trajectory export: `t,c3_rho,purity,rho11,...,rho88`.
pub fn trajectory_csv(series: &ObservableSeries) -> String {
    let mut out = String::from("t,c3_rho,purity,rho11,rho22,rho33,rho44,rho55,rho66,rho77,rho88\n");
    for (idx, t) in series.times.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{}",
            t, series.c3_rho[idx], series.purity[idx]
        ));
        for p in series.populations[idx] {
            out.push_str(&format!(",{p}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::paper_conditions;
    use crate::statevec::random_pure_state;

    #[test]
    fn state_json_round_trip() {
        let state = random_pure_state(3, 11);
        let text = state_to_json(&state);
        let back = state_from_json(&text).unwrap();
        assert_eq!(back.n_qubits(), 3);
        for (a, b) in state.coeffs().iter().zip(back.coeffs()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn density_json_round_trip() {
        let rho = random_pure_state(2, 5).density();
        let back = density_from_json(&density_to_json(&rho)).unwrap();
        for n in 0..4 {
            for m in 0..4 {
                assert!((rho.elem(n, m) - back.elem(n, m)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(state_from_json("{\"n\": 2, \"coeffs\": [[1.0, 0.0]]").is_err());
        assert!(state_from_json("{\"n\": 2, \"coeffs\": [[1.0, 0.0]]}").is_err());
        assert!(density_from_json("{\"n\": 1, \"rho\": [[[1.0, 0.0]]]}").is_err());
        // absurd register sizes are rejected before any 2^n allocation
        assert!(state_from_json("{\"n\": 60, \"coeffs\": [[1.0, 0.0]]}").is_err());
        assert!(density_from_json("{\"n\": 60, \"rho\": [[[1.0, 0.0]]]}").is_err());
    }

    #[test]
    fn params_json_matches_documented_keys() {
        let p = params_from_json(
            "{\"omega\": [400, 200, 100], \"J\": 10, \"Jp\": 0.4, \"gamma\": [0.05, 0.05, 0.05]}",
        )
        .unwrap();
        assert_eq!(p, crate::dynamics::ChainParams::default());
    }

    #[test]
    fn conditions_csv_shape() {
        let csv = conditions_csv(&paper_conditions(2).unwrap());
        assert_eq!(csv, "n,i,j,k,l,provenance\n2,1,4,2,3,paper\n");
    }
}

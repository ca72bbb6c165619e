// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

//! JSON problem files.
//!
//! ```json
//! { "n": 2,
//!   "pairs": [ { "in": [[1,0],[0,0],[0,0],[0,0]], "out": [[1,0],[0,0],[0,0],[0,0]] } ],
//!   "coupling": [[0, 1]] }
//! ```

use std::path::Path;

use msprep_core::{Complex64, ConnectivityGraph, StateSystem, StateVector};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    pub pairs: Vec<PairFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<Vec<[usize; 2]>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairFile {
    #[serde(rename = "in")]
    pub input: Vec<[f64; 2]>,
    pub out: Vec<[f64; 2]>,
}

/// A validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub system: StateSystem,
    pub coupling: Option<ConnectivityGraph>,
}

pub fn amplitudes_to_json(s: &StateVector) -> Vec<[f64; 2]> {
    s.amps().iter().map(|z| [z.re, z.im]).collect()
}

pub(crate) fn state_from_json(amps: &[[f64; 2]], n: usize, field: &str) -> Result<StateVector, CliError> {
    let expected = 1usize << n;
    if amps.len() != expected {
        return Err(CliError::Input(format!("{field}: expected {expected} amplitudes for n = {n}, got {}", amps.len())));
    }
    StateVector::new(amps.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .map_err(|e| CliError::Input(format!("{field}: {e}")))
}

impl ProblemFile {
    pub fn from_system(sys: &StateSystem, coupling: Option<&ConnectivityGraph>) -> Self {
        Self {
            n: sys.num_qubits(),
            pairs: sys
                .pairs()
                .iter()
                .map(|(v, w)| PairFile { input: amplitudes_to_json(v), out: amplitudes_to_json(w) })
                .collect(),
            coupling: coupling.map(|g| g.edges().map(|(a, b)| [a, b]).collect()),
        }
    }

    pub fn validate(&self) -> Result<Problem, CliError> {
        if self.n == 0 || self.n > 16 {
            return Err(CliError::Input(format!("n: must be in 1..=16, got {}", self.n)));
        }
        let pairs = self
            .pairs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                Ok((
                    state_from_json(&p.input, self.n, &format!("pairs[{i}].in"))?,
                    state_from_json(&p.out, self.n, &format!("pairs[{i}].out"))?,
                ))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let system = StateSystem::new(pairs).map_err(|e| CliError::Input(format!("pairs: {e}")))?;
        let coupling = self
            .coupling
            .as_ref()
            .map(|edges| {
                let edges: Vec<(usize, usize)> = edges.iter().map(|&[a, b]| (a, b)).collect();
                ConnectivityGraph::new(self.n, &edges).map_err(|e| CliError::Input(format!("coupling: {e}")))
            })
            .transpose()?;
        Ok(Problem { system, coupling })
    }
}

pub fn parse_problem(text: &str) -> Result<Problem, CliError> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("problem file: {e}")))?;
    file.validate()
}

pub fn load_problem(path: &Path) -> Result<Problem, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_problem(&text).map_err(|e| match e {
        CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Parse `"0-1,1-2"` into edges.
pub fn parse_coupling(spec: &str, n: usize) -> Result<ConnectivityGraph, CliError> {
    let edges = spec
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|e| {
            let (a, b) = e
                .split_once('-')
                .ok_or_else(|| CliError::Input(format!("--coupling: edge '{e}' is not of the form a-b")))?;
            let q = |s: &str| {
                s.trim().parse::<usize>().map_err(|_| CliError::Input(format!("--coupling: bad qubit '{s}'")))
            };
            Ok((q(a)?, q(b)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    ConnectivityGraph::new(n, &edges).map_err(|e| CliError::Input(format!("--coupling: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_json() {
        let sys = StateSystem::new(vec![(
            StateVector::basis(1, 0).unwrap(),
            StateVector::new(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).unwrap(),
        )])
        .unwrap();
        let text = serde_json::to_string(&ProblemFile::from_system(&sys, None)).unwrap();
        let back = parse_problem(&text).unwrap();
        assert_eq!(back.system.pairs(), sys.pairs());
        assert!(back.coupling.is_none());
    }

    #[test]
    fn reports_field_of_bad_length() {
        let text = r#"{"n": 1, "pairs": [{"in": [[1,0],[0,0]], "out": [[1,0]]}]}"#;
        let err = parse_problem(text).unwrap_err().to_string();
        assert!(err.contains("pairs[0].out"), "{err}");
    }

    #[test]
    fn reports_position_of_syntax_error() {
        let err = parse_problem("{\n \"n\": 1,\n \"pairs\": [").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn rejects_unknown_fields_and_unnormalized() {
        assert!(parse_problem(r#"{"n": 1, "pairs": [], "extra": 1}"#).is_err());
        let text = r#"{"n": 1, "pairs": [{"in": [[1,0],[1,0]], "out": [[1,0],[0,0]]}]}"#;
        assert!(parse_problem(text).unwrap_err().to_string().contains("pairs[0].in"));
    }

    #[test]
    fn coupling_spec() {
        let g = parse_coupling("0-1, 1-2", 3).unwrap();
        assert!(g.contains(1, 0) && !g.contains(0, 2));
        assert!(parse_coupling("0:1", 3).is_err());
        assert!(parse_coupling("0-5", 3).is_err());
    }
}

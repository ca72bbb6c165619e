// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

//! Parameterized circuits.
//!
//! A [`Circuit`] is a template: an ordered gate list whose continuous
//! parameters live in a flat vector owned by the caller. The same template
//! can therefore be evaluated at many parameter points at once.

mod gates;
mod qasm;
mod sim;

use std::collections::{BTreeMap, BTreeSet};

pub use gates::{derivative, matrix, GateKind, Mat2};
pub use qasm::{emit_qasm, parse_qasm};
pub use sim::{apply, apply_columns, unitary_jacobian, unitary_of};
pub(crate) use sim::{apply_1q_adjoint, apply_cnot, env_1q};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacedGate {
    pub kind: GateKind,
    /// One qubit for rotations, `[control, target]` for CNOT.
    pub qubits: Vec<usize>,
    pub param_offset: usize,
}

impl PlacedGate {
    pub fn params<'a>(&self, all: &'a [f64]) -> &'a [f64] {
        &all[self.param_offset..self.param_offset + self.kind.num_params()]
    }
}

/// Undirected coupling graph restricting where CNOTs may be placed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityGraph {
    num_qubits: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl ConnectivityGraph {
    pub fn new(num_qubits: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop on qubit {a}")));
            }
            if a >= num_qubits || b >= num_qubits {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a}, {b}) outside {num_qubits} qubits"
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self { num_qubits, edges: set })
    }

    /// All-to-all connectivity.
    pub fn complete(num_qubits: usize) -> Self {
        let edges = (0..num_qubits)
            .flat_map(|a| (a + 1..num_qubits).map(move |b| (a, b)))
            .collect();
        Self { num_qubits, edges }
    }

    /// Nearest-neighbour chain `0 − 1 − … − (n−1)`.
    pub fn linear(num_qubits: usize) -> Self {
        let edges = (1..num_qubits).map(|b| (b - 1, b)).collect();
        Self { num_qubits, edges }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Edges as `(low, high)` pairs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Subgraph induced on `qubits`, relabelled `0..qubits.len()`.
    pub fn induced(&self, qubits: &[usize]) -> Self {
        let edges = (0..qubits.len())
            .flat_map(|i| (i + 1..qubits.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| self.contains(qubits[i], qubits[j]))
            .collect();
        Self { num_qubits: qubits.len(), edges }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<PlacedGate>,
    num_params: usize,
    coupling: Option<ConnectivityGraph>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, gates: Vec::new(), num_params: 0, coupling: None }
    }

    /// Empty circuit whose CNOTs must lie on edges of `coupling`.
    pub fn with_coupling(coupling: ConnectivityGraph) -> Self {
        Self { num_qubits: coupling.num_qubits(), gates: Vec::new(), num_params: 0, coupling: Some(coupling) }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn gates(&self) -> &[PlacedGate] {
        &self.gates
    }

    pub fn coupling(&self) -> Option<&ConnectivityGraph> {
        self.coupling.as_ref()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Append a gate; its parameters take the next free slots.
    pub fn push(&mut self, kind: GateKind, qubits: &[usize]) -> Result<&mut Self> {
        if qubits.len() != kind.num_qubits() {
            return Err(Error::InvalidGate(format!(
                "{kind:?} acts on {} qubits, got {}",
                kind.num_qubits(),
                qubits.len()
            )));
        }
        if let Some(&q) = qubits.iter().find(|&&q| q >= self.num_qubits) {
            return Err(Error::InvalidGate(format!("qubit {q} out of range for {} qubits", self.num_qubits)));
        }
        if kind == GateKind::Cnot {
            let (a, b) = (qubits[0], qubits[1]);
            if a == b {
                return Err(Error::InvalidGate(format!("CNOT control and target are both {a}")));
            }
            if let Some(g) = &self.coupling {
                if !g.contains(a, b) {
                    return Err(Error::InvalidGate(format!("CNOT ({a}, {b}) is not a coupling edge")));
                }
            }
        }
        self.gates.push(PlacedGate { kind, qubits: qubits.to_vec(), param_offset: self.num_params });
        self.num_params += kind.num_params();
        Ok(self)
    }

    pub fn u3(&mut self, q: usize) -> Result<&mut Self> {
        self.push(GateKind::U3, &[q])
    }

    pub fn rx(&mut self, q: usize) -> Result<&mut Self> {
        self.push(GateKind::Rx, &[q])
    }

    pub fn ry(&mut self, q: usize) -> Result<&mut Self> {
        self.push(GateKind::Ry, &[q])
    }

    pub fn rz(&mut self, q: usize) -> Result<&mut Self> {
        self.push(GateKind::Rz, &[q])
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        self.push(GateKind::Cnot, &[control, target])
    }

    /// Append `other` with its qubit `i` placed on `qubit_map[i]`.
    /// The appended parameters follow the existing ones.
    pub fn append_mapped(&mut self, other: &Circuit, qubit_map: &[usize]) -> Result<&mut Self> {
        if qubit_map.len() != other.num_qubits {
            return Err(Error::InvalidArgument(format!(
                "qubit map has {} entries for a {}-qubit circuit",
                qubit_map.len(),
                other.num_qubits
            )));
        }
        for g in &other.gates {
            let qubits: Vec<usize> = g.qubits.iter().map(|&q| qubit_map[q]).collect();
            self.push(g.kind, &qubits)?;
        }
        Ok(self)
    }

    /// Concatenation: `other` runs after `self`, on the same qubits.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        let identity: Vec<usize> = (0..other.num_qubits).collect();
        self.append_mapped(other, &identity)
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind == GateKind::Cnot).count()
    }

    /// Gate counts keyed by display name, e.g. `{"CNOTGate": 2, "U3Gate": 4}`.
    pub fn gate_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut counts = BTreeMap::new();
        for g in &self.gates {
            *counts.entry(g.kind.display_name()).or_insert(0) += 1;
        }
        counts
    }

    pub(crate) fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.num_params {
            return Err(Error::ParamCount { expected: self.num_params, found: params.len() });
        }
        Ok(())
    }
}

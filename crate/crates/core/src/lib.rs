// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

//! Circuit synthesis for multi-state preparation.
//!
//! Given input states `|v_i⟩` and output states `|w_i⟩` on `n` qubits, find a
//! circuit `U` with `U|v_i⟩ = |w_i⟩` for every pair. State preparation
//! (`m = 1`) and unitary synthesis (`m = 2^n`) are the two extreme cases.
//!
//! The crate is organised bottom-up:
//!
//! - [`states`]: state vectors, state systems, the Gram-matrix solvability
//!   test, orthonormalization and constructive unitary completion.
//! - [`circuit`]: parameterized circuits over `{RX, RY, RZ, U3, CNOT}`,
//!   simulation, parameter derivatives and OpenQASM 2.0 text.
//! - [`cost`]: the trace cost `1 - |Tr[U V W†]| / m` and its gradient.
//! - [`instantiate`]: multistart quasi-Newton fitting of a template.
//! - [`synth`]: best-first template search minimizing CNOT count.
//! - [`apps`]: cat-state circuits and block-restricted Hamiltonian evolution.
//!
//! Qubit 0 is the most significant bit of a basis index, so `|01⟩` is index 1
//! with qubit 0 in `|0⟩` and qubit 1 in `|1⟩`.

pub mod apps;
pub mod circuit;
pub mod cost;
mod error;
pub mod expm;
pub mod haar;
pub mod instantiate;
pub mod linalg;
pub mod optimize;
pub mod states;
pub mod synth;

pub use circuit::{Circuit, ConnectivityGraph, GateKind, PlacedGate};
pub use cost::{CostContext, CostGrad};
pub use error::{Error, Result};
pub use instantiate::{InstantiateConfig, InstantiateResult};
pub use linalg::Unitary;
pub use num_complex::Complex64;
pub use states::{GramMatrix, OrthonormalizedSystem, SolvabilityReport, StateSystem, StateVector};
pub use synth::{SynthConfig, SynthesisResult};

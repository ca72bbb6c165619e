// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::states::SolvabilityReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state vector length {0} is not a power of two of at least 2")]
    BadLength(usize),

    #[error("state vector norm {0} is too far from 1 to normalize")]
    NotNormalized(f64),

    #[error("state vector contains non-finite amplitudes")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid state system: {0}")]
    InvalidSystem(String),

    #[error("system is not solvable: Gram mismatch {:.6e} exceeds tolerance {:.3e}", .0.max_abs_mismatch, .0.tolerance_used)]
    Unsolvable(Box<SolvabilityReport>),

    #[error("overlap matrix is rank deficient (rank {rank} < {m}); refusing an unstable inverse")]
    RankDeficient { rank: usize, m: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid gate placement: {0}")]
    InvalidGate(String),

    #[error("expected {expected} parameters, got {found}")]
    ParamCount { expected: usize, found: usize },

    #[error("synthesis did not converge: {0}")]
    SynthesisFailed(String),

    #[error("qasm line {line}: {message}")]
    Qasm { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

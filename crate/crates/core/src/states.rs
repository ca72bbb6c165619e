// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

//! State vectors, state systems and the Gram-matrix analysis behind them.
//!
//! A [`StateSystem`] of `m` pairs `(|v_i⟩, |w_i⟩)` admits a unitary with
//! `U|v_i⟩ = |w_i⟩` for all `i` exactly when the overlap matrices agree,
//! `V†V = W†W`. [`check_solvable`] measures the mismatch, [`orthonormalize`]
//! diagonalizes the shared overlap matrix and [`complete_unitary`] builds one
//! explicit solution.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::linalg::{complete_orthonormal, hermitian_eigen, max_abs, Unitary, ONE, ZERO};
use crate::{Error, Result};

/// Inputs whose norm is within this distance of 1 are silently normalized.
pub const NORMALIZE_SLACK: f64 = 1e-6;

/// Default bound on `max |V†V − W†W|` for a system to count as solvable.
pub const DEFAULT_SOLVABILITY_TOLERANCE: f64 = 1e-8;

/// Default relative eigenvalue cutoff for [`orthonormalize`].
pub const DEFAULT_RANK_CUTOFF: f64 = 1e-10;

/// Residual below which a basis vector is skipped during unitary completion.
const COMPLETION_SKIP: f64 = 1e-8;

/// Normalized amplitude vector of an `n`-qubit pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: DVector<Complex64>,
}

impl StateVector {
    /// Build a state from raw amplitudes. The length fixes the qubit count.
    ///
    /// Vectors whose norm deviates from 1 by at most [`NORMALIZE_SLACK`] are
    /// rescaled; anything further off is rejected.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        Self::from_dvector(DVector::from_vec(amps))
    }

    pub fn from_dvector(amps: DVector<Complex64>) -> Result<Self> {
        let num_qubits = qubits_for_len(amps.len())?;
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORMALIZE_SLACK {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { num_qubits, amps: amps.unscale(norm) })
    }

    /// Real amplitudes, a convenience for fixtures.
    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis state `|index⟩` on `num_qubits` qubits.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits >= usize::BITS as usize {
            return Err(Error::InvalidArgument(format!("bad qubit count {num_qubits}")));
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = DVector::from_element(dim, ZERO);
        amps[index] = ONE;
        Ok(Self { num_qubits, amps })
    }

    /// Wraps amplitudes produced by a norm-preserving operation.
    pub(crate) fn from_unitary_image(num_qubits: usize, amps: DVector<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << num_qubits);
        Self { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &DVector<Complex64> {
        &self.amps
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.dotc(&other.amps)
    }

    /// Euclidean distance `‖self − other‖`, phase included.
    pub fn distance(&self, other: &StateVector) -> f64 {
        (&self.amps - &other.amps).norm()
    }

    /// Tensor product `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let amps = self.amps.kronecker(&other.amps);
        Self { num_qubits: self.num_qubits + other.num_qubits, amps }
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::BadLength(len));
    }
    Ok(len.trailing_zeros() as usize)
}

/// Ordered list of `(input, output)` pairs on a common number of qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSystem {
    num_qubits: usize,
    pairs: Vec<(StateVector, StateVector)>,
}

impl StateSystem {
    pub fn new(pairs: Vec<(StateVector, StateVector)>) -> Result<Self> {
        let Some((first, _)) = pairs.first() else {
            return Err(Error::InvalidSystem("a system needs at least one pair".into()));
        };
        let num_qubits = first.num_qubits();
        for (i, (v, w)) in pairs.iter().enumerate() {
            for s in [v, w] {
                if s.num_qubits() != num_qubits {
                    return Err(Error::InvalidSystem(format!(
                        "pair {i} has {} qubits, expected {num_qubits}",
                        s.num_qubits()
                    )));
                }
            }
        }
        if pairs.len() > 1usize << num_qubits {
            return Err(Error::InvalidSystem(format!(
                "{} pairs exceed the dimension 2^{num_qubits}",
                pairs.len()
            )));
        }
        Ok(Self { num_qubits, pairs })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    /// Number of pairs `m`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(StateVector, StateVector)] {
        &self.pairs
    }

    pub fn inputs(&self) -> impl Iterator<Item = &StateVector> {
        self.pairs.iter().map(|(v, _)| v)
    }

    pub fn outputs(&self) -> impl Iterator<Item = &StateVector> {
        self.pairs.iter().map(|(_, w)| w)
    }

    /// `V`: the inputs as columns of a `2^n × m` matrix.
    pub fn v_matrix(&self) -> DMatrix<Complex64> {
        columns(self.inputs())
    }

    /// `W`: the outputs as columns of a `2^n × m` matrix.
    pub fn w_matrix(&self) -> DMatrix<Complex64> {
        columns(self.outputs())
    }
}

fn columns<'a>(states: impl Iterator<Item = &'a StateVector>) -> DMatrix<Complex64> {
    let cols: Vec<_> = states.map(|s| s.amps.clone()).collect();
    DMatrix::from_columns(&cols)
}

/// Overlap matrix `O_ij = ⟨s_i|s_j⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix(DMatrix<Complex64>);

impl GramMatrix {
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigen(&self.0).0.last().copied().unwrap_or(0.0)
    }
}

/// Gram matrix of a list of states on a common qubit count.
pub fn gram(states: &[StateVector]) -> Result<GramMatrix> {
    let Some(first) = states.first() else {
        return Err(Error::InvalidArgument("gram of an empty list".into()));
    };
    if let Some(bad) = states.iter().find(|s| s.dim() != first.dim()) {
        return Err(Error::DimensionMismatch { expected: first.dim(), found: bad.dim() });
    }
    let v = columns(states.iter());
    Ok(GramMatrix(v.adjoint() * v))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolvabilityReport {
    pub gram_in: GramMatrix,
    pub gram_out: GramMatrix,
    pub max_abs_mismatch: f64,
    pub solvable: bool,
    pub tolerance_used: f64,
}

/// Compare `V†V` against `W†W` entrywise.
pub fn check_solvable(sys: &StateSystem, tol: f64) -> Result<SolvabilityReport> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let v = sys.v_matrix();
    let w = sys.w_matrix();
    let gram_in = v.adjoint() * &v;
    let gram_out = w.adjoint() * &w;
    let max_abs_mismatch = max_abs(&(&gram_in - &gram_out));
    Ok(SolvabilityReport {
        gram_in: GramMatrix(gram_in),
        gram_out: GramMatrix(gram_out),
        max_abs_mismatch,
        solvable: max_abs_mismatch <= tol,
        tolerance_used: tol,
    })
}

pub(crate) fn require_solvable(sys: &StateSystem) -> Result<SolvabilityReport> {
    let report = check_solvable(sys, DEFAULT_SOLVABILITY_TOLERANCE)?;
    if report.solvable {
        Ok(report)
    } else {
        Err(Error::Unsolvable(Box::new(report)))
    }
}

/// Orthonormal bases `Ṽ = V S D^{-1/2}` and `W̃ = W S D^{-1/2}` for the
/// spans of the inputs and outputs, from `V†V = S D S†`.
#[derive(Clone, Debug)]
pub struct OrthonormalizedSystem {
    pub v_tilde: DMatrix<Complex64>,
    pub w_tilde: DMatrix<Complex64>,
    /// Retained eigenvalues `d_i` of the overlap matrix, descending.
    pub eigenvalues: Vec<f64>,
    /// Matching eigenvectors, `m × r`.
    pub eigenvectors: DMatrix<Complex64>,
}

impl OrthonormalizedSystem {
    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Diagonalize the shared overlap matrix and emit orthonormal bases.
///
/// Eigenvalues at or below `rank_cutoff · λ_max` are dropped together with
/// their eigenvectors. The system must pass [`check_solvable`] at the
/// default tolerance, since a single `S, D` has to serve both sides.
pub fn orthonormalize(sys: &StateSystem, rank_cutoff: f64) -> Result<OrthonormalizedSystem> {
    if !(0.0..1.0).contains(&rank_cutoff) {
        return Err(Error::InvalidArgument(format!("rank cutoff {rank_cutoff} outside [0, 1)")));
    }
    let report = require_solvable(sys)?;
    let (values, vectors) = hermitian_eigen(report.gram_in.entries());
    let largest = values[0];
    let keep = values.iter().take_while(|&&d| d > rank_cutoff * largest).count();
    let eigenvalues = values[..keep].to_vec();
    let eigenvectors = vectors.columns(0, keep).into_owned();
    let inv_sqrt = DMatrix::from_diagonal(&DVector::from_iterator(
        keep,
        eigenvalues.iter().map(|&d| Complex64::new(d.sqrt().recip(), 0.0)),
    ));
    let s_d = &eigenvectors * inv_sqrt;
    Ok(OrthonormalizedSystem {
        v_tilde: sys.v_matrix() * &s_d,
        w_tilde: sys.w_matrix() * &s_d,
        eigenvalues,
        eigenvectors,
    })
}

/// One explicit unitary mapping every input of `sys` onto its output.
///
/// Both orthonormal bases are completed to square matrices with
/// computational basis vectors taken in index order, so the result is
/// deterministic; no attempt is made to pick a completion with a short
/// circuit.
pub fn complete_unitary(sys: &StateSystem) -> Result<Unitary> {
    let ortho = orthonormalize(sys, DEFAULT_RANK_CUTOFF)?;
    let v_full = complete_orthonormal(&ortho.v_tilde, COMPLETION_SKIP);
    let w_full = complete_orthonormal(&ortho.w_tilde, COMPLETION_SKIP);
    if v_full.ncols() != sys.dim() || w_full.ncols() != sys.dim() {
        return Err(Error::InvalidSystem("failed to complete the orthonormal bases".into()));
    }
    Ok(w_full * v_full.adjoint())
}

/// Express an isometry from `n_in` qubits as a state system.
///
/// `columns[k]` is the image of basis state `|k⟩`. Inputs are `|k⟩` followed
/// by ancillas in `|0⟩` on the least-significant qubits. With `n_in = 0`
/// this is plain state preparation from `|0…0⟩`.
pub fn pad_isometry(columns: &[StateVector], n_in: usize) -> Result<StateSystem> {
    let Some(first) = columns.first() else {
        return Err(Error::InvalidArgument("isometry needs at least one column".into()));
    };
    let n_out = first.num_qubits();
    if n_in > n_out {
        return Err(Error::InvalidArgument(format!("n_in = {n_in} exceeds n_out = {n_out}")));
    }
    if columns.len() != 1usize << n_in {
        return Err(Error::InvalidArgument(format!(
            "an isometry from {n_in} qubits needs {} columns, got {}",
            1usize << n_in,
            columns.len()
        )));
    }
    let shift = n_out - n_in;
    let pairs = columns
        .iter()
        .enumerate()
        .map(|(k, w)| Ok((StateVector::basis(n_out, k << shift)?, w.clone())))
        .collect::<Result<Vec<_>>>()?;
    StateSystem::new(pairs)
}

/// Pair `k` maps basis state `|idx_k⟩` to column `idx_k` of `u`.
pub fn restrict_unitary(u: &Unitary, basis_indices: &[usize]) -> Result<StateSystem> {
    let dim = u.nrows();
    if u.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: u.ncols() });
    }
    let num_qubits = qubits_for_len(dim)?;
    let mut seen = vec![false; dim];
    let mut pairs = Vec::with_capacity(basis_indices.len());
    for &idx in basis_indices {
        if idx >= dim {
            return Err(Error::InvalidArgument(format!("basis index {idx} out of range")));
        }
        if std::mem::replace(&mut seen[idx], true) {
            return Err(Error::InvalidArgument(format!("duplicate basis index {idx}")));
        }
        let col = StateVector::from_dvector(u.column(idx).into_owned())?;
        pairs.push((StateVector::basis(num_qubits, idx)?, col));
    }
    StateSystem::new(pairs)
}

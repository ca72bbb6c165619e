// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

//! Small dense complex linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Dense `2^n × 2^n` complex matrix.
pub type Unitary = DMatrix<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest entry magnitude of `a`.
pub fn max_abs(a: &DMatrix<Complex64>) -> f64 {
    a.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// `max |(U†U − Id)_ij|`.
pub fn unitarity_error(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    let prod = u.adjoint() * u;
    max_abs(&(prod - DMatrix::<Complex64>::identity(n, n)))
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted in
/// descending order. Columns of the returned matrix are the eigenvectors.
pub fn hermitian_eigen(a: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    // Symmetrize first; the solver only reads one triangle.
    let sym = (a + a.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(a.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Extend the orthonormal columns of `q` to a square unitary.
///
/// Candidate directions are the computational basis vectors in index order;
/// each is orthogonalized (twice) against the columns collected so far and
/// skipped when its residual norm falls below `skip_below`.
pub fn complete_orthonormal(q: &DMatrix<Complex64>, skip_below: f64) -> DMatrix<Complex64> {
    let dim = q.nrows();
    let mut cols: Vec<DVector<Complex64>> = q.column_iter().map(|c| c.into_owned()).collect();
    for j in 0..dim {
        if cols.len() == dim {
            break;
        }
        let mut v = DVector::from_element(dim, ZERO);
        v[j] = ONE;
        for _ in 0..2 {
            for c in &cols {
                let proj = c.dotc(&v);
                v.axpy(-proj, c, ONE);
            }
        }
        let norm = v.norm();
        if norm < skip_below {
            continue;
        }
        cols.push(v.unscale(norm));
    }
    DMatrix::from_columns(&cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_descending() {
        let a = DMatrix::from_row_slice(
            2,
            2,
            &[ONE, Complex64::new(0.98, 0.0), Complex64::new(0.98, 0.0), ONE],
        );
        let (vals, vecs) = hermitian_eigen(&a);
        assert!((vals[0] - 1.98).abs() < 1e-12);
        assert!((vals[1] - 0.02).abs() < 1e-12);
        let recon = &vecs * DMatrix::from_diagonal(&DVector::from_iterator(2, vals.iter().map(|&d| Complex64::new(d, 0.0)))) * vecs.adjoint();
        assert!(max_abs(&(recon - a)) < 1e-12);
    }

    #[test]
    fn completion_of_empty_set_is_identity() {
        let q = DMatrix::<Complex64>::zeros(4, 0);
        let u = complete_orthonormal(&q, 1e-8);
        assert!(max_abs(&(u - DMatrix::identity(4, 4))) < 1e-15);
    }

    #[test]
    fn completion_skips_spanned_directions() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let q = DMatrix::from_column_slice(
            4,
            1,
            &[Complex64::new(s, 0.0), ZERO, ZERO, Complex64::new(s, 0.0)],
        );
        let u = complete_orthonormal(&q, 1e-8);
        assert_eq!(u.ncols(), 4);
        assert!(unitarity_error(&u) < 1e-14);
    }
}

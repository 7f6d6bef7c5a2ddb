// Copyright 2026 The memdepth Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Jacobi eigensolver, one-sided Jacobi SVD, nullspaces and determinants.

use num_complex::Complex;

use super::{ComplexMatrix, Subspace};
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Unitary 2×2 rotation that zeroes the `(p, q)` entry of a Hermitian pencil
/// with diagonal `(app, aqq)` and off-diagonal `apq`.
///
/// Returned as `(J_pp, J_pq, J_qp, J_qq)`.
fn jacobi_rotation<T: Real>(app: T, aqq: T, apq: Complex<T>) -> [Complex<T>; 4] {
    let mag = apq.norm();
    let phase = Complex::new(apq.re / mag, -apq.im / mag); // e^{-iφ}
    let theta = (aqq - app) / (T::lit(2.0) * mag);
    let t = theta.signum() / (theta.abs() + (T::one() + theta * theta).sqrt());
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    let re = |x: T| Complex::new(x, T::zero());
    [re(c), re(s), phase * (-s), phase * c]
}

/// Right-multiplies columns `p`, `q` of `m` by the rotation.
fn rotate_columns<T: Real>(m: &mut ComplexMatrix<T>, p: usize, q: usize, j: &[Complex<T>; 4]) {
    for r in 0..m.rows() {
        let (a, b) = (m[(r, p)], m[(r, q)]);
        m[(r, p)] = a * j[0] + b * j[2];
        m[(r, q)] = a * j[1] + b * j[3];
    }
}

/// Left-multiplies rows `p`, `q` of `m` by the adjoint of the rotation.
fn rotate_rows_adjoint<T: Real>(m: &mut ComplexMatrix<T>, p: usize, q: usize, j: &[Complex<T>; 4]) {
    for col in 0..m.cols() {
        let (a, b) = (m[(p, col)], m[(q, col)]);
        m[(p, col)] = j[0].conj() * a + j[2].conj() * b;
        m[(q, col)] = j[1].conj() * a + j[3].conj() * b;
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// Returns eigenvalues in ascending order and the unitary whose columns are
/// the matching eigenvectors. Only the Hermitian part of the input is used.
pub fn eigh<T: Real>(m: &ComplexMatrix<T>) -> Result<(Vec<T>, ComplexMatrix<T>)> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("eigh needs a square matrix, got {}×{}", m.rows(), m.cols())));
    }
    if !m.is_finite() {
        return Err(Error::Numerical("eigh input has non-finite entries".into()));
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let eps = T::epsilon();

    let off = |a: &ComplexMatrix<T>| {
        let mut s = T::zero();
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += a[(p, q)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = scale == T::zero();
    for _ in 0..MAX_SWEEPS {
        if converged || off(&a) <= eps * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm() <= T::min_positive_value() {
                    continue;
                }
                let j = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, apq);
                rotate_columns(&mut a, p, q, &j);
                rotate_rows_adjoint(&mut a, p, q, &j);
                a[(p, q)] = Complex::new(T::zero(), T::zero());
                a[(q, p)] = Complex::new(T::zero(), T::zero());
                a[(p, p)].im = T::zero();
                a[(q, q)].im = T::zero();
                rotate_columns(&mut v, p, q, &j);
            }
        }
    }
    if !converged && off(&a) > T::lit(1e3) * eps * scale {
        return Err(Error::Numerical("Jacobi eigensolver did not converge".into()));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, col| v[(r, order[col])]);
    Ok((values, vectors))
}

/// Thin singular value decomposition `A = U Σ V†`.
///
/// `singular_values` is sorted in decreasing order. `u` is `m × n`; its
/// columns for zero singular values are zero. `v` is a full `n × n` unitary.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub u: ComplexMatrix<T>,
    pub singular_values: Vec<T>,
    pub v: ComplexMatrix<T>,
}

/// One-sided (Hestenes) Jacobi SVD. Real input yields real factors.
pub fn svd<T: Real>(m: &ComplexMatrix<T>) -> Result<Svd<T>> {
    if !m.is_finite() {
        return Err(Error::Numerical("svd input has non-finite entries".into()));
    }
    let (rows, n) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let eps = T::epsilon();
    // Columns below this squared norm are numerically zero and left alone.
    let negligible = (eps * m.frobenius_norm()).powi(2);

    let col_dot = |a: &ComplexMatrix<T>, p: usize, q: usize| {
        let mut s = Complex::new(T::zero(), T::zero());
        for r in 0..rows {
            s += a[(r, p)].conj() * a[(r, q)];
        }
        s
    };

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = col_dot(&a, p, p).re;
                let beta = col_dot(&a, q, q).re;
                let gamma = col_dot(&a, p, q);
                if alpha <= negligible || beta <= negligible || gamma.norm() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let j = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut a, p, q, &j);
                rotate_columns(&mut v, p, q, &j);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical("Jacobi SVD did not converge".into()));
    }

    let norms: Vec<T> = (0..n).map(|k| col_dot(&a, k, k).re.sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite norms"));
    let singular_values: Vec<T> = order.iter().map(|&k| norms[k]).collect();
    let u = ComplexMatrix::from_fn(rows, n, |r, col| {
        let k = order[col];
        if norms[k] > T::zero() {
            a[(r, k)] / norms[k]
        } else {
            Complex::new(T::zero(), T::zero())
        }
    });
    let v = ComplexMatrix::from_fn(n, n, |r, col| v[(r, order[col])]);
    Ok(Svd { u, singular_values, v })
}

/// Orthonormal basis of `{x : A x ≈ 0}`: right singular vectors whose
/// singular value is at most `tol · max(1, σ_max)`.
pub fn nullspace_basis<T: Real>(m: &ComplexMatrix<T>, tol: T) -> Result<Subspace<T>> {
    let dec = svd(m)?;
    let sigma_max = dec.singular_values.first().copied().unwrap_or_else(T::zero);
    let cutoff = tol * sigma_max.max(T::one());
    let basis = dec
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cutoff)
        .map(|(k, _)| dec.v.column(k))
        .collect();
    Ok(Subspace::new(m.cols(), basis))
}

/// Determinant by LU factorization with partial pivoting.
pub(crate) fn det<T: Real>(m: &ComplexMatrix<T>) -> Complex<T> {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut det = Complex::new(T::one(), T::zero());
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| a[(i, k)].norm().partial_cmp(&a[(j, k)].norm()).unwrap_or(std::cmp::Ordering::Equal))
            .expect("non-empty range");
        if a[(pivot, k)].norm() == T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        if pivot != k {
            for col in 0..n {
                let tmp = a[(k, col)];
                a[(k, col)] = a[(pivot, col)];
                a[(pivot, col)] = tmp;
            }
            det = -det;
        }
        let d = a[(k, k)];
        det *= d;
        for i in (k + 1)..n {
            let f = a[(i, k)] / d;
            for col in k..n {
                let sub = f * a[(k, col)];
                a[(i, col)] -= sub;
            }
        }
    }
    det
}

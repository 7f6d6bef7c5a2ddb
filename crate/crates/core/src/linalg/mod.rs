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

//! Dense complex matrices sized for at most eight qubits.
//!
//! Storage is row-major. Tensor products put the most significant subsystem
//! first: in `A ⊗ B` with `B` of shape `p × q`, entry `(i·p + k, j·q + l)`
//! is `A[i,j]·B[k,l]`. Every multi-qubit routine in the crate follows this
//! convention, so the first qubit of a register is the highest bit of a
//! basis index.

mod decomp;
mod random;
mod subspace;
mod tensor;

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use decomp::{eigh, nullspace_basis, svd, Svd};
pub use random::{haar_unitary, haar_unitary_from, random_bloch_from, random_density_from, rng_from_seed};
pub use subspace::Subspace;
pub use tensor::{apply_local, partial_trace, permute_subsystems, tensor_product, tensor_product_all};

/// Dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

#[inline]
pub(crate) fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![Complex::new(T::zero(), T::zero()); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting a wrong entry count
    /// or non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}×{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Dimension("matrix has non-finite entries".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Square matrix from `f64` rows of `(re, im)` pairs; panics on ragged input.
    pub fn from_pairs(rows: &[&[(f64, f64)]]) -> Self {
        let n = rows.len();
        let m = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self::from_fn(n, m, |i, j| c(rows[i][j].0, rows[i][j].1))
    }

    /// Real matrix from `f64` rows.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let m = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self::from_fn(n, m, |i, j| c(rows[i][j], 0.0))
    }

    pub fn diagonal(entries: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Column vector.
    pub fn column_vector(entries: &[Complex<T>]) -> Self {
        Self::from_fn(entries.len(), 1, |i, _| entries[i])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Complex<T>]) {
        assert_eq!(v.len(), self.rows);
        for (i, &z) in v.iter().enumerate() {
            self[(i, j)] = z;
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> Complex<T> {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self[(i, i)])
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn kron(&self, other: &Self) -> Self {
        tensor_product(self, other)
    }

    /// `‖U†U − I‖_F`, or infinity when the matrix is not square.
    pub fn unitarity_residual(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        (&(&self.adjoint() * self) - &Self::identity(self.rows)).frobenius_norm()
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_residual() < tol
    }

    /// `‖A − A†‖_F`, or infinity when the matrix is not square.
    pub fn hermiticity_residual(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        (self - &self.adjoint()).frobenius_norm()
    }

    /// Fails with [`Error::InvalidUnitary`] unless `‖U†U − I‖_F < tol`.
    pub fn ensure_unitary(&self, dim: usize, tol: T) -> Result<()> {
        if self.rows != dim || self.cols != dim {
            return Err(Error::Dimension(format!(
                "expected a {dim}×{dim} unitary, got {}×{}",
                self.rows, self.cols
            )));
        }
        let residual = self.unitarity_residual();
        if residual < tol {
            Ok(())
        } else {
            Err(Error::InvalidUnitary { residual: residual.as_f64() })
        }
    }

    /// Determinant by LU factorization with partial pivoting.
    pub fn det(&self) -> Complex<T> {
        decomp::det(self)
    }

    /// Hermitian part `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(T::lit(0.5))
    }

    /// Sum of absolute eigenvalues of the Hermitian part.
    pub fn trace_norm_hermitian(&self) -> Result<T> {
        let (vals, _) = eigh(&self.hermitian_part())?;
        Ok(vals.iter().fold(T::zero(), |acc, v| acc + v.abs()))
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue_hermitian(&self) -> Result<T> {
        let (vals, _) = eigh(&self.hermitian_part())?;
        Ok(vals[0])
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl<T: Real> Mul for ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: ComplexMatrix<T>) -> ComplexMatrix<T> {
        &self * &rhs
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "matrix sum shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "matrix difference shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn neg(self) -> ComplexMatrix<T> {
        self.map(|z| -z)
    }
}

/// Serialized as nested rows of `[re, im]` pairs.
impl<T: Real + Serialize> Serialize for ComplexMatrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<[T; 2]> = (0..self.cols).map(|j| [self[(i, j)].re, self[(i, j)].im]).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// Pauli matrix `σ_k` for `k ∈ {0, 1, 2}` (x, y, z).
pub fn pauli<T: Real>(k: usize) -> ComplexMatrix<T> {
    match k {
        0 => ComplexMatrix::from_pairs(&[&[(0.0, 0.0), (1.0, 0.0)], &[(1.0, 0.0), (0.0, 0.0)]]),
        1 => ComplexMatrix::from_pairs(&[&[(0.0, 0.0), (0.0, -1.0)], &[(0.0, 1.0), (0.0, 0.0)]]),
        2 => ComplexMatrix::from_pairs(&[&[(1.0, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (-1.0, 0.0)]]),
        _ => panic!("Pauli index {k} out of range"),
    }
}

/// `σ_k ⊗ σ_k`.
pub fn pauli_pair<T: Real>(k: usize) -> ComplexMatrix<T> {
    let p = pauli::<T>(k);
    p.kron(&p)
}

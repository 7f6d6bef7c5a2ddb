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

use num_complex::Complex;

use super::ComplexMatrix;
use crate::scalar::Real;

/// Subspace of `ℂ^d` carried as an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<T> {
    ambient_dim: usize,
    basis: Vec<Vec<Complex<T>>>,
}

impl<T: Real> Subspace<T> {
    /// The caller guarantees that `basis` is orthonormal.
    pub fn new(ambient_dim: usize, basis: Vec<Vec<Complex<T>>>) -> Self {
        debug_assert!(basis.iter().all(|v| v.len() == ambient_dim));
        Self { ambient_dim, basis }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self::new(ambient_dim, Vec::new())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Complex<T>>] {
        &self.basis
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> ComplexMatrix<T> {
        let d = self.ambient_dim;
        ComplexMatrix::from_fn(d, d, |r, s| {
            self.basis.iter().fold(Complex::new(T::zero(), T::zero()), |acc, v| acc + v[r] * v[s].conj())
        })
    }

    /// Projector onto the orthogonal complement.
    pub fn complement_projector(&self) -> ComplexMatrix<T> {
        &ComplexMatrix::identity(self.ambient_dim) - &self.projector()
    }

    /// Euclidean distance from `x` to the subspace.
    pub fn distance(&self, x: &[Complex<T>]) -> T {
        let mut residual = x.to_vec();
        for v in &self.basis {
            let coeff = v.iter().zip(x).fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b);
            for (r, a) in residual.iter_mut().zip(v) {
                *r -= coeff * a;
            }
        }
        residual.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }
}

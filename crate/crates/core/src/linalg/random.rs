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

//! Seeded sampling of Haar unitaries, density matrices and Bloch vectors.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::ComplexMatrix;
use crate::scalar::Real;

/// Deterministic generator used throughout the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

/// Haar-random `dim × dim` unitary from a fixed seed.
pub fn haar_unitary<T: Real>(dim: usize, seed: u64) -> ComplexMatrix<T> {
    haar_unitary_from(dim, &mut rng_from_seed(seed))
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// `diag(R)` fixed to be positive. Gram-Schmidt is run twice per column.
pub fn haar_unitary_from<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix<T> {
    let mut q = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian::<T, R>(rng));
    for j in 0..dim {
        let mut col = q.column(j);
        for _ in 0..2 {
            for k in 0..j {
                let prev = q.column(k);
                let proj = prev.iter().zip(&col).fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b);
                for (x, p) in col.iter_mut().zip(&prev) {
                    *x -= proj * p;
                }
            }
        }
        let norm = col.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        for x in &mut col {
            *x /= norm;
        }
        q.set_column(j, &col);
    }
    q
}

/// Uniformly distributed point of the closed unit ball.
pub fn random_bloch_from<T: Real, R: Rng + ?Sized>(rng: &mut R) -> [T; 3] {
    let v: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let radius = rng.random::<f64>().cbrt();
    v.map(|x| T::lit(x / n * radius))
}

/// Random full-rank density matrix `G G† / tr(G G†)` with Ginibre `G`.
pub fn random_density_from<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix<T> {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian::<T, R>(rng));
    let rho = &g * &g.adjoint();
    let tr = rho.trace().re;
    rho.scale_real(T::one() / tr).hermitian_part()
}

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

//! Named two-qubit gates and single-qubit building blocks.
//!
//! Two-qubit operators act on system ⊗ memory, system most significant:
//! basis index `2·s + m`.

use num_complex::Complex;

use crate::linalg::{pauli_pair, ComplexMatrix};
use crate::scalar::Real;

pub fn identity<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::identity(4)
}

/// Exchange of system and memory.
pub fn swap<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_real(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
    ])
}

/// Controlled NOT with the system as control: `|s, m⟩ → |s, m ⊕ s⟩`.
pub fn cnot<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_real(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0, 0.0],
    ])
}

/// Magic basis as columns. `B† (σ_j ⊗ σ_j) B = diag(MAGIC_SIGNS[j])`.
pub fn magic_basis<T: Real>() -> ComplexMatrix<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_pairs(&[
        &[(h, 0.0), (0.0, h), (0.0, 0.0), (0.0, 0.0)],
        &[(0.0, 0.0), (0.0, 0.0), (0.0, h), (h, 0.0)],
        &[(0.0, 0.0), (0.0, 0.0), (0.0, h), (-h, 0.0)],
        &[(h, 0.0), (0.0, -h), (0.0, 0.0), (0.0, 0.0)],
    ])
}

/// Eigenvalues of `σ_j ⊗ σ_j` along the magic basis columns.
pub const MAGIC_SIGNS: [[f64; 4]; 3] = [[1.0, -1.0, 1.0, -1.0], [-1.0, 1.0, 1.0, -1.0], [1.0, 1.0, -1.0, -1.0]];

/// `exp(i Σ_j α_j σ_j ⊗ σ_j)`, exact via the magic basis.
pub fn interaction<T: Real>(alpha: [T; 3]) -> ComplexMatrix<T> {
    let b = magic_basis::<T>();
    let phases: Vec<Complex<T>> = (0..4)
        .map(|k| {
            let theta = (0..3).fold(T::zero(), |acc, j| acc + alpha[j] * T::lit(MAGIC_SIGNS[j][k]));
            Complex::new(theta.cos(), theta.sin())
        })
        .collect();
    &(&b * &ComplexMatrix::diagonal(&phases)) * &b.adjoint()
}

/// `½[I + σ_zz + i e^{−2iα_z}(σ_xx + σ_yy)] σ_xx^{h_x} σ_yy^{h_y}` with
/// `h_x = [negative_x]`, `h_y = [negative_y]`.
///
/// With both flags false this is `e^{−iα_z} exp(i(π/4 σ_xx + π/4 σ_yy + α_z σ_zz))`.
/// A set flag selects the branch with the corresponding angle at `−π/4`.
pub fn u_alpha_z_branch<T: Real>(alpha_z: T, negative_x: bool, negative_y: bool) -> ComplexMatrix<T> {
    let xx = pauli_pair::<T>(0);
    let yy = pauli_pair::<T>(1);
    let zz = pauli_pair::<T>(2);
    let i4 = ComplexMatrix::<T>::identity(4);
    let two = T::lit(2.0);
    // i·e^{−2iα_z} = sin 2α_z + i cos 2α_z
    let coeff = Complex::new((two * alpha_z).sin(), (two * alpha_z).cos());
    let mut u = (&(&i4 + &zz) + &(&xx + &yy).scale(coeff)).scale_real(T::lit(0.5));
    if negative_x {
        u = &u * &xx;
    }
    if negative_y {
        u = &u * &yy;
    }
    u
}

/// The depth-two family member with `α_x = α_y = π/4`.
pub fn u_alpha_z<T: Real>(alpha_z: T) -> ComplexMatrix<T> {
    u_alpha_z_branch(alpha_z, false, false)
}

/// Memory-side local `[[0, 1], [−1, 0]]^{(1−q)/2} · diag(e^{iβ}, e^{−iβ})`, `q = ±1`.
pub fn w_prime<T: Real>(beta: T, q_positive: bool) -> ComplexMatrix<T> {
    let d = ComplexMatrix::diagonal(&[Complex::new(beta.cos(), beta.sin()), Complex::new(beta.cos(), -beta.sin())]);
    if q_positive {
        d
    } else {
        let flip = ComplexMatrix::from_real(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        &flip * &d
    }
}

/// `exp(−i θ/2 n·σ)` for a unit axis `n`.
pub fn rotation<T: Real>(axis: [T; 3], theta: T) -> ComplexMatrix<T> {
    let half = theta / T::lit(2.0);
    let (s, co) = (half.sin(), half.cos());
    let mut m = ComplexMatrix::identity(2).scale_real(co);
    for (k, &n) in axis.iter().enumerate() {
        let p = crate::linalg::pauli::<T>(k).scale(Complex::new(T::zero(), -s * n));
        m = &m + &p;
    }
    m
}

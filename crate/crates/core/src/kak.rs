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

//! Two-qubit Cartan decomposition
//! `U = e^{iφ} (V₁ ⊗ W₁) exp(i Σ_j α_j σ_j ⊗ σ_j) (V₂ ⊗ W₂)`.
//!
//! The non-local part is found in the magic basis, where local gates become
//! real orthogonal matrices and the interaction becomes diagonal.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::bloch::InteractionAngles;
use crate::error::{Error, Result};
use crate::gates::{interaction, magic_basis, MAGIC_SIGNS};
use crate::linalg::{eigh, pauli, rng_from_seed, tensor_product, ComplexMatrix};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real + Serialize")]
pub struct KakDecomposition<T> {
    pub v1: ComplexMatrix<T>,
    pub w1: ComplexMatrix<T>,
    pub v2: ComplexMatrix<T>,
    pub w2: ComplexMatrix<T>,
    pub angles: InteractionAngles<T>,
    pub global_phase: T,
}

impl<T: Real> KakDecomposition<T> {
    /// Pure interaction with identity locals and zero phase.
    pub fn from_angles(alpha: [T; 3]) -> Self {
        let i2 = ComplexMatrix::identity(2);
        Self {
            v1: i2.clone(),
            w1: i2.clone(),
            v2: i2.clone(),
            w2: i2,
            angles: InteractionAngles { alpha },
            global_phase: T::zero(),
        }
    }

    /// `‖compose(self) − u‖_F`.
    pub fn residual(&self, u: &ComplexMatrix<T>) -> T {
        (&kak_compose(self) - u).frobenius_norm()
    }

    /// Whether the angles satisfy `π/4 ≥ α_x ≥ α_y ≥ |α_z|`, `α_y ≥ 0`, to `tol`.
    pub fn is_canonical(&self, tol: T) -> bool {
        let [x, y, z] = self.angles.alpha;
        let q = T::FRAC_PI_4();
        x <= q + tol && x + tol >= y && y + tol >= z.abs() && y >= -tol && z > -q - tol
    }

    fn shift(&mut self, j: usize, up: bool) {
        let half_pi = T::FRAC_PI_2();
        let s = pauli::<T>(j);
        self.v2 = &s * &self.v2;
        self.w2 = &s * &self.w2;
        if up {
            self.angles.alpha[j] += half_pi;
            self.global_phase -= half_pi;
        } else {
            self.angles.alpha[j] -= half_pi;
            self.global_phase += half_pi;
        }
    }

    /// Negates `α_i`, `α_j` by conjugating with `σ_k ⊗ I` on the system side.
    fn flip_pair(&mut self, i: usize, j: usize) {
        let k = 3 - i - j;
        let s = pauli::<T>(k);
        self.v1 = &self.v1 * &s;
        self.v2 = &s * &self.v2;
        self.angles.alpha[i] = -self.angles.alpha[i];
        self.angles.alpha[j] = -self.angles.alpha[j];
    }

    /// Exchanges `α_a` and `α_b` via the Clifford `(σ_a + σ_b)/√2` on both qubits.
    fn swap_axes(&mut self, a: usize, b: usize) {
        let h = T::FRAC_1_SQRT_2();
        let c = (&pauli::<T>(a) + &pauli(b)).scale_real(h);
        self.v1 = &self.v1 * &c;
        self.w1 = &self.w1 * &c;
        self.v2 = &c * &self.v2;
        self.w2 = &c * &self.w2;
        self.angles.alpha.swap(a, b);
    }
}

/// `e^{iφ} (V₁ ⊗ W₁) exp(i Σ α_j σ_j ⊗ σ_j) (V₂ ⊗ W₂)`.
pub fn kak_compose<T: Real>(d: &KakDecomposition<T>) -> ComplexMatrix<T> {
    let left = tensor_product(&d.v1, &d.w1);
    let right = tensor_product(&d.v2, &d.w2);
    let phase = Complex::new(d.global_phase.cos(), d.global_phase.sin());
    (&(&left * &interaction(d.angles.alpha)) * &right).scale(phase)
}

/// Moves the angles into the chamber `π/4 ≥ α_x ≥ α_y ≥ |α_z|`, `α_y ≥ 0`,
/// absorbing every move into the locals and the phase.
///
/// Angles within the structural tolerance of `−π/4` are taken to `+π/4`. The
/// sign of `α_z` is kept even when `α_x = π/4`.
pub fn canonicalize<T: Real>(d: &KakDecomposition<T>) -> KakDecomposition<T> {
    let mut d = d.clone();
    let tol = T::structural_tol();
    let q = T::FRAC_PI_4();
    for j in 0..3 {
        while d.angles.alpha[j] > q + tol {
            d.shift(j, false);
        }
        while d.angles.alpha[j] < -q + tol {
            d.shift(j, true);
        }
    }
    // Sort by magnitude, largest first.
    for _ in 0..2 {
        for j in 0..2 {
            if d.angles.alpha[j].abs() < d.angles.alpha[j + 1].abs() {
                d.swap_axes(j, j + 1);
            }
        }
    }
    let [x, y, _] = d.angles.alpha;
    match (x < T::zero(), y < T::zero()) {
        (true, true) => d.flip_pair(0, 1),
        (true, false) => d.flip_pair(0, 2),
        (false, true) => d.flip_pair(1, 2),
        (false, false) => {}
    }
    d.global_phase = wrap_phase(d.global_phase);
    d
}

/// Maps a phase into `(−π, π]`.
fn wrap_phase<T: Real>(phi: T) -> T {
    let two_pi = T::lit(2.0) * T::PI();
    let mut p = phi % two_pi;
    if p <= -T::PI() {
        p += two_pi;
    } else if p > T::PI() {
        p -= two_pi;
    }
    p
}

/// Splits a `4 × 4` product gate into `V ⊗ W`. `W` is normalized to unit
/// determinant, `V` carries the rest.
fn factor_product<T: Real>(g: &ComplexMatrix<T>) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let block = |i: usize, j: usize| ComplexMatrix::from_fn(2, 2, |k, l| g[(2 * i + k, 2 * j + l)]);
    let (bi, bj) = [(0, 0), (0, 1), (1, 0), (1, 1)]
        .into_iter()
        .max_by(|&(a, b), &(c, d)| {
            block(a, b).frobenius_norm().partial_cmp(&block(c, d).frobenius_norm()).unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("four blocks");
    let blk = block(bi, bj);
    let w = blk.scale(blk.det().sqrt().inv());
    let half = T::lit(0.5);
    let v = ComplexMatrix::from_fn(2, 2, |i, j| (&w.adjoint() * &block(i, j)).trace() * half);
    (v, w)
}

/// Coefficients `(a, b)` for diagonalizing `a·Re M + b·Im M`. The first pair is
/// fixed; later ones are seeded normal draws.
fn pencil_coefficients<T: Real>() -> impl Iterator<Item = (T, T)> {
    let mut rng = rng_from_seed(0x6b61_6b00);
    let first = (T::lit(1.2602066112249388), T::lit(0.22317849046722027));
    std::iter::once(first).chain(std::iter::repeat_with(move || {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        (T::lit(a), T::lit(b))
    }))
}

const PENCIL_ATTEMPTS: usize = 100;

/// Real orthogonal `P` (det +1) with `Pᵀ M P` diagonal, for a complex symmetric
/// unitary `M` whose real and imaginary parts commute. Returns `P` and the
/// diagonal.
fn simultaneous_diagonalize<T: Real>(m: &ComplexMatrix<T>) -> Result<(ComplexMatrix<T>, Vec<Complex<T>>)> {
    let accept = T::lit(1e3) * T::epsilon();
    let mut best: Option<(T, ComplexMatrix<T>)> = None;
    for (a, b) in pencil_coefficients::<T>().take(PENCIL_ATTEMPTS) {
        let pencil = m.map(|z| Complex::new(a * z.re + b * z.im, T::zero()));
        let (_, vecs) = eigh(&pencil)?;
        let p = vecs.map(|z| Complex::new(z.re, T::zero()));
        let d = &(&p.transpose() * m) * &p;
        let mut off = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    off = off.max(d[(i, j)].norm());
                }
            }
        }
        if best.as_ref().is_none_or(|(o, _)| off < *o) {
            best = Some((off, p));
        }
        if off < accept {
            break;
        }
    }
    let (_, mut p) = best.ok_or_else(|| Error::Numerical("no diagonalization attempt".into()))?;

    let diag_of = |p: &ComplexMatrix<T>| {
        let d = &(&p.transpose() * m) * p;
        (0..4).map(|k| d[(k, k)]).collect::<Vec<_>>()
    };
    // Deterministic column order and signs.
    let diag = diag_of(&p);
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&i, &j| diag[i].arg().partial_cmp(&diag[j].arg()).unwrap_or(std::cmp::Ordering::Equal));
    p = ComplexMatrix::from_fn(4, 4, |r, col| p[(r, order[col])]);
    let small = T::lit(1e-8);
    for col in 0..4 {
        let lead = (0..4).map(|r| p[(r, col)].re).find(|x| x.abs() > small).unwrap_or_else(T::one);
        if lead < T::zero() {
            for r in 0..4 {
                p[(r, col)] = -p[(r, col)];
            }
        }
    }
    if p.det().re < T::zero() {
        for r in 0..4 {
            p[(r, 3)] = -p[(r, 3)];
        }
    }
    let diag = diag_of(&p);
    Ok((p, diag))
}

/// Decomposes a two-qubit unitary; the result is in canonical form.
pub fn kak_decompose<T: Real>(u: &ComplexMatrix<T>) -> Result<KakDecomposition<T>> {
    u.ensure_unitary(4, T::unitarity_tol())?;
    let det = u.det();
    let phi = det.arg() / T::lit(4.0);
    let root = Complex::from_polar(det.norm().powf(T::lit(0.25)), phi);
    let us = u.scale(root.inv());

    let b = magic_basis::<T>();
    let up = &(&b.adjoint() * &us) * &b;
    let m2 = &up.transpose() * &up;
    let (p, diag) = simultaneous_diagonalize(&m2)?;

    let two = T::lit(2.0);
    let mut h = [T::zero(); 4];
    for k in 0..3 {
        h[k] = diag[k].arg() / two;
    }
    h[3] = -(h[0] + h[1] + h[2]);
    let inv_phases: Vec<Complex<T>> = h.iter().map(|&x| Complex::new(x.cos(), -x.sin())).collect();
    let k = &(&up * &p) * &ComplexMatrix::diagonal(&inv_phases);

    let (v1, w1) = factor_product(&(&(&b * &k) * &b.adjoint()));
    let (v2, w2) = factor_product(&(&(&b * &p.transpose()) * &b.adjoint()));

    let quarter = T::lit(0.25);
    let alpha: [T; 3] =
        std::array::from_fn(|j| (0..4).fold(T::zero(), |acc, k| acc + T::lit(MAGIC_SIGNS[j][k]) * h[k]) * quarter);

    let raw = KakDecomposition { v1, w1, v2, w2, angles: InteractionAngles { alpha }, global_phase: phi };
    Ok(canonicalize(&raw))
}

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

//! Bloch-vector picture of qubit states and channels.
//!
//! A qubit state is `ρ = ½(I + r·σ)` with `r_k = tr(σ_k ρ)`. A qubit channel
//! acts affinely, `r ↦ M r + t`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{nullspace_basis, partial_trace, pauli, tensor_product, ComplexMatrix, Subspace};
use crate::mat3::{self, Mat3};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochVector<T>(pub [T; 3]);

impl<T: Real> BlochVector<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self([x, y, z])
    }

    pub fn zero() -> Self {
        Self([T::zero(); 3])
    }

    /// Unit vector along axis `k` (0, 1, 2 for x, y, z).
    pub fn axis(k: usize) -> Self {
        let mut v = [T::zero(); 3];
        v[k] = T::one();
        Self(v)
    }

    pub fn components(&self) -> [T; 3] {
        self.0
    }

    pub fn norm(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
    }

    pub fn distance(&self, other: &Self) -> T {
        BlochVector(std::array::from_fn(|k| self.0[k] - other.0[k])).norm()
    }

    pub fn is_physical(&self) -> bool {
        self.0.iter().all(|x| x.is_finite()) && self.norm() <= T::one() + T::structural_tol()
    }
}

/// Affine Bloch map `r ↦ matrix · r + vector`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineChannelRep<T> {
    pub matrix: Mat3<T>,
    pub vector: [T; 3],
}

impl<T: Real> AffineChannelRep<T> {
    pub fn identity() -> Self {
        Self { matrix: mat3::identity(), vector: [T::zero(); 3] }
    }

    /// Maps every state to `r`.
    pub fn constant(r: BlochVector<T>) -> Self {
        Self { matrix: mat3::zero(), vector: r.0 }
    }

    pub fn apply(&self, r: &BlochVector<T>) -> BlochVector<T> {
        let m = mat3::apply(&self.matrix, &r.0);
        BlochVector(std::array::from_fn(|k| m[k] + self.vector[k]))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Self) -> Self {
        let shifted = mat3::apply(&other.matrix, &self.vector);
        Self {
            matrix: mat3::mul(&other.matrix, &self.matrix),
            vector: std::array::from_fn(|k| shifted[k] + other.vector[k]),
        }
    }

    /// Pauli transfer matrix in the basis `(I, σ_x, σ_y, σ_z)`.
    pub fn ptm(&self) -> [[T; 4]; 4] {
        let mut t = [[T::zero(); 4]; 4];
        t[0][0] = T::one();
        for j in 0..3 {
            t[j + 1][0] = self.vector[j];
            for k in 0..3 {
                t[j + 1][k + 1] = self.matrix[j][k];
            }
        }
        t
    }

    /// Largest entry-wise deviation from `other`, over matrix and vector.
    pub fn max_deviation(&self, other: &Self) -> T {
        let dm = mat3::max_abs(&mat3::sub(&self.matrix, &other.matrix));
        (0..3).fold(dm, |acc, k| acc.max((self.vector[k] - other.vector[k]).abs()))
    }
}

/// Interaction angles `(α_x, α_y, α_z)` of `exp(i Σ_j α_j σ_j ⊗ σ_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InteractionAngles<T> {
    pub alpha: [T; 3],
}

impl<T: Real> InteractionAngles<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { alpha: [x, y, z] }
    }

    /// `cos 2α_j`.
    pub fn c(&self, j: usize) -> T {
        (T::lit(2.0) * self.alpha[j]).cos()
    }

    /// `sin 2α_j`.
    pub fn s(&self, j: usize) -> T {
        (T::lit(2.0) * self.alpha[j]).sin()
    }
}

/// Fails unless `rho` is a `dim × dim` density matrix: Hermitian, unit trace
/// and positive semidefinite, all to the unitarity tolerance.
pub fn ensure_density<T: Real>(rho: &ComplexMatrix<T>, dim: usize) -> Result<()> {
    if rho.rows() != dim || rho.cols() != dim {
        return Err(Error::Dimension(format!("expected a {dim}×{dim} state, got {}×{}", rho.rows(), rho.cols())));
    }
    let tol = T::unitarity_tol();
    let herm = rho.hermiticity_residual();
    if herm.is_nan() || herm >= tol {
        return Err(Error::InvalidState(format!("not Hermitian (residual {:e})", herm.as_f64())));
    }
    let tr = rho.trace();
    if !((tr.re - T::one()).abs() < tol && tr.im.abs() < tol) {
        return Err(Error::InvalidState(format!("trace {} is not 1", tr.re.as_f64())));
    }
    let min = rho.min_eigenvalue_hermitian()?;
    if min < -tol {
        return Err(Error::InvalidState(format!("negative eigenvalue {:e}", min.as_f64())));
    }
    Ok(())
}

/// `½(I + r·σ)`.
pub fn density_from_bloch<T: Real>(r: &BlochVector<T>) -> Result<ComplexMatrix<T>> {
    if !r.is_physical() {
        return Err(Error::UnphysicalState { norm: r.norm().as_f64() });
    }
    Ok(operator_from_bloch(T::one(), r))
}

/// `½(a·I + r·σ)` without physicality checks.
pub(crate) fn operator_from_bloch<T: Real>(a: T, r: &BlochVector<T>) -> ComplexMatrix<T> {
    let half = T::lit(0.5);
    (0..3).fold(ComplexMatrix::identity(2).scale_real(a * half), |acc, k| &acc + &pauli(k).scale_real(r.0[k] * half))
}

/// `r_k = Re tr(σ_k ρ)` without validation.
pub(crate) fn bloch_components<T: Real>(rho: &ComplexMatrix<T>) -> BlochVector<T> {
    // tr(σ_x ρ) = 2 Re ρ₀₁, tr(σ_y ρ) = −2 Im ρ₀₁ (Hermitian part), tr(σ_z ρ) = ρ₀₀ − ρ₁₁
    let two = T::lit(2.0);
    let off = (rho[(0, 1)] + rho[(1, 0)].conj()).scale(T::lit(0.5));
    BlochVector([two * off.re, -two * off.im, rho[(0, 0)].re - rho[(1, 1)].re])
}

pub fn bloch_from_density<T: Real>(rho: &ComplexMatrix<T>) -> Result<BlochVector<T>> {
    if rho.rows() != 2 || rho.cols() != 2 {
        return Err(Error::Dimension(format!("expected a 2×2 state, got {}×{}", rho.rows(), rho.cols())));
    }
    let tol = T::unitarity_tol();
    let herm = rho.hermiticity_residual();
    if herm.is_nan() || herm >= tol {
        return Err(Error::InvalidState(format!("not Hermitian (residual {:e})", herm.as_f64())));
    }
    let tr = rho.trace();
    if !((tr.re - T::one()).abs() < tol && tr.im.abs() < tol) {
        return Err(Error::InvalidState(format!("trace {} is not 1", tr.re.as_f64())));
    }
    Ok(bloch_components(rho))
}

/// Affine form of a qubit map from its images of `I/2` and `(I + σ_k)/2`.
pub(crate) fn extract_affine<T: Real>(
    mut map: impl FnMut(&ComplexMatrix<T>) -> Result<ComplexMatrix<T>>,
) -> Result<AffineChannelRep<T>> {
    let base = bloch_components(&map(&operator_from_bloch(T::one(), &BlochVector::zero()))?).0;
    let mut matrix = mat3::zero();
    for k in 0..3 {
        let image = bloch_components(&map(&operator_from_bloch(T::one(), &BlochVector::axis(k)))?).0;
        for j in 0..3 {
            matrix[j][k] = image[j] - base[j];
        }
    }
    Ok(AffineChannelRep { matrix, vector: base })
}

/// `tr_keep[U (a ⊗ b) U†]` on system ⊗ memory.
fn conjugate_and_reduce<T: Real>(u: &ComplexMatrix<T>, a: &ComplexMatrix<T>, b: &ComplexMatrix<T>, keep: usize) -> Result<ComplexMatrix<T>> {
    let joint = &(u * &tensor_product(a, b)) * &u.adjoint();
    partial_trace(&joint, &[2, 2], &[keep])
}

/// Memory update `m ↦ F m + f` for a fixed system input `rho_sys`.
pub fn concurrent_channel<T: Real>(u: &ComplexMatrix<T>, rho_sys: &ComplexMatrix<T>) -> Result<AffineChannelRep<T>> {
    u.ensure_unitary(4, T::unitarity_tol())?;
    ensure_density(rho_sys, 2)?;
    extract_affine(|xi| conjugate_and_reduce(u, rho_sys, xi, 1))
}

/// Channel `r ↦ E r + e` on the system for a fixed memory state `xi_mem`.
pub fn system_channel<T: Real>(u: &ComplexMatrix<T>, xi_mem: &ComplexMatrix<T>) -> Result<AffineChannelRep<T>> {
    u.ensure_unitary(4, T::unitarity_tol())?;
    ensure_density(xi_mem, 2)?;
    extract_affine(|rho| conjugate_and_reduce(u, rho, xi_mem, 0))
}

/// Irrelevant memory directions at the default structural tolerance.
pub fn irrelevant_subspace<T: Real>(u: &ComplexMatrix<T>) -> Result<Subspace<T>> {
    irrelevant_subspace_tol(u, T::structural_tol())
}

/// Real coefficient vectors `a` (in the `σ_x, σ_y, σ_z` basis of the memory)
/// with `tr_mem[U (ρ ⊗ a·σ) U†] = 0` for every system state `ρ`.
///
/// Linearity in `ρ` reduces "every ρ" to the four probes `I/2`, `(I+σ_k)/2`.
/// The identity direction is excluded: it always maps to `UρU†`'s marginal.
pub fn irrelevant_subspace_tol<T: Real>(u: &ComplexMatrix<T>, tol: T) -> Result<Subspace<T>> {
    u.ensure_unitary(4, T::unitarity_tol())?;
    let probes: Vec<ComplexMatrix<T>> = std::iter::once(BlochVector::zero())
        .chain((0..3).map(BlochVector::axis))
        .map(|r| operator_from_bloch(T::one(), &r))
        .collect();
    // 4 probes × 4 complex entries × (re, im) rows, one column per σ_k.
    let mut stacked = ComplexMatrix::zeros(32, 3);
    for k in 0..3 {
        let sigma = pauli::<T>(k);
        let mut row = 0;
        for rho in &probes {
            let out = conjugate_and_reduce(u, rho, &sigma, 0)?;
            for z in out.as_slice() {
                stacked[(row, k)].re = z.re;
                stacked[(row + 1, k)].re = z.im;
                row += 2;
            }
        }
    }
    nullspace_basis(&stacked, tol)
}

/// Closed-form concurrent-channel matrix of `exp(i Σ_j α_j σ_j ⊗ σ_j)` for
/// system Bloch vector `r`, with `c_j = cos 2α_j`, `s_j = sin 2α_j`.
pub fn f_matrix_analytic<T: Real>(angles: &InteractionAngles<T>, r: &BlochVector<T>) -> Mat3<T> {
    let (cx, cy, cz) = (angles.c(0), angles.c(1), angles.c(2));
    let (sx, sy, sz) = (angles.s(0), angles.s(1), angles.s(2));
    let [rx, ry, rz] = r.0;
    [
        [cy * cz, rz * cy * sz, -ry * sy * cz],
        [-rz * cx * sz, cx * cz, rx * sx * cz],
        [ry * cx * sy, -rx * sx * cy, cx * cy],
    ]
}

/// `det F(r) = r_x² s_x² c_y² c_z² + r_y² c_x² s_y² c_z² + r_z² c_x² c_y² s_z² + c_x² c_y² c_z²`.
pub fn det_f_analytic<T: Real>(angles: &InteractionAngles<T>, r: &BlochVector<T>) -> T {
    let sq = |x: T| x * x;
    let (cx, cy, cz) = (sq(angles.c(0)), sq(angles.c(1)), sq(angles.c(2)));
    let (sx, sy, sz) = (sq(angles.s(0)), sq(angles.s(1)), sq(angles.s(2)));
    let [rx, ry, rz] = r.0;
    sq(rx) * sx * cy * cz + sq(ry) * cx * sy * cz + sq(rz) * cx * cy * sz + cx * cy * cz
}

/// Bloch rotation of a single-qubit unitary: `S_jk = ½ tr(σ_j W σ_k W†)`.
pub fn bloch_rotation<T: Real>(w: &ComplexMatrix<T>) -> Mat3<T> {
    let mut s = mat3::zero();
    for k in 0..3 {
        let image = &(w * &pauli(k)) * &w.adjoint();
        // bloch_components returns tr(σ_j · image) for any Hermitian image.
        let col = bloch_components(&image).0;
        for j in 0..3 {
            s[j][k] = col[j] * T::lit(0.5);
        }
    }
    s
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::gates::interaction;
    use crate::linalg::{haar_unitary_from, random_density_from, rng_from_seed};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    fn ball() -> impl Strategy<Value = BlochVector<f64>> {
        (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, 0.0f64..1.0).prop_map(|(x, y, z, t)| {
            let n = (x * x + y * y + z * z).sqrt().max(1e-12);
            BlochVector::new(x / n * t, y / n * t, z / n * t)
        })
    }

    fn angle() -> impl Strategy<Value = f64> {
        -3.2f64..3.2
    }

    proptest! {
        #[test]
        fn affine_extraction_matches_partial_trace(seed in any::<u64>(), m in ball()) {
            let mut rng = rng_from_seed(seed);
            let u = haar_unitary_from::<f64, _>(4, &mut rng);
            let rho = random_density_from::<f64, _>(2, &mut rng);
            let xi = density_from_bloch(&m).unwrap();
            let ch = concurrent_channel(&u, &rho).unwrap();
            let exact = bloch_components(&conjugate_and_reduce(&u, &rho, &xi, 1).unwrap());
            prop_assert!(ch.apply(&m).distance(&exact) < 1e-10);
            let sys = system_channel(&u, &xi).unwrap();
            let exact = bloch_components(&conjugate_and_reduce(&u, &rho, &xi, 0).unwrap());
            prop_assert!(sys.apply(&bloch_components(&rho)).distance(&exact) < 1e-10);
        }

        #[test]
        fn determinant_formula(x in angle(), y in angle(), z in angle(), r in ball()) {
            let a = InteractionAngles::new(x, y, z);
            prop_assert!((mat3::det(&f_matrix_analytic(&a, &r)) - det_f_analytic(&a, &r)).abs() < 1e-12);
        }

        #[test]
        fn two_critical_cosines_kill_the_determinant(
            pair in 0usize..3, k1 in -2i32..3, k2 in -2i32..3, free in angle(), r in ball(),
        ) {
            let mut alpha = [free; 3];
            let (i, j) = [(0, 1), (0, 2), (1, 2)][pair];
            alpha[i] = FRAC_PI_4 + f64::from(k1) * std::f64::consts::FRAC_PI_2;
            alpha[j] = -FRAC_PI_4 + f64::from(k2) * std::f64::consts::FRAC_PI_2;
            let a = InteractionAngles { alpha };
            prop_assert!(det_f_analytic(&a, &r).abs() < 1e-12);
        }

        #[test]
        fn one_critical_cosine_leaves_some_nonsingular_input(x in angle(), y in angle(), which in 0usize..3) {
            // Only axis `which` is critical.
            let mut others = [x, y].into_iter();
            let alpha: [f64; 3] = std::array::from_fn(|j| if j == which { FRAC_PI_4 } else { others.next().unwrap() });
            let a = InteractionAngles { alpha };
            let others_critical = (0..3).filter(|&j| j != which).any(|j| a.c(j).abs() < 1e-3);
            prop_assume!(!others_critical);
            let worst = (0..3).map(|k| det_f_analytic(&a, &BlochVector::axis(k)).abs()).fold(0.0, f64::max);
            prop_assert!(worst > 1e-9);
        }

        #[test]
        fn rank_one_products_vanish(sx in any::<bool>(), sy in any::<bool>(), z in angle(), r1 in ball(), r2 in ball()) {
            let q = |neg: bool| if neg { -FRAC_PI_4 } else { FRAC_PI_4 };
            let a = InteractionAngles::new(q(sx), q(sy), z);
            let prod = mat3::mul(&f_matrix_analytic(&a, &r2), &f_matrix_analytic(&a, &r1));
            prop_assert!(mat3::max_abs(&prod) < 1e-15);
        }

        #[test]
        fn irrelevant_directions_are_invisible(seed in any::<u64>(), factorized in any::<bool>()) {
            let mut rng = rng_from_seed(seed);
            let u = if factorized {
                tensor_product(&haar_unitary_from(2, &mut rng), &haar_unitary_from(2, &mut rng))
            } else {
                // Two irrelevant directions.
                crate::gates::cnot::<f64>()
            };
            let s = irrelevant_subspace(&u).unwrap();
            for v in s.basis() {
                let a = (0..3).fold(ComplexMatrix::zeros(2, 2), |acc, k| &acc + &pauli(k).scale(v[k]));
                for _ in 0..100 {
                    let rho = random_density_from::<f64, _>(2, &mut rng);
                    prop_assert!(conjugate_and_reduce(&u, &rho, &a, 0).unwrap().frobenius_norm() < 1e-9);
                }
            }
        }

        #[test]
        fn system_channel_uses_the_same_closed_form(x in angle(), y in angle(), z in angle(), m in ball()) {
            let a = InteractionAngles::new(x, y, z);
            let e = system_channel(&interaction(a.alpha), &density_from_bloch(&m).unwrap()).unwrap();
            prop_assert!(mat3::max_abs(&mat3::sub(&e.matrix, &f_matrix_analytic(&a, &m))) < 1e-10);
            let f = concurrent_channel(&interaction(a.alpha), &density_from_bloch(&m).unwrap()).unwrap();
            prop_assert!(mat3::max_abs(&mat3::sub(&f.matrix, &f_matrix_analytic(&a, &m))) < 1e-10);
        }

        #[test]
        fn channels_keep_states_in_the_ball(seed in any::<u64>(), r in ball(), m in ball()) {
            let u = haar_unitary_from::<f64, _>(4, &mut rng_from_seed(seed));
            let ch = system_channel(&u, &density_from_bloch(&m).unwrap()).unwrap();
            prop_assert!(ch.apply(&r).norm() <= 1.0 + 1e-9);
        }
    }
}

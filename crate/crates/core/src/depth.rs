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

//! Memory depth of the channel generated by a two-qubit unitary.
//!
//! Two independent routes: an analytic verdict from the canonical
//! interaction angles plus a memory-side rotation constraint, and a numeric
//! search over products of concurrent-channel matrices projected onto the
//! relevant memory directions.

use serde::Serialize;

use crate::bloch::{concurrent_channel, density_from_bloch, irrelevant_subspace_tol, bloch_rotation, BlochVector};
use crate::error::Result;
use crate::kak::{kak_decompose, KakDecomposition};
use crate::linalg::ComplexMatrix;
use crate::mat3::{self, Mat3};
use crate::scalar::Real;

/// Values in `[tol, NEAR_THRESHOLD)` are flagged as close calls.
pub const NEAR_THRESHOLD: f64 = 1e-6;

/// Length of the input sequence reported as a witness for infinite depth.
pub const WITNESS_LENGTH: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Zero,
    One,
    Two,
    Infinite,
}

impl Verdict {
    pub fn depth(self) -> Option<usize> {
        match self {
            Verdict::Zero => Some(0),
            Verdict::One => Some(1),
            Verdict::Two => Some(2),
            Verdict::Infinite => None,
        }
    }
}

/// Which pairs of `cos 2α_j` vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CriticalPairs {
    pub xy: bool,
    pub xz: bool,
    pub yz: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessKind {
    /// Constant sequence with a nonsingular concurrent matrix: every power
    /// keeps a relevant component, for all lengths.
    NonsingularConstant,
    /// Worst tetrahedral sequence of the reported length.
    TetrahedralSearch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness<T> {
    pub kind: WitnessKind,
    pub inputs: Vec<BlochVector<T>>,
    /// `‖P_rel · F(r_n)⋯F(r_1)‖_F`.
    pub relevant_norm: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real + Serialize")]
pub struct DepthCertificate<T> {
    pub decomposition: KakDecomposition<T>,
    pub cos_2alpha: [T; 3],
    pub critical_pairs: CriticalPairs,
    /// Axis whose cosine does not vanish, when exactly two do.
    pub distinguished_axis: Option<usize>,
    /// Bloch rotation of `W₂W₁`.
    pub memory_rotation: Mat3<T>,
    /// `max_{i≠d} |S_{d,i}|` for the distinguished axis `d`.
    pub memory_constraint_residual: Option<T>,
    pub memory_constraint_holds: Option<bool>,
    pub witness: Option<Witness<T>>,
    pub near_threshold: bool,
    pub tolerance: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real + Serialize")]
pub struct DepthClassification<T> {
    pub verdict: Verdict,
    pub certificate: DepthCertificate<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NumericStatus {
    DepthIs(usize),
    ExceedsBound(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericDepthResult<T> {
    pub status: NumericStatus,
    pub n_max: usize,
    /// Entry `n` is the largest relevant norm over all length-`n` products;
    /// entry 0 is `‖P_rel‖_F`.
    pub residuals: Vec<T>,
    pub irrelevant_dim: usize,
    pub tolerance: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real + Serialize")]
pub struct CrosscheckReport<T> {
    pub analytic: DepthClassification<T>,
    pub numeric: NumericDepthResult<T>,
    pub agree: bool,
}

/// Tetrahedral probe inputs: the origin and the three unit axes.
pub fn tetrahedral_inputs<T: Real>() -> [BlochVector<T>; 4] {
    [BlochVector::zero(), BlochVector::axis(0), BlochVector::axis(1), BlochVector::axis(2)]
}

/// Concurrent-channel matrices `F(r)` at the tetrahedral inputs.
pub fn probe_matrices<T: Real>(u: &ComplexMatrix<T>) -> Result<[Mat3<T>; 4]> {
    let mut out = [mat3::zero(); 4];
    for (slot, r) in out.iter_mut().zip(tetrahedral_inputs()) {
        *slot = concurrent_channel(u, &density_from_bloch(&r)?)?.matrix;
    }
    Ok(out)
}

/// Projector onto the relevant memory directions.
pub fn relevant_projector<T: Real>(u: &ComplexMatrix<T>, tol: T) -> Result<(Mat3<T>, usize)> {
    let irr = irrelevant_subspace_tol(u, tol)?;
    let mut p = mat3::identity();
    for v in irr.basis() {
        for i in 0..3 {
            for j in 0..3 {
                p[i][j] -= v[i].re * v[j].re;
            }
        }
    }
    Ok((p, irr.dim()))
}

/// `F(r)` for any `r`, from the tetrahedral probes by affinity.
fn f_at<T: Real>(probes: &[Mat3<T>; 4], r: &BlochVector<T>) -> Mat3<T> {
    let w0 = T::one() - r.0[0] - r.0[1] - r.0[2];
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).fold(w0 * probes[0][i][j], |acc, k| acc + r.0[k] * probes[k + 1][i][j]))
    })
}

/// Largest relevant norm per length `0..=n_max`, with an argmax sequence for
/// each length (inputs listed in time order).
fn relevant_norms<T: Real>(p_rel: &Mat3<T>, probes: &[Mat3<T>; 4], n_max: usize) -> (Vec<T>, Vec<Vec<usize>>) {
    let mut best = vec![T::zero(); n_max + 1];
    let mut arg = vec![Vec::new(); n_max + 1];
    best[0] = mat3::frobenius(p_rel);
    let mut stack = vec![(mat3::identity::<T>(), Vec::<usize>::new())];
    while let Some((g, seq)) = stack.pop() {
        if seq.len() == n_max {
            continue;
        }
        for (k, f) in probes.iter().enumerate() {
            let next = mat3::mul(f, &g);
            let mut s = seq.clone();
            s.push(k);
            let norm = mat3::frobenius(&mat3::mul(p_rel, &next));
            let n = s.len();
            if norm > best[n] || arg[n].is_empty() {
                best[n] = norm;
                arg[n] = s.clone();
            }
            stack.push((next, s));
        }
    }
    (best, arg)
}

pub fn classify_analytic<T: Real>(u: &ComplexMatrix<T>) -> Result<DepthClassification<T>> {
    classify_analytic_tol(u, T::structural_tol())
}

/// Verdict from the canonical angles:
/// all zero → `Zero`; all `π/4` → `One`; exactly two vanishing `cos 2α_j`
/// and `S_{d,i} = 0` (`i ≠ d`) for the rotation `S` of `W₂W₁` → `Two`;
/// otherwise `Infinite`, with a witness sequence.
pub fn classify_analytic_tol<T: Real>(u: &ComplexMatrix<T>, tol: T) -> Result<DepthClassification<T>> {
    let d = kak_decompose(u)?;
    let alpha = d.angles.alpha;
    let cos: [T; 3] = std::array::from_fn(|j| d.angles.c(j));
    let vanish: [bool; 3] = std::array::from_fn(|j| cos[j].abs() < tol);
    let near = T::lit(NEAR_THRESHOLD);
    let is_near = |x: T| x.abs() >= tol && x.abs() < near;

    let mut near_threshold = cos.iter().any(|&c| is_near(c));
    let q = T::FRAC_PI_4();
    let zero = alpha.iter().all(|a| a.abs() < tol);
    let swap_like = alpha.iter().all(|&a| (a - q).abs() < tol);
    near_threshold |= alpha.iter().any(|&a| is_near(a) || is_near(a - q));

    let critical_pairs = CriticalPairs { xy: vanish[0] && vanish[1], xz: vanish[0] && vanish[2], yz: vanish[1] && vanish[2] };
    let n_vanish = vanish.iter().filter(|&&v| v).count();
    let distinguished_axis = if n_vanish == 2 { vanish.iter().position(|&v| !v) } else { None };

    let memory_rotation = bloch_rotation(&(&d.w2 * &d.w1));
    let memory_constraint_residual = distinguished_axis
        .map(|ax| (0..3).filter(|&i| i != ax).fold(T::zero(), |acc, i| acc.max(memory_rotation[ax][i].abs())));
    if let Some(r) = memory_constraint_residual {
        near_threshold |= is_near(r);
    }
    let memory_constraint_holds = memory_constraint_residual.map(|r| r < tol);

    let verdict = if zero {
        Verdict::Zero
    } else if swap_like {
        Verdict::One
    } else if n_vanish == 2 && memory_constraint_holds == Some(true) {
        Verdict::Two
    } else {
        Verdict::Infinite
    };

    let witness = if verdict == Verdict::Infinite { Some(infinite_witness(u, tol)?) } else { None };

    Ok(DepthClassification {
        verdict,
        certificate: DepthCertificate {
            decomposition: d,
            cos_2alpha: cos,
            critical_pairs,
            distinguished_axis,
            memory_rotation,
            memory_constraint_residual,
            memory_constraint_holds,
            witness,
            near_threshold,
            tolerance: tol,
        },
    })
}

fn infinite_witness<T: Real>(u: &ComplexMatrix<T>, tol: T) -> Result<Witness<T>> {
    let probes = probe_matrices(u)?;
    let (p_rel, _) = relevant_projector(u, tol)?;
    let mut candidates = vec![BlochVector::zero()];
    for k in 0..3 {
        candidates.push(BlochVector::axis(k));
        let mut neg = BlochVector::zero();
        neg.0[k] = -T::one();
        candidates.push(neg);
    }
    for r in candidates {
        let f = f_at(&probes, &r);
        if mat3::det(&f).abs() > tol {
            let mut g = mat3::identity();
            for _ in 0..WITNESS_LENGTH {
                g = mat3::mul(&f, &g);
            }
            return Ok(Witness {
                kind: WitnessKind::NonsingularConstant,
                inputs: vec![r; WITNESS_LENGTH],
                relevant_norm: mat3::frobenius(&mat3::mul(&p_rel, &g)),
            });
        }
    }
    let (norms, args) = relevant_norms(&p_rel, &probes, WITNESS_LENGTH);
    let tet = tetrahedral_inputs();
    Ok(Witness {
        kind: WitnessKind::TetrahedralSearch,
        inputs: args[WITNESS_LENGTH].iter().map(|&k| tet[k]).collect(),
        relevant_norm: norms[WITNESS_LENGTH],
    })
}

pub fn classify_numeric<T: Real>(u: &ComplexMatrix<T>, n_max: usize) -> Result<NumericDepthResult<T>> {
    classify_numeric_tol(u, n_max, T::structural_tol())
}

/// Smallest `n ≤ n_max` such that every length-`n` product of concurrent
/// matrices has no relevant component. Exact over the whole Bloch ball:
/// the product is affine in each input, so checking tetrahedral inputs
/// suffices.
pub fn classify_numeric_tol<T: Real>(u: &ComplexMatrix<T>, n_max: usize, tol: T) -> Result<NumericDepthResult<T>> {
    let probes = probe_matrices(u)?;
    let (p_rel, irrelevant_dim) = relevant_projector(u, tol)?;
    let (residuals, _) = relevant_norms(&p_rel, &probes, n_max);
    let status = residuals
        .iter()
        .position(|&r| r < tol)
        .map(NumericStatus::DepthIs)
        .unwrap_or(NumericStatus::ExceedsBound(n_max));
    Ok(NumericDepthResult { status, n_max, residuals, irrelevant_dim, tolerance: tol })
}

/// Runs both classifiers. They agree when a finite analytic depth `d ≤ n_max`
/// meets `DepthIs(d)`, or when an infinite (or longer than `n_max`) analytic
/// depth meets `ExceedsBound`.
pub fn crosscheck<T: Real>(u: &ComplexMatrix<T>, n_max: usize, tol: T) -> Result<CrosscheckReport<T>> {
    let analytic = classify_analytic_tol(u, tol)?;
    let numeric = classify_numeric_tol(u, n_max, tol)?;
    let agree = match (analytic.verdict.depth(), numeric.status) {
        (Some(d), NumericStatus::DepthIs(n)) => d == n,
        (Some(d), NumericStatus::ExceedsBound(_)) => d > n_max,
        (None, NumericStatus::ExceedsBound(_)) => true,
        (None, NumericStatus::DepthIs(_)) => false,
    };
    Ok(CrosscheckReport { analytic, numeric, agree })
}

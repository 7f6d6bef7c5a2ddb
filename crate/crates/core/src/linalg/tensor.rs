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

//! Tensor products, partial traces and subsystem-local operations.

use num_complex::Complex;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Kronecker product `a ⊗ b` (row-major block convention).
pub fn tensor_product<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (p, q) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * p, a.cols() * q, |r, s| a[(r / p, s / q)] * b[(r % p, s % q)])
}

/// `m₁ ⊗ m₂ ⊗ ⋯`, left to right.
pub fn tensor_product_all<T: Real>(factors: &[ComplexMatrix<T>]) -> ComplexMatrix<T> {
    let (first, rest) = factors.split_first().expect("at least one factor");
    rest.iter().fold(first.clone(), |acc, f| tensor_product(&acc, f))
}

/// Digits of `index` in the mixed radix `dims`, most significant first.
fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    out
}

fn check_dims<T: Real>(m: &ComplexMatrix<T>, dims: &[usize]) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("expected a square matrix, got {}×{}", m.rows(), m.cols())));
    }
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::Dimension("subsystem dimensions must be positive".into()));
    }
    let total: usize = dims.iter().product();
    if total != m.rows() {
        return Err(Error::Dimension(format!(
            "subsystem dimensions {dims:?} multiply to {total}, matrix has dimension {}",
            m.rows()
        )));
    }
    Ok(total)
}

/// Reduced operator on the subsystems listed in `keep` (in increasing
/// subsystem order), tracing out all others.
pub fn partial_trace<T: Real>(m: &ComplexMatrix<T>, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix<T>> {
    let total = check_dims(m, dims)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::Dimension(format!("subsystem {bad} does not exist among {} subsystems", dims.len())));
    }
    if kept.is_empty() {
        return Ok(ComplexMatrix::from_fn(1, 1, |_, _| m.trace()));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let kept_total: usize = kept_dims.iter().product();

    // (kept index, traced index) of every full basis index.
    let split: Vec<(usize, usize)> = (0..total)
        .map(|i| {
            let d = digits(i, dims);
            let ki = kept.iter().fold(0, |acc, &k| acc * dims[k] + d[k]);
            let ti = traced.iter().fold(0, |acc, &k| acc * dims[k] + d[k]);
            (ki, ti)
        })
        .collect();

    let mut out = ComplexMatrix::zeros(kept_total, kept_total);
    for r in 0..total {
        let (kr, tr) = split[r];
        for s in 0..total {
            let (ks, ts) = split[s];
            if tr == ts {
                out[(kr, ks)] += m[(r, s)];
            }
        }
    }
    Ok(out)
}

/// Reorders subsystems: subsystem `k` of the result is subsystem `order[k]`
/// of the input.
pub fn permute_subsystems<T: Real>(m: &ComplexMatrix<T>, dims: &[usize], order: &[usize]) -> Result<ComplexMatrix<T>> {
    let total = check_dims(m, dims)?;
    let mut seen = vec![false; dims.len()];
    if order.len() != dims.len() || order.iter().any(|&k| k >= dims.len() || std::mem::replace(&mut seen[k], true)) {
        return Err(Error::Dimension(format!("{order:?} is not a permutation of {} subsystems", dims.len())));
    }
    let new_dims: Vec<usize> = order.iter().map(|&k| dims[k]).collect();
    // Full index in the new ordering for every old index.
    let map: Vec<usize> = (0..total)
        .map(|i| {
            let d = digits(i, dims);
            order.iter().fold(0, |acc, &k| acc * dims[k] + d[k])
        })
        .collect();
    debug_assert_eq!(new_dims.iter().product::<usize>(), total);
    let mut out = ComplexMatrix::zeros(total, total);
    for r in 0..total {
        for s in 0..total {
            out[(map[r], map[s])] = m[(r, s)];
        }
    }
    Ok(out)
}

/// `(U_targets ⊗ I_rest) · m`, where `u` acts on the subsystems `targets`
/// in the listed order.
fn left_apply<T: Real>(m: &ComplexMatrix<T>, u: &ComplexMatrix<T>, dims: &[usize], targets: &[usize]) -> ComplexMatrix<T> {
    let total = m.rows();
    let k = u.rows();
    let rest: Vec<usize> = (0..dims.len()).filter(|t| !targets.contains(t)).collect();
    let rest_total: usize = rest.iter().map(|&r| dims[r]).product();
    // groups[rest_index][target_index] = full index
    let mut groups = vec![vec![0usize; k]; rest_total];
    for i in 0..total {
        let d = digits(i, dims);
        let ti = targets.iter().fold(0, |acc, &t| acc * dims[t] + d[t]);
        let ri = rest.iter().fold(0, |acc, &r| acc * dims[r] + d[r]);
        groups[ri][ti] = i;
    }
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = ComplexMatrix::zeros(total, m.cols());
    let mut buf = vec![zero; k];
    for col in 0..m.cols() {
        for g in &groups {
            for (t, &row) in g.iter().enumerate() {
                buf[t] = m[(row, col)];
            }
            for (s, &row) in g.iter().enumerate() {
                let mut acc = zero;
                for t in 0..k {
                    acc += u[(s, t)] * buf[t];
                }
                out[(row, col)] = acc;
            }
        }
    }
    out
}

/// Conjugates `rho` by `u` embedded on `targets`: `U ρ U†` with `U` acting as
/// the identity on the remaining subsystems. Costs `O(k·D²)` instead of a
/// dense `D × D` product.
pub fn apply_local<T: Real>(rho: &ComplexMatrix<T>, u: &ComplexMatrix<T>, dims: &[usize], targets: &[usize]) -> Result<ComplexMatrix<T>> {
    check_dims(rho, dims)?;
    let mut seen = vec![false; dims.len()];
    if targets.is_empty() || targets.iter().any(|&t| t >= dims.len() || std::mem::replace(&mut seen[t], true)) {
        return Err(Error::Dimension(format!("invalid target subsystems {targets:?}")));
    }
    let k: usize = targets.iter().map(|&t| dims[t]).product();
    if u.rows() != k || u.cols() != k {
        return Err(Error::Dimension(format!("operator of shape {}×{} on subsystems of dimension {k}", u.rows(), u.cols())));
    }
    let half = left_apply(rho, u, dims, targets);
    Ok(left_apply(&half.adjoint(), u, dims, targets).adjoint())
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::linalg::{haar_unitary_from, nullspace_basis, random_density_from, rng_from_seed};
    use proptest::prelude::*;

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix<f64> {
        let u = haar_unitary_from::<f64, _>(rows.max(cols), &mut rng_from_seed(seed));
        ComplexMatrix::from_fn(rows, cols, |r, c| u[(r, c)] * (1.0 + r as f64))
    }

    proptest! {
        #[test]
        fn kron_is_associative(seed in any::<u64>(), p in 1usize..4, q in 1usize..4, r in 1usize..3) {
            let a = random_matrix(p, q, seed);
            let b = random_matrix(q, r, seed ^ 1);
            let c = random_matrix(r, p, seed ^ 2);
            let left = tensor_product(&tensor_product(&a, &b), &c);
            let right = tensor_product(&a, &tensor_product(&b, &c));
            prop_assert_eq!(left.rows(), right.rows());
            // Same element order; values differ only by rounding of a·(b·c) vs (a·b)·c.
            prop_assert!((&left - &right).max_abs() <= 1e-14);
        }

        #[test]
        fn partial_trace_of_product(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
            let mut rng = rng_from_seed(seed);
            let a = random_density_from::<f64, _>(da, &mut rng).scale_real(1.7);
            let b = random_matrix(db, db, seed ^ 5);
            let ab = tensor_product(&a, &b);
            let keep_a = partial_trace(&ab, &[da, db], &[0]).unwrap();
            let keep_b = partial_trace(&ab, &[da, db], &[1]).unwrap();
            prop_assert!((&keep_a - &a.scale(b.trace())).frobenius_norm() < 1e-12);
            prop_assert!((&keep_b - &b.scale(a.trace())).frobenius_norm() < 1e-12);
        }

        #[test]
        fn reduced_states_stay_physical(seed in any::<u64>(), keep in 0usize..3) {
            let mut rng = rng_from_seed(seed);
            let rho = random_density_from::<f64, _>(8, &mut rng);
            let u = haar_unitary_from::<f64, _>(8, &mut rng);
            let evolved = &(&u * &rho) * &u.adjoint();
            let reduced = partial_trace(&evolved, &[2, 2, 2], &[keep]).unwrap();
            prop_assert!((reduced.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(reduced.min_eigenvalue_hermitian().unwrap() >= -1e-10);
        }

        #[test]
        fn nullspace_vectors_are_annihilated(seed in any::<u64>(), rank in 0usize..4) {
            // 5×4 matrix of the chosen rank.
            let left = random_matrix(5, 5, seed);
            let right = random_matrix(4, 4, seed ^ 9);
            let mut m = ComplexMatrix::zeros(5, 4);
            for k in 0..rank {
                for i in 0..5 {
                    for j in 0..4 {
                        m[(i, j)] += left[(i, k)] * right[(k, j)];
                    }
                }
            }
            let tol = 1e-9;
            let ns = nullspace_basis(&m, tol).unwrap();
            prop_assert_eq!(ns.dim(), 4 - rank);
            for v in ns.basis() {
                prop_assert!((&m * &ComplexMatrix::column_vector(v)).frobenius_norm() < 10.0 * tol);
            }
        }

        #[test]
        fn apply_local_agrees_with_dense(seed in any::<u64>(), target in 0usize..3) {
            let mut rng = rng_from_seed(seed);
            let rho = random_density_from::<f64, _>(8, &mut rng);
            let u = haar_unitary_from::<f64, _>(2, &mut rng);
            let factors: Vec<ComplexMatrix<f64>> =
                (0..3).map(|k| if k == target { u.clone() } else { ComplexMatrix::identity(2) }).collect();
            let dense = tensor_product_all(&factors);
            let expected = &(&dense * &rho) * &dense.adjoint();
            let fast = apply_local(&rho, &u, &[2, 2, 2], &[target]).unwrap();
            prop_assert!((&fast - &expected).frobenius_norm() < 1e-13);
        }
    }
}

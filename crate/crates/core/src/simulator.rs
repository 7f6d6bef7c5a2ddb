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

//! Sequential uses of a memory channel, exact multi-slot simulation and the
//! reset-sequence factorization check.
//!
//! Joint registers are ordered input slots first, memory last. A reset
//! verification uses the slot order `reset₁, test₁, reset₂, test₂, memory`.

use num_complex::Complex;
use serde::Serialize;

use crate::bloch::{bloch_components, ensure_density, extract_affine, operator_from_bloch, system_channel, AffineChannelRep, BlochVector};
use crate::error::{Error, Result};
use crate::linalg::{apply_local, partial_trace, pauli, permute_subsystems, tensor_product, tensor_product_all, ComplexMatrix};
use crate::scalar::Real;

/// Largest register (slots plus memory) simulated exactly.
pub const MAX_QUBITS: usize = 7;
/// Longest reset sequence accepted by the operator routines.
pub const MAX_RESET: usize = 4;

/// A device `U` together with its current memory state.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real + Serialize")]
pub struct MemoryProcess<T> {
    pub unitary: ComplexMatrix<T>,
    pub memory_state: ComplexMatrix<T>,
    pub use_count: usize,
}

impl<T: Real> MemoryProcess<T> {
    pub fn new(unitary: ComplexMatrix<T>, memory_state: ComplexMatrix<T>) -> Result<Self> {
        unitary.ensure_unitary(4, T::unitarity_tol())?;
        ensure_density(&memory_state, 2)?;
        Ok(Self { unitary, memory_state, use_count: 0 })
    }

    /// One use: returns the output state and the updated process.
    pub fn step(&self, rho_in: &ComplexMatrix<T>) -> Result<(ComplexMatrix<T>, Self)> {
        ensure_density(rho_in, 2)?;
        let joint = apply_local(&tensor_product(rho_in, &self.memory_state), &self.unitary, &[2, 2], &[0, 1])?;
        let output = partial_trace(&joint, &[2, 2], &[0])?;
        let memory_state = partial_trace(&joint, &[2, 2], &[1])?.hermitian_part();
        Ok((output.hermitian_part(), Self { unitary: self.unitary.clone(), memory_state, use_count: self.use_count + 1 }))
    }
}

pub fn step<T: Real>(p: &MemoryProcess<T>, rho_in: &ComplexMatrix<T>) -> Result<(ComplexMatrix<T>, MemoryProcess<T>)> {
    p.step(rho_in)
}

/// Memory Bloch vectors `m₁ … m_{n+1}`, the channel `E_j` seen by input `j`,
/// and the outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real + Serialize")]
pub struct Trajectory<T> {
    pub memory_blochs: Vec<BlochVector<T>>,
    pub per_use_channels: Vec<AffineChannelRep<T>>,
    pub outputs: Vec<ComplexMatrix<T>>,
}

pub fn run_sequence<T: Real>(u: &ComplexMatrix<T>, xi0: &ComplexMatrix<T>, inputs: &[ComplexMatrix<T>]) -> Result<Trajectory<T>> {
    let mut p = MemoryProcess::new(u.clone(), xi0.clone())?;
    let mut traj = Trajectory {
        memory_blochs: vec![bloch_components(xi0)],
        per_use_channels: Vec::with_capacity(inputs.len()),
        outputs: Vec::with_capacity(inputs.len()),
    };
    for rho in inputs {
        traj.per_use_channels.push(system_channel(u, &p.memory_state)?);
        let (out, next) = p.step(rho)?;
        traj.outputs.push(out);
        traj.memory_blochs.push(bloch_components(&next.memory_state));
        p = next;
    }
    Ok(traj)
}

fn check_slots(n_slots: usize) -> Result<()> {
    if n_slots == 0 {
        return Err(Error::Dimension("at least one input slot is required".into()));
    }
    if n_slots + 1 > MAX_QUBITS {
        return Err(Error::SizeLimit(format!("{n_slots} slots plus memory exceed {MAX_QUBITS} qubits")));
    }
    Ok(())
}

/// Joint output on `n_slots` inputs fed in order through the device, memory
/// starting in `xi0`. `omega` may be entangled across slots.
pub fn joint_output<T: Real>(u: &ComplexMatrix<T>, xi0: &ComplexMatrix<T>, omega: &ComplexMatrix<T>, n_slots: usize) -> Result<ComplexMatrix<T>> {
    check_slots(n_slots)?;
    u.ensure_unitary(4, T::unitarity_tol())?;
    ensure_density(xi0, 2)?;
    ensure_density(omega, 1 << n_slots)?;
    joint_output_unchecked(u, xi0, omega, n_slots)
}

fn joint_output_unchecked<T: Real>(u: &ComplexMatrix<T>, xi0: &ComplexMatrix<T>, omega: &ComplexMatrix<T>, n_slots: usize) -> Result<ComplexMatrix<T>> {
    let dims = vec![2; n_slots + 1];
    let mut state = tensor_product(omega, xi0);
    for slot in 0..n_slots {
        state = apply_local(&state, u, &dims, &[slot, n_slots])?;
    }
    let keep: Vec<usize> = (0..n_slots).collect();
    Ok(partial_trace(&state, &dims, &keep)?.hermitian_part())
}

/// Blocks `A_ab` of `U = Σ_ab A_ab ⊗ |a⟩⟨b|`: `A_ab[i][j] = U[2i + a][2j + b]`.
pub fn kraus_blocks<T: Real>(u: &ComplexMatrix<T>) -> Result<[[ComplexMatrix<T>; 2]; 2]> {
    if u.rows() != 4 || u.cols() != 4 {
        return Err(Error::Dimension(format!("expected a 4×4 operator, got {}×{}", u.rows(), u.cols())));
    }
    Ok(std::array::from_fn(|a| std::array::from_fn(|b| ComplexMatrix::from_fn(2, 2, |i, j| u[(2 * i + a, 2 * j + b)]))))
}

/// Largest violation of `Σ_a A†_ab A_ac = δ_bc I` and `Σ_b A_ab A†_cb = δ_ac I`.
pub fn kraus_normalization_residual<T: Real>(blocks: &[[ComplexMatrix<T>; 2]; 2]) -> T {
    let i2 = ComplexMatrix::<T>::identity(2);
    let z2 = ComplexMatrix::<T>::zeros(2, 2);
    let mut worst = T::zero();
    for x in 0..2 {
        for y in 0..2 {
            let target = if x == y { &i2 } else { &z2 };
            let mut first = z2.clone();
            let mut second = z2.clone();
            for k in 0..2 {
                first = &first + &(&blocks[k][x].adjoint() * &blocks[k][y]);
                second = &second + &(&blocks[x][k] * &blocks[y][k].adjoint());
            }
            worst = worst.max((&first - target).frobenius_norm()).max((&second - target).frobenius_norm());
        }
    }
    worst
}

fn check_reset<T: Real>(reset: &[ComplexMatrix<T>]) -> Result<()> {
    if reset.len() > MAX_RESET {
        return Err(Error::SizeLimit(format!("reset sequence of length {} exceeds {MAX_RESET}", reset.len())));
    }
    reset.iter().try_for_each(|r| ensure_density(r, 2))
}

/// `M_{a_n a_0} = Σ A_{a₁a₀} ⊗ ⋯ ⊗ A_{a_n a_{n−1}}` on the reset slots.
/// For `n = 0` this is `δ_{a_n a_0}` as a 1×1 matrix.
fn path_operators<T: Real>(blocks: &[[ComplexMatrix<T>; 2]; 2], n: usize) -> [[ComplexMatrix<T>; 2]; 2] {
    if n == 0 {
        return std::array::from_fn(|a| {
            std::array::from_fn(|b| if a == b { ComplexMatrix::identity(1) } else { ComplexMatrix::zeros(1, 1) })
        });
    }
    // paths[end][start] accumulated one slot at a time.
    let mut paths: [[ComplexMatrix<T>; 2]; 2] = std::array::from_fn(|a| std::array::from_fn(|b| blocks[a][b].clone()));
    for _ in 1..n {
        paths = std::array::from_fn(|end| {
            std::array::from_fn(|start| {
                let dim = paths[0][start].rows() * 2;
                (0..2).fold(ComplexMatrix::zeros(dim, dim), |acc, mid| &acc + &tensor_product(&paths[mid][start], &blocks[end][mid]))
            })
        });
    }
    paths
}

/// `Ω_ac(Ξ, ω) = Σ tr(M_{a_n a} Ξ M†_{c_n c}) A_{a_{n+1} a_n} ω A†_{a_{n+1} c_n}`
/// with `Ξ = R₁ ⊗ ⋯ ⊗ R_n`, by explicit summation over memory-basis paths.
///
/// The reset channel on memory state `ξ` is `Σ_ac ξ_ac Ω_ac`; every `Ω_aa` has
/// unit trace.
pub fn omega_operators<T: Real>(u: &ComplexMatrix<T>, reset: &[ComplexMatrix<T>], omega: &ComplexMatrix<T>) -> Result<[[ComplexMatrix<T>; 2]; 2]> {
    u.ensure_unitary(4, T::unitarity_tol())?;
    check_reset(reset)?;
    ensure_density(omega, 2)?;
    let blocks = kraus_blocks(u)?;
    let m = path_operators(&blocks, reset.len());
    let xi_res = if reset.is_empty() { ComplexMatrix::identity(1) } else { tensor_product_all(reset) };
    let zero = Complex::new(T::zero(), T::zero());
    let mut out: [[ComplexMatrix<T>; 2]; 2] = std::array::from_fn(|_| std::array::from_fn(|_| ComplexMatrix::zeros(2, 2)));
    for a in 0..2 {
        for c in 0..2 {
            for an in 0..2 {
                for cn in 0..2 {
                    let weight = (&(&m[an][a] * &xi_res) * &m[cn][c].adjoint()).trace();
                    if weight == zero {
                        continue;
                    }
                    for next in 0..2 {
                        let term = &(&blocks[next][an] * omega) * &blocks[next][cn].adjoint();
                        out[a][c] = &out[a][c] + &term.scale(weight);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Memory state after feeding `reset` from `xi`.
fn memory_after<T: Real>(u: &ComplexMatrix<T>, reset: &[ComplexMatrix<T>], xi: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let mut p = MemoryProcess::new(u.clone(), xi.clone())?;
    for r in reset {
        p = p.step(r)?.1;
    }
    Ok(p.memory_state)
}

/// Channel on the input that follows `reset`, memory initially `xi`.
pub fn reset_channel<T: Real>(u: &ComplexMatrix<T>, reset: &[ComplexMatrix<T>], xi: &ComplexMatrix<T>) -> Result<AffineChannelRep<T>> {
    check_reset(reset)?;
    let mem = memory_after(u, reset, xi)?;
    system_channel(u, &mem)
}

/// Probe memory states for memory-independence checks.
pub fn probe_memories<T: Real>() -> Vec<ComplexMatrix<T>> {
    let z = |s: f64| BlochVector::new(T::zero(), T::zero(), T::lit(s));
    [BlochVector::zero(), z(1.0), z(-1.0), BlochVector::axis(0)].iter().map(|r| operator_from_bloch(T::one(), r)).collect()
}

/// Inputs at which channel distances are evaluated: `I/2`, `(I + σ_k)/2`.
pub fn probe_inputs<T: Real>() -> Vec<ComplexMatrix<T>> {
    std::iter::once(BlochVector::zero()).chain((0..3).map(BlochVector::axis)).map(|r| operator_from_bloch(T::one(), &r)).collect()
}

/// Largest trace-norm distance between the two channels' outputs on the
/// probe inputs.
pub fn channel_distance<T: Real>(a: &AffineChannelRep<T>, b: &AffineChannelRep<T>) -> Result<T> {
    let mut worst = T::zero();
    for rho in probe_inputs::<T>() {
        let r = bloch_components(&rho);
        let diff = &operator_from_bloch(T::one(), &a.apply(&r)) - &operator_from_bloch(T::one(), &b.apply(&r));
        worst = worst.max(diff.trace_norm_hermitian()?);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResetVerificationReport<T> {
    /// Trace norm of `joint − (E₁ ⊗ E₂)[ω₁₂]` on the two test slots.
    pub factorization_residual: T,
    /// Largest channel distance between the reset channels for the actual
    /// memory and for each probe memory, over both resets.
    pub memory_independence_residual: T,
    /// Largest `‖Ω_ac‖_F`, `a ≠ c`, over probe inputs and both resets.
    pub omega_offdiag_residual: T,
    pub tolerance: T,
    pub passed: bool,
}

/// `(E₁ ⊗ E₂)[ω]` through Pauli transfer matrices.
fn product_channel_output<T: Real>(e1: &AffineChannelRep<T>, e2: &AffineChannelRep<T>, omega: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let basis: Vec<ComplexMatrix<T>> =
        std::iter::once(ComplexMatrix::identity(2)).chain((0..3).map(pauli)).collect();
    let (t1, t2) = (e1.ptm(), e2.ptm());
    let mut coeff = [[T::zero(); 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            coeff[mu][nu] = (&tensor_product(&basis[mu], &basis[nu]) * omega).trace().re;
        }
    }
    let quarter = T::lit(0.25);
    let mut out = ComplexMatrix::zeros(4, 4);
    for mu in 0..4 {
        for nu in 0..4 {
            let mut c = T::zero();
            for k in 0..4 {
                for l in 0..4 {
                    c += t1[mu][k] * coeff[k][l] * t2[nu][l];
                }
            }
            out = &out + &tensor_product(&basis[mu], &basis[nu]).scale_real(c * quarter);
        }
    }
    out
}

/// Feeds `reset1, test₁, reset2, test₂` with `omega12` on the test slots and
/// compares the joint test output against the product of the two reset
/// channels. The second channel uses the memory left after `reset1` and the
/// first marginal of `omega12`.
pub fn verify_reset_factorization<T: Real>(
    u: &ComplexMatrix<T>,
    reset1: &[ComplexMatrix<T>],
    reset2: &[ComplexMatrix<T>],
    omega12: &ComplexMatrix<T>,
    xi: &ComplexMatrix<T>,
    tol: T,
) -> Result<ResetVerificationReport<T>> {
    let (n1, n2) = (reset1.len(), reset2.len());
    let slots = n1 + n2 + 2;
    check_slots(slots)?;
    u.ensure_unitary(4, T::unitarity_tol())?;
    check_reset(reset1)?;
    check_reset(reset2)?;
    ensure_density(omega12, 4)?;
    ensure_density(xi, 2)?;

    // Build in the order (reset₁, test₁, test₂, reset₂), then move test₂ last.
    let mut factors: Vec<ComplexMatrix<T>> = reset1.to_vec();
    factors.push(omega12.clone());
    factors.extend(reset2.iter().cloned());
    let grouped = tensor_product_all(&factors);
    let mut order: Vec<usize> = (0..=n1).collect();
    order.extend((n1 + 2)..slots);
    order.push(n1 + 1);
    let input = permute_subsystems(&grouped, &vec![2; slots], &order)?;

    let out = joint_output_unchecked(u, xi, &input, slots)?;
    let joint = partial_trace(&out, &vec![2; slots], &[n1, slots - 1])?;

    let e1 = reset_channel(u, reset1, xi)?;
    let omega1 = partial_trace(omega12, &[2, 2], &[0])?;
    let mut block1 = reset1.to_vec();
    block1.push(omega1);
    let xi2 = memory_after(u, &block1, xi)?;
    let e2 = reset_channel(u, reset2, &xi2)?;
    let factorization_residual = (&joint - &product_channel_output(&e1, &e2, omega12)).trace_norm_hermitian()?;

    let mut memory_independence_residual = T::zero();
    let mut omega_offdiag_residual = T::zero();
    for (reset, base) in [(reset1, &e1), (reset2, &e2)] {
        for probe in probe_memories::<T>() {
            let other = reset_channel(u, reset, &probe)?;
            memory_independence_residual = memory_independence_residual.max(channel_distance(base, &other)?);
        }
        for w in probe_inputs::<T>() {
            let om = omega_operators(u, reset, &w)?;
            omega_offdiag_residual = omega_offdiag_residual.max(om[0][1].frobenius_norm()).max(om[1][0].frobenius_norm());
        }
    }

    let passed = factorization_residual < tol && memory_independence_residual < tol && omega_offdiag_residual < tol;
    Ok(ResetVerificationReport { factorization_residual, memory_independence_residual, omega_offdiag_residual, tolerance: tol, passed })
}

/// Channel on a single input extracted from the exact register simulation,
/// for cross-checking [`reset_channel`].
pub fn reset_channel_by_simulation<T: Real>(u: &ComplexMatrix<T>, reset: &[ComplexMatrix<T>], xi: &ComplexMatrix<T>) -> Result<AffineChannelRep<T>> {
    check_reset(reset)?;
    let n = reset.len();
    check_slots(n + 1)?;
    let prefix = if reset.is_empty() { ComplexMatrix::identity(1) } else { tensor_product_all(reset) };
    extract_affine(|w| {
        let out = joint_output_unchecked(u, xi, &tensor_product(&prefix, w), n + 1)?;
        partial_trace(&out, &vec![2; n + 1], &[n])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::density_from_bloch;
    use crate::gates::{cnot, swap, u_alpha_z};
    use crate::linalg::{haar_unitary, random_bloch_from, random_density_from, rng_from_seed};
    use crate::mat3;

    fn bell() -> ComplexMatrix<f64> {
        let s = 0.5f64.sqrt();
        let psi = ComplexMatrix::from_real(&[&[s], &[0.0], &[0.0], &[s]]);
        &psi * &psi.adjoint()
    }

    fn close(a: &ComplexMatrix<f64>, b: &ComplexMatrix<f64>, tol: f64) -> bool {
        (a - b).frobenius_norm() < tol
    }

    #[test]
    fn swap_step_exchanges() {
        let mut rng = rng_from_seed(1);
        let xi = random_density_from::<f64, _>(2, &mut rng);
        let rho = random_density_from::<f64, _>(2, &mut rng);
        let p = MemoryProcess::new(swap(), xi.clone()).unwrap();
        let (out, next) = p.step(&rho).unwrap();
        assert!(close(&out, &xi, 1e-14));
        assert!(close(&next.memory_state, &rho, 1e-14));
        assert_eq!(next.use_count, 1);
    }

    #[test]
    fn identity_step_passes_through() {
        let mut rng = rng_from_seed(2);
        let xi = random_density_from::<f64, _>(2, &mut rng);
        let rho = random_density_from::<f64, _>(2, &mut rng);
        let (out, next) = step(&MemoryProcess::new(ComplexMatrix::identity(4), xi.clone()).unwrap(), &rho).unwrap();
        assert!(close(&out, &rho, 1e-14));
        assert!(close(&next.memory_state, &xi, 1e-14));
    }

    #[test]
    fn step_matches_dense_conjugation() {
        let mut rng = rng_from_seed(3);
        let u = haar_unitary::<f64>(4, 8);
        let xi = random_density_from::<f64, _>(2, &mut rng);
        let rho = random_density_from::<f64, _>(2, &mut rng);
        let joint = &(&u * &tensor_product(&rho, &xi)) * &u.adjoint();
        let (out, next) = MemoryProcess::new(u, xi).unwrap().step(&rho).unwrap();
        assert!(close(&out, &partial_trace(&joint, &[2, 2], &[0]).unwrap(), 1e-14));
        assert!(close(&next.memory_state, &partial_trace(&joint, &[2, 2], &[1]).unwrap(), 1e-14));
        assert!(ensure_density(&out, 2).is_ok() && ensure_density(&next.memory_state, 2).is_ok());
    }

    #[test]
    fn step_rejects_invalid_input() {
        let p = MemoryProcess::new(swap::<f64>(), ComplexMatrix::identity(2).scale_real(0.5)).unwrap();
        assert!(matches!(p.step(&ComplexMatrix::identity(2)), Err(Error::InvalidState(_))));
    }

    #[test]
    fn trajectory_follows_affine_composition() {
        let mut rng = rng_from_seed(4);
        let u = haar_unitary::<f64>(4, 9);
        let xi0 = random_density_from::<f64, _>(2, &mut rng);
        let inputs: Vec<_> = (0..6).map(|_| random_density_from::<f64, _>(2, &mut rng)).collect();
        let traj = run_sequence(&u, &xi0, &inputs).unwrap();
        assert_eq!(traj.memory_blochs.len(), 7);
        assert_eq!(traj.outputs.len(), 6);
        let mut m = bloch_components(&xi0);
        for (j, rho) in inputs.iter().enumerate() {
            let f = crate::bloch::concurrent_channel(&u, rho).unwrap();
            m = f.apply(&m);
            assert!(m.distance(&traj.memory_blochs[j + 1]) < 1e-12);
            let predicted = traj.per_use_channels[j].apply(&bloch_components(rho));
            assert!(predicted.distance(&bloch_components(&traj.outputs[j])) < 1e-12);
        }
    }

    #[test]
    fn swap_trajectory_delays_inputs() {
        let xi0 = density_from_bloch(&BlochVector::new(0.1, 0.2, 0.3)).unwrap();
        let r1 = density_from_bloch(&BlochVector::new(0.0, 0.5, 0.0)).unwrap();
        let r2 = density_from_bloch(&BlochVector::new(-0.4, 0.0, 0.0)).unwrap();
        let traj = run_sequence(&swap(), &xi0, &[r1.clone(), r2]).unwrap();
        assert!(close(&traj.outputs[0], &xi0, 1e-14));
        assert!(close(&traj.outputs[1], &r1, 1e-14));
        let empty = run_sequence(&swap(), &xi0, &[]).unwrap();
        assert_eq!(empty.memory_blochs.len(), 1);
        assert!(empty.outputs.is_empty() && empty.per_use_channels.is_empty());
    }

    #[test]
    fn alpha_z_memory_forgets_after_two_inputs() {
        let mut rng = rng_from_seed(5);
        let u = u_alpha_z::<f64>(0.3);
        let inputs: Vec<_> = (0..5).map(|_| random_density_from::<f64, _>(2, &mut rng)).collect();
        let a = run_sequence(&u, &random_density_from(2, &mut rng), &inputs).unwrap();
        let b = run_sequence(&u, &random_density_from(2, &mut rng), &inputs).unwrap();
        assert!(a.memory_blochs[1].distance(&b.memory_blochs[1]) > 1e-3);
        for j in 2..a.memory_blochs.len() {
            assert!(a.memory_blochs[j].distance(&b.memory_blochs[j]) < 1e-12, "m_{}", j + 1);
        }
    }

    #[test]
    fn joint_output_consistency() {
        let mut rng = rng_from_seed(6);
        let u = haar_unitary::<f64>(4, 10);
        let xi0 = random_density_from::<f64, _>(2, &mut rng);
        let inputs: Vec<_> = (0..3).map(|_| random_density_from::<f64, _>(2, &mut rng)).collect();
        let joint = joint_output(&u, &xi0, &tensor_product_all(&inputs), 3).unwrap();
        let traj = run_sequence(&u, &xi0, &inputs).unwrap();
        for j in 0..3 {
            assert!(close(&partial_trace(&joint, &[2, 2, 2], &[j]).unwrap(), &traj.outputs[j], 1e-12));
        }
        let single = joint_output(&u, &xi0, &inputs[0], 1).unwrap();
        assert!(close(&single, &traj.outputs[0], 1e-13));

        let r = density_from_bloch(&BlochVector::new(0.3, 0.0, 0.1)).unwrap();
        let swapped = joint_output(&swap(), &xi0, &tensor_product(&inputs[0], &r), 2).unwrap();
        assert!(close(&swapped, &tensor_product(&xi0, &inputs[0]), 1e-13));
    }

    #[test]
    fn joint_output_limits() {
        let xi = ComplexMatrix::<f64>::identity(2).scale_real(0.5);
        let big = ComplexMatrix::<f64>::identity(128).scale_real(1.0 / 128.0);
        assert!(matches!(joint_output(&swap(), &xi, &big, 7), Err(Error::SizeLimit(_))));
        assert!(matches!(joint_output(&swap(), &xi, &xi, 2), Err(Error::Dimension(_))));
    }

    #[test]
    fn kraus_blocks_of_named_gates() {
        let id = kraus_blocks(&ComplexMatrix::<f64>::identity(4)).unwrap();
        assert_eq!(id[0][0], ComplexMatrix::identity(2));
        assert_eq!(id[1][1], ComplexMatrix::identity(2));
        assert_eq!(id[0][1], ComplexMatrix::zeros(2, 2));
        let sw = kraus_blocks(&swap::<f64>()).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                // |b⟩⟨a|
                let expected = ComplexMatrix::from_fn(2, 2, |i, j| Complex::new(if i == b && j == a { 1.0 } else { 0.0 }, 0.0));
                assert_eq!(sw[a][b], expected);
            }
        }
        let u = haar_unitary::<f64>(4, 11);
        assert!(kraus_normalization_residual(&kraus_blocks(&u).unwrap()) < 1e-12);
        // Reassembling the blocks gives back U.
        let blocks = kraus_blocks(&u).unwrap();
        let mut sum = ComplexMatrix::zeros(4, 4);
        for a in 0..2 {
            for b in 0..2 {
                let ket_bra = ComplexMatrix::from_fn(2, 2, |i, j| Complex::new(if i == a && j == b { 1.0 } else { 0.0 }, 0.0));
                sum = &sum + &tensor_product(&blocks[a][b], &ket_bra);
            }
        }
        assert!(close(&sum, &u, 1e-14));
    }

    #[test]
    fn omega_operators_reconstruct_reset_channel() {
        let mut rng = rng_from_seed(7);
        let u = haar_unitary::<f64>(4, 12);
        for n in 0..=3 {
            let reset: Vec<_> = (0..n).map(|_| random_density_from::<f64, _>(2, &mut rng)).collect();
            let omega = random_density_from::<f64, _>(2, &mut rng);
            let xi = random_density_from::<f64, _>(2, &mut rng);
            let om = omega_operators(&u, &reset, &omega).unwrap();
            for a in 0..2 {
                assert!((om[a][a].trace().re - 1.0).abs() < 1e-12);
            }
            let mut sum = ComplexMatrix::zeros(2, 2);
            for a in 0..2 {
                for c in 0..2 {
                    sum = &sum + &om[a][c].scale(xi[(a, c)]);
                }
            }
            let ch = reset_channel(&u, &reset, &xi).unwrap();
            let expected = operator_from_bloch(1.0, &ch.apply(&bloch_components(&omega)));
            assert!(close(&sum, &expected, 1e-12), "n = {n}");
        }
    }

    #[test]
    fn omega_off_diagonal_vanishes_for_finite_depth() {
        let mut rng = rng_from_seed(8);
        let reset: Vec<_> = (0..2).map(|_| random_density_from::<f64, _>(2, &mut rng)).collect();
        let omega = random_density_from::<f64, _>(2, &mut rng);
        let om = omega_operators(&u_alpha_z::<f64>(0.4), &reset, &omega).unwrap();
        assert!(om[0][1].frobenius_norm() < 1e-12 && om[1][0].frobenius_norm() < 1e-12);
        let om = omega_operators(&cnot::<f64>(), &reset, &omega).unwrap();
        assert!(om[0][1].frobenius_norm().max(om[1][0].frobenius_norm()) > 1e-6);
        let too_long: Vec<_> = (0..5).map(|_| omega.clone()).collect();
        assert!(matches!(omega_operators(&cnot::<f64>(), &too_long, &omega), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn reset_channels() {
        let mut rng = rng_from_seed(9);
        let r1 = density_from_bloch(&BlochVector(random_bloch_from(&mut rng))).unwrap();
        let r2 = density_from_bloch(&BlochVector(random_bloch_from(&mut rng))).unwrap();
        let xa = random_density_from::<f64, _>(2, &mut rng);
        let xb = random_density_from::<f64, _>(2, &mut rng);

        let sw = reset_channel(&swap(), std::slice::from_ref(&r1), &xa).unwrap();
        assert!(mat3::max_abs(&sw.matrix) < 1e-14);
        assert!(BlochVector(sw.vector).distance(&bloch_components(&r1)) < 1e-14);

        let u = u_alpha_z::<f64>(0.25);
        let a = reset_channel(&u, &[r1.clone(), r2.clone()], &xa).unwrap();
        let b = reset_channel(&u, &[r1.clone(), r2.clone()], &xb).unwrap();
        assert!(a.max_deviation(&b) < 1e-12);

        let a = reset_channel(&cnot::<f64>(), &[r1.clone(), r2.clone()], &xa).unwrap();
        let b = reset_channel(&cnot::<f64>(), &[r1.clone(), r2.clone()], &xb).unwrap();
        assert!(channel_distance(&a, &b).unwrap() > 1e-6);
    }

    #[test]
    fn reset_channel_agrees_with_register_simulation() {
        let mut rng = rng_from_seed(10);
        let u = haar_unitary::<f64>(4, 13);
        let reset: Vec<_> = (0..2).map(|_| random_density_from::<f64, _>(2, &mut rng)).collect();
        let xi = random_density_from::<f64, _>(2, &mut rng);
        let a = reset_channel(&u, &reset, &xi).unwrap();
        let b = reset_channel_by_simulation(&u, &reset, &xi).unwrap();
        assert!(a.max_deviation(&b) < 1e-12);
    }

    #[test]
    fn factorization_for_depth_two_and_swap() {
        let mut rng = rng_from_seed(11);
        let reset = |rng: &mut _| -> Vec<ComplexMatrix<f64>> { (0..2).map(|_| random_density_from(2, rng)).collect() };
        let (ra, rb) = (reset(&mut rng), reset(&mut rng));
        let xi = random_density_from(2, &mut rng);
        let rep = verify_reset_factorization(&u_alpha_z(0.3), &ra, &rb, &bell(), &xi, 1e-9).unwrap();
        assert!(rep.passed, "{rep:?}");

        let p = tensor_product(&random_density_from(2, &mut rng), &random_density_from(2, &mut rng));
        let rep = verify_reset_factorization(&swap(), &ra[..1], &rb[..1], &p, &xi, 1e-9).unwrap();
        assert!(rep.passed, "{rep:?}");

        let rep = verify_reset_factorization(&cnot(), &ra, &rb, &bell(), &xi, 1e-9).unwrap();
        assert!(!rep.passed);
        assert!(rep.factorization_residual > 1e-6, "{rep:?}");
    }

    #[test]
    fn factorization_slot_budget() {
        let r: Vec<ComplexMatrix<f64>> = vec![ComplexMatrix::identity(2).scale_real(0.5); 3];
        let xi = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(matches!(verify_reset_factorization(&swap(), &r, &r, &bell(), &xi, 1e-9), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn product_channel_output_matches_dense() {
        let mut rng = rng_from_seed(12);
        let u = haar_unitary::<f64>(4, 14);
        let (xa, xb) = (random_density_from::<f64, _>(2, &mut rng), random_density_from::<f64, _>(2, &mut rng));
        let e1 = system_channel(&u, &xa).unwrap();
        let e2 = system_channel(&u, &xb).unwrap();
        let a = random_density_from::<f64, _>(2, &mut rng);
        let b = random_density_from::<f64, _>(2, &mut rng);
        let out = product_channel_output(&e1, &e2, &tensor_product(&a, &b));
        let expected = tensor_product(
            &operator_from_bloch(1.0, &e1.apply(&bloch_components(&a))),
            &operator_from_bloch(1.0, &e2.apply(&bloch_components(&b))),
        );
        assert!(close(&out, &expected, 1e-13));
    }
}

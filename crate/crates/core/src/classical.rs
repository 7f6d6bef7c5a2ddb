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

//! Classical bit memories: the 24 permutations of a system bit and a memory
//! bit, classified exactly in rational arithmetic.
//!
//! Configurations are indexed `2·s + m` (system bit first). A memory state is
//! the probability `q` that the memory bit is 1.

use num_complex::Complex;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BitPermutation {
    /// `mapping[i]` is the image of configuration `i`.
    pub mapping: [usize; 4],
    /// `matrix[mapping[i]][i] = 1`.
    pub matrix: [[u8; 4]; 4],
}

impl BitPermutation {
    /// `None` unless `mapping` is a bijection of `{0, 1, 2, 3}`.
    pub fn new(mapping: [usize; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        for &m in &mapping {
            if m > 3 || std::mem::replace(&mut seen[m], true) {
                return None;
            }
        }
        let mut matrix = [[0u8; 4]; 4];
        for (i, &m) in mapping.iter().enumerate() {
            matrix[m][i] = 1;
        }
        Some(Self { mapping, matrix })
    }

    /// From a map on `(system, memory)` bit pairs.
    pub fn from_bits(f: impl Fn(u8, u8) -> (u8, u8)) -> Option<Self> {
        Self::new(std::array::from_fn(|i| {
            let (s, m) = f((i >> 1) as u8, (i & 1) as u8);
            2 * s as usize + m as usize
        }))
    }

    pub fn identity() -> Self {
        Self::new([0, 1, 2, 3]).expect("identity is a permutation")
    }

    pub fn swap() -> Self {
        Self::new([0, 2, 1, 3]).expect("swap is a permutation")
    }

    /// Memory bit controls a flip of the system bit.
    pub fn cnot_memory_control() -> Self {
        Self::from_bits(|s, m| (s ^ m, m)).expect("bijective")
    }

    /// `self` after `first`.
    pub fn after(&self, first: &Self) -> Self {
        Self::new(std::array::from_fn(|i| self.mapping[first.mapping[i]])).expect("composition of permutations")
    }

    /// The permutation matrix as a two-qubit unitary.
    pub fn to_unitary<T: Real>(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_fn(4, 4, |r, c| Complex::new(T::lit(f64::from(self.matrix[r][c])), T::zero()))
    }

    /// Output `(system bit, memory bit)` for input `(s, m)`.
    fn apply_bits(&self, s: u8, m: u8) -> (u8, u8) {
        let out = self.mapping[2 * s as usize + m as usize];
        ((out >> 1) as u8, (out & 1) as u8)
    }
}

/// All 24 permutations in lexicographic order of `mapping`.
pub fn enumerate_bit_permutations() -> Vec<BitPermutation> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    if let Some(p) = BitPermutation::new([a, b, c, d]) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassicalDepth {
    DepthIs(usize),
    ExceedsBound(usize),
}

impl Serialize for ClassicalDepth {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ClassicalDepth::DepthIs(n) => s.serialize_str(&n.to_string()),
            ClassicalDepth::ExceedsBound(n) => s.serialize_str(&format!("exceeds {n}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicalDepthEntry {
    pub permutation: BitPermutation,
    pub depth: ClassicalDepth,
}

/// `y = offset + slope · q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct AffineQ {
    offset: Rational64,
    slope: Rational64,
}

/// Probability that the system (`which = 0`) or memory (`which = 1`) output
/// bit is 1, as an affine function of `q`, for input probability `p`.
fn output_probability(perm: &BitPermutation, p: Rational64, which: usize) -> AffineQ {
    let at = |q: Rational64| {
        let mut total = Rational64::zero();
        for s in 0..2u8 {
            for m in 0..2u8 {
                let ps = if s == 1 { p } else { Rational64::one() - p };
                let pm = if m == 1 { q } else { Rational64::one() - q };
                let (so, mo) = perm.apply_bits(s, m);
                if [so, mo][which] == 1 {
                    total += ps * pm;
                }
            }
        }
        total
    };
    let offset = at(Rational64::zero());
    AffineQ { offset, slope: at(Rational64::one()) - offset }
}

/// Least `n ≤ n_max` such that after any `n` inputs the system output no
/// longer depends on the initial memory. Inputs range over the affine basis
/// `p ∈ {0, 1}`.
pub fn classify_classical(perm: &BitPermutation, n_max: usize) -> ClassicalDepthEntry {
    let basis = [Rational64::zero(), Rational64::one()];
    let relevant = basis.iter().any(|&p| !output_probability(perm, p, 0).slope.is_zero());
    let memory_slopes: Vec<Rational64> = basis.iter().map(|&p| output_probability(perm, p, 1).slope).collect();

    let depth = if !relevant {
        ClassicalDepth::DepthIs(0)
    } else {
        // Largest |slope| of the composed memory map over all length-n sequences.
        let mut products = vec![Rational64::one()];
        let mut found = None;
        for n in 1..=n_max {
            products = products.iter().flat_map(|&g| memory_slopes.iter().map(move |&b| b * g)).collect();
            if products.iter().all(Zero::is_zero) {
                found = Some(n);
                break;
            }
        }
        found.map_or(ClassicalDepth::ExceedsBound(n_max), ClassicalDepth::DepthIs)
    };
    ClassicalDepthEntry { permutation: *perm, depth }
}

pub fn survey(n_max: usize) -> Vec<ClassicalDepthEntry> {
    enumerate_bit_permutations().iter().map(|p| classify_classical(p, n_max)).collect()
}

/// Factorized bit flips `X^a ⊗ X^b`.
pub fn local_flips(system: bool, memory: bool) -> BitPermutation {
    BitPermutation::from_bits(|s, m| (s ^ u8::from(system), m ^ u8::from(memory))).expect("bijective")
}

/// A depth-one permutation written as `(a ⊗ b) · CX^k · SWAP · (c ⊗ d)`,
/// where `CX` lets the memory control a flip of the system and `a … d` are
/// bit flips.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SwapForm {
    pub after: (bool, bool),
    pub controlled_flip: bool,
    pub before: (bool, bool),
}

impl SwapForm {
    pub fn compose(&self) -> BitPermutation {
        let mut p = BitPermutation::swap().after(&local_flips(self.before.0, self.before.1));
        if self.controlled_flip {
            p = BitPermutation::cnot_memory_control().after(&p);
        }
        local_flips(self.after.0, self.after.1).after(&p)
    }
}

/// Exhaustive search over the 16 flip patterns with and without the
/// controlled flip; the first match in a fixed order.
pub fn swap_form(perm: &BitPermutation, allow_controlled_flip: bool) -> Option<SwapForm> {
    let flags = [false, true];
    let cx_options: &[bool] = if allow_controlled_flip { &flags } else { &flags[..1] };
    for &controlled_flip in cx_options {
        for bits in 0..16u8 {
            let form = SwapForm {
                after: (bits & 8 != 0, bits & 4 != 0),
                controlled_flip,
                before: (bits & 2 != 0, bits & 1 != 0),
            };
            if form.compose() == *perm {
                return Some(form);
            }
        }
    }
    None
}

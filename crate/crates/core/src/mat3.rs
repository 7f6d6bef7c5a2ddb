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

//! Fixed-size 3×3 real matrices for Bloch-space maps.

use crate::scalar::Real;

pub type Mat3<T> = [[T; 3]; 3];

pub fn identity<T: Real>() -> Mat3<T> {
    let mut m = zero();
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = T::one();
    }
    m
}

pub fn zero<T: Real>() -> Mat3<T> {
    [[T::zero(); 3]; 3]
}

pub fn mul<T: Real>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
    let mut out = zero();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).fold(T::zero(), |acc, k| acc + a[i][k] * b[k][j]);
        }
    }
    out
}

pub fn apply<T: Real>(a: &Mat3<T>, v: &[T; 3]) -> [T; 3] {
    std::array::from_fn(|i| (0..3).fold(T::zero(), |acc, k| acc + a[i][k] * v[k]))
}

pub fn transpose<T: Real>(a: &Mat3<T>) -> Mat3<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

pub fn sub<T: Real>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] - b[i][j]))
}

pub fn det<T: Real>(a: &Mat3<T>) -> T {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

pub fn frobenius<T: Real>(a: &Mat3<T>) -> T {
    a.iter().flatten().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
}

/// Largest absolute entry.
pub fn max_abs<T: Real>(a: &Mat3<T>) -> T {
    a.iter().flatten().fold(T::zero(), |acc, &x| acc.max(x.abs()))
}

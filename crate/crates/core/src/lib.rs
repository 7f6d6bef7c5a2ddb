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

//! Memory depth of qubit memory channels generated by a fixed two-qubit
//! interaction.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix `f64`. The classical module works in exact rationals.

#![allow(clippy::needless_range_loop)]

pub mod bloch;
pub mod classical;
pub mod depth;
pub mod error;
pub mod gates;
pub mod kak;
pub mod linalg;
pub mod mat3;
pub mod scalar;
pub mod simulator;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Matrix = linalg::ComplexMatrix<f64>;
pub type Matrix32 = linalg::ComplexMatrix<f32>;
pub type Bloch = bloch::BlochVector<f64>;
pub type Angles = bloch::InteractionAngles<f64>;
pub type Affine = bloch::AffineChannelRep<f64>;
pub type Kak = kak::KakDecomposition<f64>;
pub type Classification = depth::DepthClassification<f64>;
pub type NumericResult = depth::NumericDepthResult<f64>;
pub type Crosscheck = depth::CrosscheckReport<f64>;
pub type Trajectory = simulator::Trajectory<f64>;
pub type ResetReport = simulator::ResetVerificationReport<f64>;

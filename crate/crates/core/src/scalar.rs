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

//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating point type the linear algebra is generic over: `f32` or `f64`.
///
/// Besides the arithmetic bounds, each type carries the default tolerances
/// used for structural decisions. For `f64` these are the documented
/// `1e-10` (unitarity, hermiticity) and `1e-9` (rank, singularity,
/// vanishing cosines); `f32` gets proportionally looser values.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerance for unitarity and hermiticity checks.
    const UNITARITY_TOL: f64;
    /// Tolerance for rank, singularity and criticality decisions.
    const STRUCTURAL_TOL: f64;

    /// Converts an `f64` literal. Every value used in the crate fits both types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    #[inline]
    fn unitarity_tol() -> Self {
        Self::lit(Self::UNITARITY_TOL)
    }

    #[inline]
    fn structural_tol() -> Self {
        Self::lit(Self::STRUCTURAL_TOL)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const UNITARITY_TOL: f64 = 1e-10;
    const STRUCTURAL_TOL: f64 = 1e-9;
}

impl Real for f32 {
    const UNITARITY_TOL: f64 = 1e-4;
    const STRUCTURAL_TOL: f64 = 1e-3;
}

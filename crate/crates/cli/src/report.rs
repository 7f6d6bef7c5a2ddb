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

//! Report documents and their output.

use std::io::Write;

use anyhow::{Context, Result};
use memdepth_core::Matrix;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct UnitaryInfo {
    /// SHA-256 of the entries printed to 12 significant digits, row major.
    pub fingerprint: String,
    pub matrix: Matrix,
}

impl UnitaryInfo {
    pub fn new(u: &Matrix) -> Self {
        Self { fingerprint: fingerprint(u), matrix: u.clone() }
    }
}

/// Rounded first so that round-off noise below 1e-12 does not change it.
pub fn fingerprint(u: &Matrix) -> String {
    let mut h = Sha256::new();
    for z in u.as_slice() {
        for x in [z.re, z.im] {
            // Adding 0.0 folds -0 into +0.
            let x = if x.abs() < 1e-14 { 0.0 } else { x + 0.0 };
            h.update(format!("{x:.11e};").as_bytes());
        }
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Serialize)]
pub struct Tolerances {
    pub tol: f64,
    pub unitarity: f64,
    pub near_threshold: f64,
}

#[derive(Debug, Serialize)]
pub struct Report<R> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitary: Option<UnitaryInfo>,
    pub tolerances: Tolerances,
    pub result: R,
}

impl<R: Serialize> Report<R> {
    pub fn new(command: Value, unitary: Option<&Matrix>, tol: f64, result: R) -> Self {
        Self {
            tool: "memdepth",
            version: env!("CARGO_PKG_VERSION"),
            command,
            unitary: unitary.map(UnitaryInfo::new),
            tolerances: Tolerances {
                tol,
                unitarity: crate::input::UNITARITY_TOL,
                near_threshold: memdepth_core::depth::NEAR_THRESHOLD,
            },
            result,
        }
    }

    /// Writes the JSON to `target` (`-` for stdout). Returns whether the
    /// human-readable summary should still be printed.
    pub fn emit(&self, target: Option<&str>) -> Result<bool> {
        let Some(target) = target else { return Ok(true) };
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        if target == "-" {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(false)
        } else {
            std::fs::write(target, text).with_context(|| format!("writing {target}"))?;
            Ok(true)
        }
    }
}

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

//! Unitary inputs: JSON files and named presets.
//!
//! Presets, in the joint basis `|s m⟩` with index `2s + m`:
//!
//! | name          | matrix |
//! |---------------|--------|
//! | `identity`    | `I₄` |
//! | `swap`        | permutation `|s m⟩ → |m s⟩` |
//! | `cnot`        | system controls a flip of the memory: `|10⟩ ↔ |11⟩` |
//! | `u_alpha_z=x` | `e^{−ix} exp(i(π/4 XX + π/4 YY + x ZZ))` |
//!
//! `x` accepts a decimal or `pi`, `pi/N`, `K*pi/N` with an optional sign.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use memdepth_core::gates;
use memdepth_core::kak::{kak_compose, KakDecomposition};
use memdepth_core::Matrix;
use num_complex::Complex;
use serde::Deserialize;

/// Residual bound on `‖U†U − I‖_F` for accepted inputs.
pub const UNITARITY_TOL: f64 = 1e-9;

type Pair = [f64; 2];
type Local = [[Pair; 2]; 2];

#[derive(Debug, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum UnitarySpec {
    Matrix(Vec<Vec<Pair>>),
    Wrapped { matrix: Vec<Vec<Pair>> },
    Canonical {
        alpha: [f64; 3],
        #[serde(default)]
        locals: Option<Box<[Local; 4]>>,
        #[serde(default)]
        phase: f64,
    },
    Preset { preset: String },
    AlphaZ { u_alpha_z: f64 },
}

fn to_matrix(rows: &[Vec<Pair>]) -> Result<Matrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        bail!("matrix must be square, got {n} rows of lengths {:?}", rows.iter().map(Vec::len).collect::<Vec<_>>());
    }
    Ok(Matrix::from_fn(n, n, |i, j| Complex::new(rows[i][j][0], rows[i][j][1])))
}

fn local(m: &Local) -> Matrix {
    Matrix::from_fn(2, 2, |i, j| Complex::new(m[i][j][0], m[i][j][1]))
}

impl UnitarySpec {
    fn resolve(&self) -> Result<Matrix> {
        match self {
            UnitarySpec::Matrix(rows) | UnitarySpec::Wrapped { matrix: rows } => to_matrix(rows),
            UnitarySpec::Canonical { alpha, locals, phase } => {
                let mut d = KakDecomposition::from_angles(*alpha);
                if let Some([v1, w1, v2, w2]) = locals.as_deref() {
                    d.v1 = local(v1);
                    d.w1 = local(w1);
                    d.v2 = local(v2);
                    d.w2 = local(w2);
                }
                d.global_phase = *phase;
                Ok(kak_compose(&d))
            }
            UnitarySpec::Preset { preset } => preset_matrix(preset),
            UnitarySpec::AlphaZ { u_alpha_z } => Ok(gates::u_alpha_z(*u_alpha_z)),
        }
    }
}

/// Decimal, or a multiple of π such as `pi/8`, `-pi`, `3*pi/4`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let s = s.trim();
    if let Ok(x) = s.parse::<f64>() {
        return Ok(x);
    }
    let (sign, rest) = match s.strip_prefix('-') {
        Some(r) => (-1.0, r),
        None => (1.0, s.strip_prefix('+').unwrap_or(s)),
    };
    let (num, den) = rest.split_once('/').map_or((rest, None), |(a, b)| (a, Some(b)));
    let k = match num.strip_suffix("pi").map(|k| k.trim_end_matches('*')) {
        Some("") => 1.0,
        Some(k) => k.parse::<f64>().with_context(|| format!("bad angle `{s}`"))?,
        None => bail!("bad angle `{s}`"),
    };
    let d = den.map_or(Ok(1.0), |d| d.parse::<f64>()).with_context(|| format!("bad angle `{s}`"))?;
    Ok(sign * k * std::f64::consts::PI / d)
}

fn preset_matrix(name: &str) -> Result<Matrix> {
    let name = name.trim();
    match name {
        "identity" => Ok(gates::identity()),
        "swap" => Ok(gates::swap()),
        "cnot" => Ok(gates::cnot()),
        _ => match name.split_once('=') {
            Some(("u_alpha_z", x)) => Ok(gates::u_alpha_z(parse_angle(x)?)),
            _ => Err(anyhow!("unknown preset `{name}` (expected identity, swap, cnot or u_alpha_z=<angle>)")),
        },
    }
}

/// Reads `arg` as a JSON file if one exists at that path, else as a preset.
/// The result is checked for unitarity.
pub fn load_unitary(arg: &str) -> Result<Matrix> {
    let u = if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
        let spec: UnitarySpec = serde_json::from_str(&text).with_context(|| format!("{arg}: not a recognized unitary description"))?;
        spec.resolve()?
    } else {
        preset_matrix(arg).with_context(|| format!("`{arg}` is neither a file nor a preset"))?
    };
    if u.rows() != 4 || !u.is_finite() {
        bail!("expected a finite 4x4 matrix, got {}x{}", u.rows(), u.cols());
    }
    u.ensure_unitary(4, UNITARITY_TOL)?;
    Ok(u)
}

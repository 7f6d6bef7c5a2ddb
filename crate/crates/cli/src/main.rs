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

//! `memdepth` command-line tool.

mod input;
mod report;

use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use memdepth_core::bloch::{bloch_from_density, density_from_bloch, BlochVector};
use memdepth_core::classical::{survey, ClassicalDepth};
use memdepth_core::depth::{classify_analytic_tol, classify_numeric_tol, crosscheck};
use memdepth_core::kak::kak_decompose;
use memdepth_core::linalg::{random_bloch_from, random_density_from, rng_from_seed, tensor_product};
use memdepth_core::simulator::{run_sequence, verify_reset_factorization};
use memdepth_core::{Bloch, Error, Matrix};
use serde::Serialize;
use serde_json::json;

use report::Report;

const EXIT_INVALID: u8 = 2;
const EXIT_DISAGREE: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "memdepth", version, about = "Memory depth of qubit channels generated by a two-qubit interaction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON file describing the unitary, or a preset
    /// (identity, swap, cnot, u_alpha_z=<angle>).
    #[arg(long, global = true)]
    input: Option<String>,
    #[arg(long, global = true, default_value_t = 4)]
    n_max: usize,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Both)]
    mode: Mode,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report to this path; `-` for stdout.
    #[arg(long, global = true)]
    json: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Analytic,
    Numeric,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical interaction angles and local factors.
    Decompose,
    /// Memory depth, analytically and by exhaustive products.
    Classify,
    /// Sequential uses of the channel.
    Simulate {
        /// Initial memory Bloch vector `x,y,z`.
        #[arg(long, default_value = "0,0,0")]
        memory: String,
        /// Input Bloch vectors `x,y,z;x,y,z;...`.
        #[arg(long, conflicts_with = "count")]
        inputs: Option<String>,
        /// Number of random inputs drawn from `--seed`.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Checks that two reset blocks make the test outputs factorize.
    VerifyReset {
        #[arg(long, default_value_t = 2)]
        reset_length: usize,
        /// Explicit reset Bloch vectors, `2 * reset-length` of them; random otherwise.
        #[arg(long)]
        resets: Option<String>,
        /// `bell`, `random`, or two Bloch vectors `x,y,z;x,y,z` for a product state.
        #[arg(long, default_value = "bell")]
        omega: String,
        #[arg(long, default_value = "0,0,0")]
        memory: String,
    },
    /// Depth of every classical bit permutation.
    ClassicalSurvey,
}

/// Marks failures caused by the user's input.
#[derive(Debug)]
struct Invalid(anyhow::Error);

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for Invalid {}

fn invalid<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| Invalid(e).into())
}

fn parse_bloch(s: &str) -> Result<Bloch> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|x| input::parse_angle(x).with_context(|| format!("bad Bloch vector `{s}`")))
        .collect::<Result<_>>()?;
    let [x, y, z] = parts[..] else { bail!("Bloch vector `{s}` needs three components") };
    let r = BlochVector::new(x, y, z);
    density_from_bloch(&r)?;
    Ok(r)
}

fn parse_bloch_list(s: &str) -> Result<Vec<Bloch>> {
    s.split(';').map(str::trim).filter(|p| !p.is_empty()).map(parse_bloch).collect()
}

fn state(r: &Bloch) -> Matrix {
    density_from_bloch(r).expect("validated Bloch vector")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let is_input = e.is::<Invalid>()
                || e.downcast_ref::<Error>().is_some_and(|e| !matches!(e, Error::Numerical(_)));
            ExitCode::from(if is_input { EXIT_INVALID } else { 1 })
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return invalid(Err(anyhow::anyhow!("--tol must be positive")));
    }
    let unitary = || -> Result<Matrix> {
        let arg = cli.input.as_deref().context("--input is required for this command");
        invalid(arg.and_then(input::load_unitary))
    };
    match &cli.command {
        Command::Decompose => decompose(cli, &unitary()?),
        Command::Classify => classify(cli, &unitary()?),
        Command::Simulate { memory, inputs, count } => {
            let u = unitary()?;
            let memory = invalid(parse_bloch(memory))?;
            let inputs = match (inputs, count) {
                (Some(s), _) => invalid(parse_bloch_list(s))?,
                (None, Some(n)) => {
                    let mut rng = rng_from_seed(cli.seed);
                    (0..*n).map(|_| BlochVector(random_bloch_from(&mut rng))).collect()
                }
                (None, None) => Vec::new(),
            };
            simulate(cli, &u, memory, &inputs)
        }
        Command::VerifyReset { reset_length, resets, omega, memory } => {
            let u = unitary()?;
            let memory = invalid(parse_bloch(memory))?;
            let resets = match resets {
                Some(s) => {
                    let v = invalid(parse_bloch_list(s))?;
                    if v.len() != 2 * reset_length {
                        return invalid(Err(anyhow::anyhow!("--resets needs {} vectors, got {}", 2 * reset_length, v.len())));
                    }
                    v
                }
                None => {
                    let mut rng = rng_from_seed(cli.seed);
                    (0..2 * reset_length).map(|_| BlochVector(random_bloch_from(&mut rng))).collect()
                }
            };
            verify_reset(cli, &u, &resets, omega, memory)
        }
        Command::ClassicalSurvey => classical_survey(cli),
    }
}

fn decompose(cli: &Cli, u: &Matrix) -> Result<u8> {
    let d = kak_decompose(u)?;
    let residual = d.residual(u);
    let report = Report::new(json!({ "name": "decompose", "input": cli.input }), Some(u), cli.tol, json!({ "decomposition": d, "residual": residual }));
    if report.emit(cli.json.as_deref())? {
        let [x, y, z] = d.angles.alpha;
        println!("angles      {x:.12} {y:.12} {z:.12}");
        println!("phase       {:.12}", d.global_phase);
        println!("residual    {residual:.3e}");
    }
    Ok(0)
}

fn classify(cli: &Cli, u: &Matrix) -> Result<u8> {
    let command = json!({ "name": "classify", "input": cli.input, "n_max": cli.n_max, "mode": cli.mode });
    let (result, agree) = match cli.mode {
        Mode::Analytic => (json!({ "analytic": classify_analytic_tol(u, cli.tol)? }), true),
        Mode::Numeric => (json!({ "numeric": classify_numeric_tol(u, cli.n_max, cli.tol)? }), true),
        Mode::Both => {
            let r = crosscheck(u, cli.n_max, cli.tol)?;
            (serde_json::to_value(&r)?, r.agree)
        }
    };
    let report = Report::new(command, Some(u), cli.tol, &result);
    if report.emit(cli.json.as_deref())? {
        if let Some(a) = result.get("analytic") {
            println!("analytic    {}", a["verdict"]);
            if a["certificate"]["near_threshold"] == true {
                println!("            (a decision fell within the near-threshold band)");
            }
        }
        if let Some(n) = result.get("numeric") {
            println!("numeric     {}", n["status"]);
        }
        if cli.mode == Mode::Both {
            println!("agree       {agree}");
        }
    }
    Ok(if agree { 0 } else { EXIT_DISAGREE })
}

#[derive(Serialize)]
struct Resimulation {
    alternate_memory: Bloch,
    /// `|m_k − m'_k|` for `k = 1 … n+1`.
    memory_differences: Vec<f64>,
    output_differences: Vec<f64>,
    /// Smallest `k` with `m_j = m'_j` for every `j ≥ k`, within `tol`;
    /// `None` when the final memories still differ.
    memory_agrees_from: Option<usize>,
}

fn simulate(cli: &Cli, u: &Matrix, memory: Bloch, inputs: &[Bloch]) -> Result<u8> {
    let rhos: Vec<Matrix> = inputs.iter().map(state).collect();
    let traj = run_sequence(u, &state(&memory), &rhos)?;
    let alternate = if memory.norm() > 1e-3 { BlochVector(memory.0.map(|x| -x)) } else { BlochVector::axis(2) };
    let other = run_sequence(u, &state(&alternate), &rhos)?;

    let memory_differences: Vec<f64> = traj.memory_blochs.iter().zip(&other.memory_blochs).map(|(a, b)| a.distance(b)).collect();
    let output_differences: Vec<f64> = traj.outputs.iter().zip(&other.outputs).map(|(a, b)| (a - b).trace_norm_hermitian()).collect::<memdepth_core::Result<_>>()?;
    let memory_agrees_from = match memory_differences.iter().rposition(|&d| d >= cli.tol) {
        None => Some(1),
        Some(k) if k + 1 == memory_differences.len() => None,
        Some(k) => Some(k + 2),
    };
    let outputs: Vec<Bloch> = traj.outputs.iter().map(bloch_from_density).collect::<memdepth_core::Result<_>>()?;

    let command = json!({ "name": "simulate", "input": cli.input, "memory": memory, "inputs": inputs, "seed": cli.seed });
    let result = json!({
        "memory_blochs": traj.memory_blochs,
        "per_use_channels": traj.per_use_channels,
        "outputs": outputs,
        "resimulation": Resimulation { alternate_memory: alternate, memory_differences, output_differences, memory_agrees_from },
    });
    let report = Report::new(command, Some(u), cli.tol, &result);
    if report.emit(cli.json.as_deref())? {
        for (k, out) in outputs.iter().enumerate() {
            let [x, y, z] = out.0;
            println!("output {:<4} {x:+.9} {y:+.9} {z:+.9}", k + 1);
        }
        match memory_agrees_from {
            Some(k) => println!("memory independent of its initial state from m_{k} on"),
            None => println!("memory still depends on its initial state"),
        }
    }
    Ok(0)
}

fn verify_reset(cli: &Cli, u: &Matrix, resets: &[Bloch], omega: &str, memory: Bloch) -> Result<u8> {
    let omega12 = match omega.trim() {
        "bell" => {
            let h = 0.5f64.sqrt();
            let psi = Matrix::from_real(&[&[h], &[0.0], &[0.0], &[h]]);
            &psi * &psi.adjoint()
        }
        "random" => random_density_from(4, &mut rng_from_seed(cli.seed ^ 0x6f6d_6567)),
        s => match invalid(parse_bloch_list(s))?.as_slice() {
            [a, b] => tensor_product(&state(a), &state(b)),
            _ => return invalid(Err(anyhow::anyhow!("--omega must be bell, random, or two Bloch vectors"))),
        },
    };
    let states: Vec<Matrix> = resets.iter().map(state).collect();
    let (r1, r2) = states.split_at(states.len() / 2);
    let rep = verify_reset_factorization(u, r1, r2, &omega12, &state(&memory), cli.tol)?;

    let command = json!({
        "name": "verify-reset", "input": cli.input, "reset_length": r1.len(),
        "resets": resets, "omega": omega, "memory": memory, "seed": cli.seed,
    });
    let report = Report::new(command, Some(u), cli.tol, &rep);
    if report.emit(cli.json.as_deref())? {
        println!("factorization residual      {:.3e}", rep.factorization_residual);
        println!("memory independence         {:.3e}", rep.memory_independence_residual);
        println!("omega off-diagonal          {:.3e}", rep.omega_offdiag_residual);
        println!("{}", if rep.passed { "passed" } else { "FAILED" });
    }
    Ok(if rep.passed { 0 } else { EXIT_VERIFY })
}

fn classical_survey(cli: &Cli) -> Result<u8> {
    let entries = survey(cli.n_max);
    let mut histogram = std::collections::BTreeMap::<String, usize>::new();
    for e in &entries {
        *histogram.entry(serde_json::to_value(e.depth)?.as_str().unwrap_or_default().to_string()).or_default() += 1;
    }
    let command = json!({ "name": "classical-survey", "n_max": cli.n_max });
    let report = Report::new(command, None, cli.tol, json!({ "permutations": entries, "histogram": histogram }));
    if report.emit(cli.json.as_deref())? {
        for e in &entries {
            let depth = match e.depth {
                ClassicalDepth::DepthIs(d) => d.to_string(),
                ClassicalDepth::ExceedsBound(n) => format!("> {n}"),
            };
            println!("{:?}  {depth}", e.permutation.mapping);
        }
        for (d, n) in &histogram {
            println!("depth {d}: {n}");
        }
    }
    Ok(0)
}

//! The `hwk` command-line front end.
//!
//! Exit codes: 0 on success, 1 for input or I/O errors, 2 when a
//! synthesized circuit fails verification.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::circuit::{decompose_circuit, emit_qasm, peephole_cancel_x, Circuit, Gate, QubitLayout};
use crate::error::{Error, Result};
use crate::sim::{compare_to_spec, StateVector, MAX_QUBITS};
use crate::state::{binomial, dicke, random_hwk_sparse, HwkStateSpec, ValidateOptions};
use crate::synth::{synthesize_with, SynthOptions};
use crate::tree::HammingTree;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_251_016;

/// `verify` passes iff fidelity ≥ 1 − this.
pub const VERIFY_FIDELITY_TOL: f64 = 1e-9;
/// `verify` passes iff the ancilla residual is at most this.
pub const VERIFY_ANCILLA_TOL: f64 = 1e-12;

/// Largest `n` accepted by `stats`.
pub const STATS_MAX_N: u32 = 16;

#[derive(Debug, Parser)]
#[command(name = "hwk", version, about = "Fixed-Hamming-weight state preparation circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a preparation circuit for a spec
    Synth(SynthArgs),
    /// Synthesize, simulate and compare against the spec
    Verify(VerifyArgs),
    /// Gate-count table over a range of (n, k), as TSV
    Stats(StatsArgs),
    /// Export the Hamming tree for (n, k) as Graphviz dot
    Tree(TreeArgs),
    /// Write a seeded random spec as JSON
    Random(RandomArgs),
}

#[derive(Debug, Args)]
pub struct SpecSource {
    /// Spec JSON file: {"n", "k", "amplitudes": {"<bits>": [re, im]}}
    #[arg(required_unless_present_any = ["dicke", "random"])]
    pub input: Option<PathBuf>,
    /// Use the Dicke state D(N, K) instead of a file
    #[arg(long, num_args = 2, value_names = ["N", "K"], conflicts_with_all = ["input", "random"])]
    pub dicke: Option<Vec<u32>>,
    /// Use a seeded random state on (N, K) instead of a file
    #[arg(long, num_args = 2, value_names = ["N", "K"], conflicts_with = "input")]
    pub random: Option<Vec<u32>>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Fraction of amplitudes zeroed in a --random spec
    #[arg(long, default_value_t = 0.0)]
    pub sparsity: f64,
    /// Rescale a file spec to unit norm instead of rejecting it
    #[arg(long)]
    pub renormalize: bool,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct PassFlags {
    /// Cancel adjacent X pairs
    #[arg(long)]
    pub peephole: bool,
    /// Skip zero-weight subtrees
    #[arg(long)]
    pub prune_zero: bool,
    /// Rewrite U3/CU3 into Rz·Ry·Rz
    #[arg(long)]
    pub decompose_u3: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CircuitFormat {
    Qasm,
    Json,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub source: SpecSource,
    #[command(flatten)]
    pub passes: PassFlags,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = CircuitFormat::Qasm)]
    pub format: CircuitFormat,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: SpecSource,
    #[command(flatten)]
    pub passes: PassFlags,
    /// Write the simulated amplitudes as [index, re, im] triples
    #[arg(long)]
    pub dump_state: Option<PathBuf>,
    /// Perturb the first rotation angle (negative control for tests)
    #[arg(long, hide = true)]
    pub corrupt_angle: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long, default_value_t = 1)]
    pub n_min: u32,
    #[arg(long, default_value_t = 12)]
    pub n_max: u32,
    #[arg(long, default_value_t = 0)]
    pub k_min: u32,
    /// Defaults to n for each row
    #[arg(long)]
    pub k_max: Option<u32>,
}

#[derive(Debug, Args)]
pub struct TreeArgs {
    pub n: u32,
    pub k: u32,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    pub n: u32,
    pub k: u32,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.0)]
    pub sparsity: f64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Runs a parsed command, writing results to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Synth(args) => cmd_synth(&args, out, err),
        Command::Verify(args) => cmd_verify(&args, out, err),
        Command::Stats(args) => cmd_stats(&args, out),
        Command::Tree(args) => cmd_tree(&args, out),
        Command::Random(args) => cmd_random(&args, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

/// Parses `args` (including the program name) and runs them.
pub fn run_from_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            code
        }
    }
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn check_simulable(n: u32) -> Result<()> {
    let qubits = QubitLayout::for_register(n as usize).total();
    if qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits { qubits, max: MAX_QUBITS });
    }
    Ok(())
}

fn pair(values: &[u32]) -> (u32, u32) {
    (values[0], values[1])
}

impl SpecSource {
    /// `(n, k)` when it is known without reading a file.
    fn dimensions(&self) -> Option<(u32, u32)> {
        self.dicke.as_deref().or(self.random.as_deref()).map(pair)
    }

    fn load(&self) -> Result<HwkStateSpec> {
        if let Some(d) = &self.dicke {
            let (n, k) = pair(d);
            return dicke(n, k);
        }
        if let Some(r) = &self.random {
            let (n, k) = pair(r);
            return random_hwk_sparse(n, k, self.seed, self.sparsity);
        }
        let path = self.input.as_ref().expect("clap requires an input source");
        let text = std::fs::read_to_string(path)?;
        HwkStateSpec::from_json_with(&text, ValidateOptions { renormalize: self.renormalize })
    }
}

struct Built {
    circuit: Circuit,
    internal_nodes: u64,
}

fn build_circuit(spec: &HwkStateSpec, passes: PassFlags) -> Result<Built> {
    let synthesis = synthesize_with(spec, SynthOptions { prune_zero: passes.prune_zero })?;
    let mut circuit = synthesis.circuit;
    if passes.peephole {
        circuit = peephole_cancel_x(&circuit);
    }
    if passes.decompose_u3 {
        circuit = decompose_circuit(&circuit);
    }
    Ok(Built { circuit, internal_nodes: synthesis.tree_counts.internal })
}

fn summary(spec: &HwkStateSpec, built: &Built) -> String {
    let c = &built.circuit;
    let leaves = binomial(spec.n(), spec.k());
    let mut text = format!(
        "n={} k={} binom={} internal_nodes={} ancillas={} total_gates={} depth={} bound={}\n",
        spec.n(),
        spec.k(),
        leaves,
        built.internal_nodes,
        c.layout().ancillas,
        c.total_gates(),
        c.depth(),
        10 * leaves.saturating_sub(1) + u64::from(spec.k()),
    );
    let counts: Vec<String> = c.gate_counts().iter().map(|(k, v)| format!("{k}={v}")).collect();
    let _ = writeln!(text, "gate_counts: {}", counts.join(" "));
    text
}

pub fn cmd_synth(args: &SynthArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let spec = args.source.load()?;
    let built = build_circuit(&spec, args.passes)?;
    let text = match args.format {
        CircuitFormat::Qasm => emit_qasm(&built.circuit),
        CircuitFormat::Json => built.circuit.to_json()? + "\n",
    };
    write_output(args.output.as_deref(), &text, out)?;
    err.write_all(summary(&spec, &built).as_bytes())?;
    Ok(EXIT_OK)
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    if let Some((n, _)) = args.source.dimensions() {
        check_simulable(n)?;
    }
    let spec = args.source.load()?;
    check_simulable(spec.n())?;
    let mut built = build_circuit(&spec, args.passes)?;
    if args.corrupt_angle {
        corrupt_first_angle(&mut built.circuit);
    }
    let state = StateVector::run(&built.circuit)?;
    let report = compare_to_spec(&state, &spec)?;
    if let Some(path) = &args.dump_state {
        std::fs::write(path, state.to_json()?)?;
    }
    err.write_all(summary(&spec, &built).as_bytes())?;
    writeln!(out, "fidelity\t{:.17}", report.fidelity)?;
    writeln!(out, "max_amp_error\t{:e}", report.max_amp_error)?;
    writeln!(out, "ancilla_residual\t{:e}", report.ancilla_residual)?;
    let ok = report.fidelity >= 1.0 - VERIFY_FIDELITY_TOL
        && report.ancilla_residual <= VERIFY_ANCILLA_TOL;
    writeln!(out, "verdict\t{}", if ok { "PASS" } else { "FAIL" })?;
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}

fn corrupt_first_angle(circuit: &mut Circuit) {
    for gate in circuit.gates_mut() {
        match gate {
            Gate::U3 { theta, .. }
            | Gate::Cu3 { theta, .. }
            | Gate::Ry { theta, .. }
            | Gate::Cry { theta, .. } => {
                *theta += 0.5;
                return;
            }
            _ => {}
        }
    }
}

/// One `stats` row.
#[derive(Clone, Debug, PartialEq)]
pub struct StatsRow {
    pub n: u32,
    pub k: u32,
    pub binom: u64,
    pub internal: u64,
    pub total_gates: usize,
    pub gates_peephole: usize,
    pub depth: usize,
    pub ancillas: usize,
    pub ratio: f64,
}

pub const STATS_HEADER: &str =
    "n\tk\tbinom\tinternal\ttotal_gates\tgates_peephole\tdepth\tancillas\tratio\tbound\tref_binom_k\tref_binom_log2n";

pub fn stats_row(n: u32, k: u32) -> Result<StatsRow> {
    let spec = dicke(n, k)?;
    let built = build_circuit(&spec, PassFlags { peephole: false, prune_zero: false, decompose_u3: false })?;
    let binom = binomial(n, k);
    let total_gates = built.circuit.total_gates();
    Ok(StatsRow {
        n,
        k,
        binom,
        internal: built.internal_nodes,
        total_gates,
        gates_peephole: peephole_cancel_x(&built.circuit).total_gates(),
        depth: built.circuit.depth(),
        ancillas: built.circuit.layout().ancillas,
        ratio: total_gates as f64 / binom as f64,
    })
}

impl StatsRow {
    pub fn to_tsv(&self) -> String {
        let binom = self.binom as f64;
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.4}\t{}\t{}\t{:.1}",
            self.n,
            self.k,
            self.binom,
            self.internal,
            self.total_gates,
            self.gates_peephole,
            self.depth,
            self.ancillas,
            self.ratio,
            10 * self.binom.saturating_sub(1) + u64::from(self.k),
            self.binom * u64::from(self.k),
            binom * f64::from(self.n).log2(),
        )
    }
}

pub fn cmd_stats(args: &StatsArgs, out: &mut dyn Write) -> Result<i32> {
    if args.n_max > STATS_MAX_N {
        return Err(Error::InvalidN(args.n_max));
    }
    if args.n_min == 0 || args.n_min > args.n_max {
        return Err(Error::InvalidN(args.n_min));
    }
    writeln!(out, "{STATS_HEADER}")?;
    for n in args.n_min..=args.n_max {
        let k_max = args.k_max.unwrap_or(n).min(n);
        for k in args.k_min..=k_max {
            writeln!(out, "{}", stats_row(n, k)?.to_tsv())?;
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_tree(args: &TreeArgs, out: &mut dyn Write) -> Result<i32> {
    let tree = HammingTree::build(args.n, args.k)?;
    write_output(args.output.as_deref(), &tree.to_dot(), out)?;
    Ok(EXIT_OK)
}

pub fn cmd_random(args: &RandomArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = random_hwk_sparse(args.n, args.k, args.seed, args.sparsity)?;
    write_output(args.output.as_deref(), &(spec.to_json()? + "\n"), out)?;
    Ok(EXIT_OK)
}

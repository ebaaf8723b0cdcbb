//! Command-line driver: circuit generation, discrimination runs, tomography,
//! fidelity evaluation, and self-verification, all emitting reproducible
//! JSON artifacts.

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use zsim_core::counts::bitstring_to_index;
use zsim_core::density::{DensityMatrix, DensityMatrixJson};
use zsim_core::discriminator::{build_discrimination_circuit, decode_ancilla, expected_syndrome};
use zsim_core::noise::{noisy_counts, noisy_density, NoiseModel};
use zsim_core::qasm::emit_qasm;
use zsim_core::tomography::{
    fidelity_pure, tomography_end_to_end, FidelityConvention, TomographyPlan,
};
use zsim_core::zstates::{verify_basis, zstate_circuit, zstate_vector};
use zsim_core::{CountsTable, QuantumCircuit, Statevector};

/// Environment variable supplying the default RNG seed.
const SEED_ENV: &str = "ZSIM_SEED";

#[derive(Parser)]
#[command(
    name = "zsim",
    about = "Cluster-state Z-basis toolkit: preparation, non-destructive discrimination, tomography",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write OpenQASM 2.0 for a preparation (and optionally discrimination) circuit
    Gen(GenArgs),
    /// Run the discrimination circuit end to end and record counts + decode
    Discriminate(DiscriminateArgs),
    /// Full Pauli tomography of the state or ancilla register
    Tomo(TomoArgs),
    /// Fidelity of a stored density matrix against a Z-state target
    Fidelity(FidelityArgs),
    /// Run the orthonormality, determinism, and non-destructiveness suites
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Number of data qubits (N >= 2)
    #[arg(long)]
    n: usize,
    /// Z-state index in [0, 2^N)
    #[arg(long)]
    k: usize,
    /// Append the N-ancilla discrimination circuit
    #[arg(long)]
    discriminate: bool,
    /// Output file for the QASM text
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DiscriminateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Shots for the ancilla counts table
    #[arg(long, default_value_t = zsim_core::fixtures::REFERENCE_SHOTS)]
    shots: u64,
    /// RNG seed (falls back to ZSIM_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Noise model, e.g. "depol:0.01,0.03;readout:0.03"
    #[arg(long)]
    noise: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Copy, Clone, ValueEnum)]
enum TomoTarget {
    State,
    Ancilla,
}

#[derive(Args)]
struct TomoArgs {
    /// Which register to reconstruct
    #[arg(long, value_enum)]
    target: TomoTarget,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Shots per measurement setting
    #[arg(long, default_value_t = zsim_core::fixtures::REFERENCE_SHOTS)]
    shots: u64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    noise: Option<String>,
    #[arg(long)]
    out: PathBuf,
    /// Also write bar-plot CSV (matrix,row,col,real,imag)
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct FidelityArgs {
    /// Density-matrix JSON file
    #[arg(long)]
    rho: PathBuf,
    /// Target Z-state, "zstate:N:K"
    #[arg(long)]
    target: String,
    /// Reverse the target's qubit order before comparing
    #[arg(long)]
    reversed: bool,
    /// sqrt or squared
    #[arg(long, default_value = "sqrt")]
    convention: String,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: Option<u64>,
}

/// Everything that determines a run; embedded in each output artifact.
#[derive(Serialize)]
struct ExperimentConfig {
    n: usize,
    k: usize,
    shots: u64,
    seed: u64,
    noise: Option<NoiseModel>,
    tomography: bool,
    out: String,
}

#[derive(Serialize)]
struct DiscriminateOutput {
    config: ExperimentConfig,
    counts: CountsTable,
    decoded_index: usize,
    syndrome: String,
    post_state_fidelity: f64,
}

#[derive(Serialize)]
struct FidelityPair {
    sqrt: f64,
    squared: f64,
}

#[derive(Serialize)]
struct TomoOutput {
    config: ExperimentConfig,
    target_register: String,
    target_label: String,
    raw: DensityMatrixJson,
    projected: DensityMatrixJson,
    fidelity: FidelityPair,
}

#[derive(Serialize)]
struct FidelityOutput {
    rho: String,
    target: String,
    reversed: bool,
    convention: String,
    raw_input: bool,
    fidelity: f64,
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var(SEED_ENV)
            .ok()
            .and_then(|v| v.parse::<u64>().ok())
    })
    .unwrap_or(0)
}

fn parse_noise(spec: &Option<String>) -> anyhow::Result<Option<NoiseModel>> {
    match spec {
        None => Ok(None),
        Some(s) => Ok(Some(s.parse::<NoiseModel>()?)),
    }
}

fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

/// Preparation circuit embedded in the 2N-qubit discrimination register.
fn preparation_on_full_register(n: usize, k: usize) -> anyhow::Result<QuantumCircuit> {
    let mut full = QuantumCircuit::new(2 * n, n);
    full.extend(&zstate_circuit(n, k)?)?;
    Ok(full)
}

fn run_gen(args: GenArgs) -> anyhow::Result<()> {
    let text = if args.discriminate {
        let mut circuit = preparation_on_full_register(args.n, args.k)?;
        circuit.extend(build_discrimination_circuit(args.n)?.circuit())?;
        emit_qasm(&circuit)?
    } else {
        emit_qasm(&zstate_circuit(args.n, args.k)?)?
    };
    write_text(&args.out, &text)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn run_discriminate(args: DiscriminateArgs) -> anyhow::Result<()> {
    let seed = resolve_seed(args.seed);
    let noise = parse_noise(&args.noise)?;
    let n = args.n;
    let disc = build_discrimination_circuit(n)?;
    let readout = disc.readout_order();
    let target = zstate_vector(n, args.k)?;

    let mut circuit = preparation_on_full_register(n, args.k)?;
    circuit.extend(disc.circuit())?;

    let (counts, post_state_fidelity) = match &noise {
        Some(model) if !model.is_zero() => {
            let counts = noisy_counts(&circuit, model, &readout, args.shots, seed)?;
            let rho = noisy_density(&circuit, model)?;
            let data: Vec<usize> = (1..=n).collect();
            let reduced = rho.partial_trace(&data)?;
            let f = fidelity_pure(&target, &reduced, FidelityConvention::Squared)?;
            (counts, f)
        }
        _ => {
            let evolved = Statevector::zero(2 * n).run_circuit(&circuit.without_measurements())?;
            let counts = evolved.sample_counts(&readout, args.shots, seed)?;
            let run = zsim_core::discriminate(&target, seed)?;
            let f = run.post_state.overlap_sq(&target)?;
            (counts, f)
        }
    };

    let modal = counts
        .modal_key()
        .ok_or_else(|| anyhow!("empty counts table"))?
        .to_string();
    let decoded = decode_ancilla(&modal, n)?;

    let output = DiscriminateOutput {
        config: ExperimentConfig {
            n,
            k: args.k,
            shots: args.shots,
            seed,
            noise,
            tomography: false,
            out: args.out.display().to_string(),
        },
        counts,
        decoded_index: decoded.k(),
        syndrome: modal,
        post_state_fidelity,
    };
    write_json(&args.out, &output)?;
    println!(
        "decoded index {} (syndrome {}), post-state fidelity {:.10}",
        output.decoded_index, output.syndrome, output.post_state_fidelity
    );
    Ok(())
}

fn csv_for(raw: &DensityMatrix, projected: &DensityMatrix) -> String {
    let mut out = String::from("matrix,row,col,real,imag\n");
    for (label, rho) in [("raw", raw), ("projected", projected)] {
        for line in rho.to_csv().lines().skip(1) {
            out.push_str(label);
            out.push(',');
            out.push_str(line);
            out.push('\n');
        }
    }
    out
}

fn run_tomo(args: TomoArgs) -> anyhow::Result<()> {
    let seed = resolve_seed(args.seed);
    let noise = parse_noise(&args.noise)?;
    let n = args.n;
    let disc = build_discrimination_circuit(n)?;

    let mut circuit = preparation_on_full_register(n, args.k)?;
    circuit.extend(&disc.unitary_circuit())?;

    let (measured, target, register, label): (Vec<usize>, Statevector, &str, String) =
        match args.target {
            TomoTarget::State => (
                (1..=n).collect(),
                zstate_vector(n, args.k)?,
                "state",
                format!("zstate:{}:{}", n, args.k),
            ),
            TomoTarget::Ancilla => {
                let syndrome = expected_syndrome(n, args.k)?;
                let index = bitstring_to_index(&syndrome)?;
                (
                    disc.readout_order(),
                    Statevector::basis_state(n, index),
                    "ancilla",
                    format!("ancilla:{syndrome}"),
                )
            }
        };

    let plan = TomographyPlan::complete(n, args.shots)?;
    let report = tomography_end_to_end(
        &circuit,
        &measured,
        &plan,
        noise.as_ref(),
        &target,
        seed,
    )?;

    if let Some(csv_path) = &args.csv {
        write_text(csv_path, &csv_for(&report.raw, &report.projected))?;
    }

    let output = TomoOutput {
        config: ExperimentConfig {
            n,
            k: args.k,
            shots: args.shots,
            seed,
            noise,
            tomography: true,
            out: args.out.display().to_string(),
        },
        target_register: register.to_string(),
        target_label: label,
        raw: report.raw.to_json(),
        projected: report.projected.to_json(),
        fidelity: FidelityPair {
            sqrt: report.fidelity_sqrt,
            squared: report.fidelity_squared,
        },
    };
    write_json(&args.out, &output)?;
    println!(
        "fidelity vs {}: sqrt {:.4}, squared {:.4}",
        output.target_label, output.fidelity.sqrt, output.fidelity.squared
    );
    Ok(())
}

fn parse_zstate_target(spec: &str) -> anyhow::Result<(usize, usize)> {
    let mut parts = spec.split(':');
    match (parts.next(), parts.next(), parts.next(), parts.next()) {
        (Some("zstate"), Some(n), Some(k), None) => {
            let n: usize = n.parse().context("bad N in target")?;
            let k: usize = k.parse().context("bad K in target")?;
            Ok((n, k))
        }
        _ => bail!("target must have the form zstate:N:K, got {spec:?}"),
    }
}

fn run_fidelity(args: FidelityArgs) -> anyhow::Result<()> {
    let (n, k) = parse_zstate_target(&args.target)?;
    let convention: FidelityConvention = args.convention.parse()?;
    let text = std::fs::read_to_string(&args.rho)
        .with_context(|| format!("reading {}", args.rho.display()))?;
    let json: DensityMatrixJson = serde_json::from_str(&text)?;
    let rho = DensityMatrix::from_json(&json)?;

    let mut target = zstate_vector(n, k)?;
    if args.reversed {
        target = target.reverse_qubits();
    }

    let fidelity = fidelity_pure(&target, &rho, convention)?;
    let output = FidelityOutput {
        rho: args.rho.display().to_string(),
        target: args.target.clone(),
        reversed: args.reversed,
        convention: args.convention.clone(),
        raw_input: rho.is_raw(),
        fidelity,
    };
    println!("{}", serde_json::to_string_pretty(&output)?);
    Ok(())
}

fn run_verify(args: VerifyArgs) -> anyhow::Result<bool> {
    let n = args.n;
    let seed = resolve_seed(args.seed);
    let mut ok = true;

    let report = verify_basis(n)?;
    if report.passes(1e-12) {
        println!(
            "ok    orthonormality: max off-diagonal {:.3e}, max norm deviation {:.3e}",
            report.max_off_diagonal, report.max_norm_deviation
        );
    } else {
        ok = false;
        println!(
            "FAIL  orthonormality: max off-diagonal {:.3e}, max norm deviation {:.3e}",
            report.max_off_diagonal, report.max_norm_deviation
        );
    }

    let disc = build_discrimination_circuit(n)?;
    let readout = disc.readout_order();
    let mut syndromes = std::collections::BTreeSet::new();
    let mut min_fidelity = 1.0f64;
    let mut deterministic = true;
    let mut decoded_ok = true;
    let mut repeat_ok = true;

    println!("syndrome map:");
    for k in 0..(1usize << n) {
        let psi = zstate_vector(n, k)?;
        let evolved = psi
            .tensor_zero_ancillas(n)
            .run_circuit(&disc.unitary_circuit())?;
        let probs = evolved.marginal_probabilities(&readout)?;
        let (argmax, &pmax) = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .expect("nonempty");
        if pmax < 1.0 - 1e-10 {
            deterministic = false;
        }
        let syndrome = zsim_core::counts::index_to_bitstring(argmax, n);
        syndromes.insert(syndrome.clone());

        let run = zsim_core::discriminate(&psi, seed)?;
        if run.index.k() != k || run.syndrome != syndrome {
            decoded_ok = false;
        }
        min_fidelity = min_fidelity.min(run.post_state.overlap_sq(&psi)?);
        let again = zsim_core::discriminate(&run.post_state, seed.wrapping_add(1))?;
        if again.index.k() != k {
            repeat_ok = false;
        }
        min_fidelity = min_fidelity.min(again.post_state.overlap_sq(&psi)?);
        println!("      k={k:<3} -> {syndrome}");
    }

    let distinct = syndromes.len() == 1 << n;
    for (label, passed) in [
        (
            format!("determinism: every syndrome a point mass (n={n})"),
            deterministic,
        ),
        (
            format!("bijectivity: {} distinct syndromes", syndromes.len()),
            distinct,
        ),
        ("decode round trip over all k".to_string(), decoded_ok),
        (
            format!("non-destructiveness: min fidelity {min_fidelity:.12}"),
            min_fidelity >= 1.0 - 1e-10,
        ),
        ("repeatability of discrimination".to_string(), repeat_ok),
    ] {
        if passed {
            println!("ok    {label}");
        } else {
            ok = false;
            println!("FAIL  {label}");
        }
    }

    println!("overall: {}", if ok { "PASS" } else { "FAIL" });
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => run_gen(args).map(|_| true),
        Command::Discriminate(args) => run_discriminate(args).map(|_| true),
        Command::Tomo(args) => run_tomo(args).map(|_| true),
        Command::Fidelity(args) => run_fidelity(args).map(|_| true),
        Command::Verify(args) => run_verify(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

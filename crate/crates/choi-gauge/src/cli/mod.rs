//! Command-line front end: simulate, reconstruct, witness, test, sweep,
//! states and fixture subcommands over stable file formats.
//!
//! Exit codes: 0 on success, 1 when `test --strict` lands on an
//! inconsistent verdict, 2 on any input error.

pub mod formats;

use crate::bases::BasisLabel;
use crate::campaign::{
    analyze_fixture, builtin_fixture, sweep_detuning_with_pool, sweep_shots_with_pool,
    theoretical_witness, thread_pool_from_env, WitnessSource,
};
use crate::channels::{ChannelModel, ReadoutError, StrayLight};
use crate::linalg::hermitian_eig;
use crate::tomography::{
    frequencies, min_eigenpair, reconstruct_choi, reconstruct_states, sample_counts,
    DEFAULT_CONJUGATE_B,
};
use crate::witness::{consistency_test, witness_from_vector};
use clap::{Args, Parser, Subcommand, ValueEnum};
use formats::{
    choi_to_json, counts_to_csv, parse_choi_json, parse_counts_csv, parse_witness_json,
    sweep_to_csv, witness_to_json, ChoiFile, ChoiMetadata,
};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONSISTENT: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "choi-gauge",
    about = "Single-qubit process tomography simulator with a witness-based consistency test",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Ideal,
    Detuned,
    Correlated,
    Pulse,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConjugateArg {
    On,
    Off,
    Auto,
}

impl ConjugateArg {
    fn resolve(self) -> bool {
        match self {
            ConjugateArg::On => true,
            ConjugateArg::Off => false,
            ConjugateArg::Auto => DEFAULT_CONJUGATE_B,
        }
    }
}

#[derive(Args, Debug)]
struct ModelOpts {
    /// Process model to simulate.
    #[arg(long, value_enum, default_value = "ideal")]
    model: ModelArg,
    /// Detuning ratio δ/Ω for the detuned and pulse models.
    #[arg(long, default_value_t = 0.0)]
    detuning: f64,
    /// Decoupling pulse count for the pulse model (positive multiple of 10).
    #[arg(long, default_value_t = 100)]
    pulses: u32,
    /// Readout confusion as `EPS_BRIGHT,EPS_DARK`.
    #[arg(long, value_name = "EB,ED")]
    readout: Option<String>,
    /// Stray-light population transfer η (mean bright population 0.5).
    #[arg(long, value_name = "ETA")]
    stray: Option<f64>,
}

impl ModelOpts {
    fn build(&self) -> Result<ChannelModel, String> {
        let mut model = match self.model {
            ModelArg::Ideal => ChannelModel::ideal_rx(),
            ModelArg::Detuned => ChannelModel::detuned(self.detuning),
            ModelArg::Correlated => ChannelModel::correlated_env(),
            ModelArg::Pulse => ChannelModel::pulse_sequence(self.detuning, self.pulses),
        };
        if let Some(spec) = &self.readout {
            let parts: Vec<&str> = spec.split(',').collect();
            if parts.len() != 2 {
                return Err(format!("--readout wants `EB,ED`, got `{spec}`"));
            }
            let eb: f64 = parts[0].trim().parse().map_err(|_| format!("bad eps_bright `{}`", parts[0]))?;
            let ed: f64 = parts[1].trim().parse().map_err(|_| format!("bad eps_dark `{}`", parts[1]))?;
            model = model.with_readout(ReadoutError::new(eb, ed).map_err(|e| e.to_string())?);
        }
        if let Some(eta) = self.stray {
            model = model.with_stray(StrayLight::new(eta).map_err(|e| e.to_string())?);
        }
        Ok(model)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a full tomography and write a counts CSV.
    Simulate {
        #[command(flatten)]
        model: ModelOpts,
        /// Shots per (preparation, setting).
        #[arg(long, default_value_t = 394)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output counts CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruct a process matrix from a counts CSV and print its
    /// eigenvalues.
    Reconstruct {
        /// Input counts CSV path.
        #[arg(long = "in")]
        input: PathBuf,
        /// Optional output JSON path for the reconstructed matrix.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "auto")]
        conjugate_b: ConjugateArg,
    },
    /// Build a witness from a stored process matrix (or a theoretical
    /// model) and write it as JSON.
    Witness {
        /// Input process-matrix JSON; omit to use a theoretical model.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[command(flatten)]
        model: ModelOpts,
        /// Output witness JSON path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the consistency test: counts CSV against a stored witness.
    Test {
        /// Input counts CSV path.
        #[arg(long = "in")]
        input: PathBuf,
        /// Witness JSON path.
        #[arg(long)]
        witness: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
        /// Exit with code 1 when the verdict is inconsistent.
        #[arg(long)]
        strict: bool,
    },
    /// Monte Carlo sweep over shot counts (or detunings) and write CSV.
    Sweep {
        #[command(flatten)]
        model: ModelOpts,
        /// Comma-separated shot counts.
        #[arg(long, default_value = "50,100,250,500,1000")]
        shots: String,
        /// Comma-separated detuning ratios; selects a detuning sweep at a
        /// fixed shot count (the first --shots value).
        #[arg(long)]
        detunings: Option<String>,
        /// Repetitions per sweep point.
        #[arg(long, default_value_t = 2000)]
        reps: u64,
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruct and print the four per-preparation states.
    States {
        /// Input counts CSV path.
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Analyze a built-in stored data set against a theoretical witness.
    Fixture {
        /// Fixture name (`eq15`).
        #[arg(long)]
        name: String,
        /// Witness source: `correlation` or `detuned:RATIO`.
        #[arg(long, default_value = "correlation")]
        witness_source: String,
    },
}

fn read_file(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    std::fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn parse_witness_source(spec: &str) -> Result<WitnessSource, String> {
    if spec == "correlation" {
        return Ok(WitnessSource::TheoreticalCorrelation);
    }
    if let Some(rest) = spec.strip_prefix("detuned:") {
        let ratio: f64 = rest.parse().map_err(|_| format!("bad detuning ratio `{rest}`"))?;
        return Ok(WitnessSource::TheoreticalDetuned(ratio));
    }
    Err(format!("unknown witness source `{spec}` (want `correlation` or `detuned:RATIO`)"))
}

fn format_state(rho: &crate::linalg::CMatrix) -> String {
    let mut out = String::new();
    for i in 0..rho.rows() {
        out.push_str("  [");
        for j in 0..rho.cols() {
            let v = rho[(i, j)];
            out.push_str(&format!("{:+.4}{:+.4}i", v.re, v.im));
            if j + 1 < rho.cols() {
                out.push_str(", ");
            }
        }
        out.push_str("]\n");
    }
    out
}

fn run_command(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Simulate { model, shots, seed, out } => {
            if shots == 0 {
                return Err("--shots must be at least 1".to_string());
            }
            let model = model.build()?;
            let counts = sample_counts(&model, shots, seed).map_err(|e| e.to_string())?;
            write_file(&out, &counts_to_csv(&counts))?;
            Ok(EXIT_OK)
        }
        Command::Reconstruct { input, out, conjugate_b } => {
            let counts = parse_counts_csv(&read_file(&input)?).map_err(|e| e.to_string())?;
            if !counts.is_complete() {
                return Err("counts file is incomplete: a full tomography needs all 24 rows".to_string());
            }
            let f = frequencies(&counts).map_err(|e| e.to_string())?;
            let choi = reconstruct_choi(&f, conjugate_b.resolve());
            let eig = hermitian_eig(&choi.matrix, 1e-8).map_err(|e| e.to_string())?;
            let eigs: Vec<String> = eig.eigenvalues.iter().map(|l| format!("{l:.6}")).collect();
            println!("eigenvalues: [{}]", eigs.join(", "));
            println!("trace: {:.6}", choi.matrix.trace().re);
            if let Some(path) = out {
                let shots = counts.shots(BasisLabel::Z0, crate::bases::Setting::X);
                let file = ChoiFile::from_choi(
                    &choi,
                    ChoiMetadata { n_shots: shots, source: Some("reconstruction".to_string()), entry_uncertainty: None },
                );
                write_file(&path, &(choi_to_json(&file) + "\n"))?;
            }
            Ok(EXIT_OK)
        }
        Command::Witness { input, model, out } => {
            let witness = match input {
                Some(path) => {
                    let file = parse_choi_json(&read_file(&path)?).map_err(|e| e.to_string())?;
                    let choi = file.to_choi().map_err(|e| e.to_string())?;
                    let (_, vector) = min_eigenpair(&choi).map_err(|e| e.to_string())?;
                    witness_from_vector(&vector).map_err(|e| e.to_string())?
                }
                None => {
                    let model = model.build()?;
                    let source = match model.kind {
                        crate::channels::ChannelKind::CorrelatedEnv => WitnessSource::TheoreticalCorrelation,
                        crate::channels::ChannelKind::Detuned => {
                            WitnessSource::TheoreticalDetuned(model.detuning_ratio)
                        }
                        _ => {
                            return Err(
                                "theoretical witnesses are defined for --model correlated or detuned".to_string()
                            )
                        }
                    };
                    theoretical_witness(source).map_err(|e| e.to_string())?
                }
            };
            write_file(&out, &(witness_to_json(&witness) + "\n"))?;
            Ok(EXIT_OK)
        }
        Command::Test { input, witness, alpha, strict } => {
            if !(0.0 < alpha && alpha < 1.0) {
                return Err(format!("--alpha must lie in (0,1), got {alpha}"));
            }
            let counts = parse_counts_csv(&read_file(&input)?).map_err(|e| e.to_string())?;
            let w = parse_witness_json(&read_file(&witness)?).map_err(|e| e.to_string())?;
            let report = consistency_test(&w, &counts, alpha).map_err(|e| e.to_string())?;
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            if strict && report.is_inconsistent() {
                Ok(EXIT_INCONSISTENT)
            } else {
                Ok(EXIT_OK)
            }
        }
        Command::Sweep { model, shots, detunings, reps, alpha, seed, out } => {
            if reps == 0 {
                return Err("--reps must be at least 1".to_string());
            }
            let shots_list: Vec<u64> = shots
                .split(',')
                .map(|s| s.trim().parse::<u64>().map_err(|_| format!("bad shot count `{s}`")))
                .collect::<Result<_, _>>()?;
            if shots_list.is_empty() || shots_list.contains(&0) {
                return Err("--shots needs positive values".to_string());
            }
            let pool = thread_pool_from_env();
            let records = match detunings {
                Some(spec) => {
                    let ratios: Vec<f64> = spec
                        .split(',')
                        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("bad detuning `{s}`")))
                        .collect::<Result<_, _>>()?;
                    sweep_detuning_with_pool(&ratios, shots_list[0], reps, alpha, seed, &pool)
                        .map_err(|e| e.to_string())?
                }
                None => {
                    let model = model.build()?;
                    sweep_shots_with_pool(&model, &shots_list, reps, alpha, seed, &pool)
                        .map_err(|e| e.to_string())?
                }
            };
            write_file(&out, &sweep_to_csv(&records))?;
            Ok(EXIT_OK)
        }
        Command::States { input } => {
            let counts = parse_counts_csv(&read_file(&input)?).map_err(|e| e.to_string())?;
            let f = frequencies(&counts).map_err(|e| e.to_string())?;
            let states = reconstruct_states(&f);
            for (label, rho) in BasisLabel::CANONICAL.iter().zip(states.iter()) {
                println!("prep {}:", label.as_str());
                print!("{}", format_state(rho));
            }
            Ok(EXIT_OK)
        }
        Command::Fixture { name, witness_source } => {
            let fx = builtin_fixture(&name).map_err(|e| e.to_string())?;
            let source = parse_witness_source(&witness_source)?;
            let report = analyze_fixture(&fx, source).map_err(|e| e.to_string())?;
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            Ok(EXIT_OK)
        }
    }
}

/// Parse argv and run; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version through the error path with success
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run_command(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_INPUT_ERROR
        }
    }
}

//! `simeck-dfa`: SIMECK encryption, fault simulation and the fault attack from the shell.
//!
//! Exit status is 0 for completed runs (a failed attack is still a result),
//! 2 for usage errors and 1 for I/O errors.

mod hex;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::Serialize;
use simeck_dfa::dfa::{full_attack, survey_trail, AttackConfig};
use simeck_dfa::experiment::{
    emit_histogram_csv, emit_summary_json, format_comparison, run_campaign, trial_setup,
    HistogramKind,
};
use simeck_dfa::{Block, FaultOracle, FaultSpec, MasterKey, Variant};

#[derive(Parser)]
#[command(
    name = "simeck-dfa",
    version,
    about = "SIMECK ciphers and a single-bit differential fault attack"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encrypt one block
    Encrypt(CipherArgs),
    /// Decrypt one block
    Decrypt(DecryptArgs),
    /// Flip one bit of an intermediate state and print both ciphertexts
    Inject(InjectArgs),
    /// Run the attack once against a simulated device
    Attack(AttackArgs),
    /// Run a seeded campaign of attacks and write the statistics
    Experiment(ExperimentArgs),
    /// Classify the left-half differences after a flip as 0, 1 or varying
    Trail(TrailArgs),
}

#[derive(Args)]
struct VariantArg {
    /// s32_64, s48_96 or s64_128
    #[arg(long, short)]
    variant: Variant,
}

#[derive(Args)]
struct CipherArgs {
    #[command(flatten)]
    variant: VariantArg,
    /// Master key as K^3 K^2 K^1 K^0 in hex
    #[arg(long, short)]
    key: String,
    /// Block as X Y in hex
    #[arg(long, short)]
    plaintext: String,
}

#[derive(Args)]
struct DecryptArgs {
    #[command(flatten)]
    variant: VariantArg,
    #[arg(long, short)]
    key: String,
    /// Block as X Y in hex
    #[arg(long, short)]
    ciphertext: String,
}

#[derive(Args)]
struct InjectArgs {
    #[command(flatten)]
    cipher: CipherArgs,
    /// Round whose left input is hit; defaults to T - 5
    #[arg(long)]
    round: Option<usize>,
    /// Bit to flip; drawn at random from the seed when absent
    #[arg(long)]
    bit: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct AttackArgs {
    #[command(flatten)]
    variant: VariantArg,
    /// Hidden key; drawn from the seed when absent
    #[arg(long, short)]
    key: Option<String>,
    /// Fixed plaintext; drawn from the seed when absent
    #[arg(long, short)]
    plaintext: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    variant: VariantArg,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Histogram of faults for the whole key
    #[arg(long)]
    out_csv: Option<PathBuf>,
    /// Histogram of faults for the last round key
    #[arg(long)]
    out_csv_last_key: Option<PathBuf>,
    #[arg(long)]
    out_json: Option<PathBuf>,
}

#[derive(Args)]
struct TrailArgs {
    #[command(flatten)]
    variant: VariantArg,
    /// Flipped bit
    #[arg(long, default_value_t = 0)]
    bit: u32,
    /// Faulted round; defaults to T - 5
    #[arg(long)]
    round: Option<usize>,
    /// Random keys and plaintexts to sample
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Failure {
    Usage(clap::Error),
    Io(String),
}

type Outcome = Result<(), Failure>;

fn usage(arg: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(Cli::command().error(
        ErrorKind::ValueValidation,
        format!("invalid value for '--{arg}': {msg}"),
    ))
}

fn io_error(path: &Path, e: io::Error) -> Failure {
    Failure::Io(format!("cannot write {}: {e}", path.display()))
}

fn print(text: &str) -> Outcome {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure::Io(format!("cannot write to standard output: {e}")))
}

fn key_arg(text: &str, v: Variant) -> Result<MasterKey, Failure> {
    hex::parse_key(text, v).map_err(|e| usage("key", e))
}

fn block_arg(name: &str, text: &str, v: Variant) -> Result<Block, Failure> {
    hex::parse_block(text, v).map_err(|e| usage(name, e))
}

fn encrypt(args: CipherArgs) -> Outcome {
    let v = args.variant.variant;
    let key = key_arg(&args.key, v)?;
    let p = block_arg("plaintext", &args.plaintext, v)?;
    print(&format!(
        "{}\n",
        hex::format_block(simeck_dfa::cipher::encrypt(p, &key, v), v)
    ))
}

fn decrypt(args: DecryptArgs) -> Outcome {
    let v = args.variant.variant;
    let key = key_arg(&args.key, v)?;
    let c = block_arg("ciphertext", &args.ciphertext, v)?;
    print(&format!(
        "{}\n",
        hex::format_block(simeck_dfa::cipher::decrypt(c, &key, v), v)
    ))
}

#[derive(Serialize)]
struct InjectReport {
    variant: Variant,
    round: usize,
    bit: u32,
    correct: String,
    faulty: String,
}

fn inject(args: InjectArgs) -> Outcome {
    let v = args.cipher.variant.variant;
    let key = key_arg(&args.cipher.key, v)?;
    let p = block_arg("plaintext", &args.cipher.plaintext, v)?;
    let round = args.round.unwrap_or(v.fault_round());
    if round > v.rounds() {
        return Err(usage("round", format!("{v} has rounds 0..={}", v.rounds())));
    }
    let mut oracle = FaultOracle::new(v, &key, p, args.seed);
    let pair = match args.bit {
        Some(bit) if bit >= v.word_size() => {
            return Err(usage(
                "bit",
                format!("{v} words have bits 0..{}", v.word_size()),
            ));
        }
        Some(bit) => oracle.inject_fault_at(FaultSpec {
            round,
            position: bit,
        }),
        None => oracle.inject_fault(round),
    }
    .expect("arguments validated");
    let report = InjectReport {
        variant: v,
        round,
        bit: pair.true_position(),
        correct: hex::format_block(pair.correct(), v),
        faulty: hex::format_block(pair.faulty(), v),
    };
    print(&(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"))
}

#[derive(Serialize)]
struct AttackReport {
    variant: Variant,
    seed: u64,
    key: String,
    plaintext: String,
    success: bool,
    recovered_key: Option<String>,
    /// `K^{T-1}, K^{T-2}, ...` as recovered.
    round_keys: Vec<String>,
    total_faults: usize,
    faults_per_key: Vec<usize>,
    failure: Option<String>,
}

fn attack(args: AttackArgs) -> Outcome {
    let v = args.variant.variant;
    let (drawn_key, drawn_p, oracle_seed) = trial_setup(v, args.seed);
    let key = match &args.key {
        Some(k) => key_arg(k, v)?,
        None => drawn_key,
    };
    let p = match &args.plaintext {
        Some(p) => block_arg("plaintext", p, v)?,
        None => drawn_p,
    };
    let mut oracle = FaultOracle::new(v, &key, p, oracle_seed);
    let out = full_attack(&mut oracle, AttackConfig::default());
    let success = out.success() && out.master_key == Some(key);
    let report = AttackReport {
        variant: v,
        seed: args.seed,
        key: hex::format_key(&key, v),
        plaintext: hex::format_block(p, v),
        success,
        recovered_key: out.master_key.map(|k| hex::format_key(&k, v)),
        round_keys: out
            .round_keys
            .iter()
            .map(|&k| hex::format_word(k, v))
            .collect(),
        total_faults: out.total_faults,
        faults_per_key: out.faults_per_key.clone(),
        failure: out.failure.map(|f| f.to_string()),
    };
    print(&(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"))
}

fn write_file(path: &Path, bytes: &[u8]) -> Outcome {
    fs::write(path, bytes).map_err(|e| io_error(path, e))
}

fn experiment(args: ExperimentArgs) -> Outcome {
    let v = args.variant.variant;
    let summary = run_campaign(v, args.trials as usize, args.seed);
    if let Some(path) = &args.out_csv {
        write_file(
            path,
            &emit_histogram_csv(&summary, HistogramKind::MasterKey),
        )?;
    }
    if let Some(path) = &args.out_csv_last_key {
        write_file(path, &emit_histogram_csv(&summary, HistogramKind::LastKey))?;
    }
    if let Some(path) = &args.out_json {
        write_file(path, &emit_summary_json(&summary))?;
    }
    let mut text = format_comparison(std::slice::from_ref(&summary));
    for r in summary.failures() {
        text += &format!(
            "failed trial {} (seed {}): {}\n",
            r.trial_index,
            r.seed,
            r.failure.as_deref().unwrap_or("unknown")
        );
    }
    print(&text)
}

fn trail(args: TrailArgs) -> Outcome {
    let v = args.variant.variant;
    if args.bit >= v.word_size() {
        return Err(usage(
            "bit",
            format!("{v} words have bits 0..{}", v.word_size()),
        ));
    }
    let round = args.round.unwrap_or(v.fault_round());
    if round > v.rounds() {
        return Err(usage("round", format!("{v} has rounds 0..={}", v.rounds())));
    }
    let spec = FaultSpec {
        round,
        position: args.bit,
    };
    let table =
        survey_trail(v, spec, args.samples as usize, args.seed).expect("arguments validated");
    print(&table.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Encrypt(a) => encrypt(a),
        Command::Decrypt(a) => decrypt(a),
        Command::Inject(a) => inject(a),
        Command::Attack(a) => attack(a),
        Command::Experiment(a) => experiment(a),
        Command::Trail(a) => trail(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => e.exit(),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

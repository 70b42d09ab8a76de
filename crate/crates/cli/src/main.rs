//! `braidauth`: key generation, a TCP prover/verifier pair, local sessions,
//! impersonation experiments and the invariant self-test.
//!
//! Exit codes: 0 accept/success, 1 reject or failed check, 2 usage,
//! 3 I/O, 4 network or protocol failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use braidauth_core::protocol::SchemeId;

pub const SEED_ENV: &str = "BRAIDAUTH_SEED";

#[derive(Debug, Parser)]
#[command(name = "braidauth", version, about = "Braid-group root-problem identification schemes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a key pair and write the public and secret key files.
    Keygen(KeygenArgs),
    /// Connect to a verifier and prove possession of a secret key.
    Prove(ProveArgs),
    /// Run a verifier that accepts prover connections.
    VerifyServe(ServeArgs),
    /// Generate a key and run an honest session in-process.
    RunLocal(RunLocalArgs),
    /// Run an impersonation experiment and print the report.
    Attack(AttackArgs),
    /// Run the invariant suite.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SamplerArgs {
    /// Strand count (even, >= 4).
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    /// Word length L of sampled braids.
    #[arg(long = "len", default_value_t = 128)]
    pub word_length: usize,
    /// Minimum canonical length of secret braids [default: min(8, L)].
    #[arg(long)]
    pub minlen: Option<usize>,
    /// RNG seed; the BRAIDAUTH_SEED environment variable takes precedence.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct SchemeArgs {
    #[arg(long, default_value = "1")]
    pub scheme: SchemeId,
    /// Scheme I exponent r.
    #[arg(long)]
    pub r: Option<u32>,
    /// Scheme I exponent s.
    #[arg(long)]
    pub s: Option<u32>,
    /// Scheme II exponent e.
    #[arg(long)]
    pub e: Option<u32>,
    /// Scheme II exponent f.
    #[arg(long)]
    pub f: Option<u32>,
}

#[derive(Debug, Args)]
pub struct KeygenArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[arg(long = "pub", default_value = "braidauth.pub")]
    pub public: PathBuf,
    #[arg(long, default_value = "braidauth.key")]
    pub secret: PathBuf,
}

#[derive(Debug, Args)]
pub struct ProveArgs {
    /// Verifier address, host:port.
    #[arg(long, default_value = "127.0.0.1:7878")]
    pub connect: String,
    #[arg(long = "pub", default_value = "braidauth.pub")]
    pub public: PathBuf,
    #[arg(long, default_value = "braidauth.key")]
    pub secret: PathBuf,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Address to listen on, host:port. Port 0 picks a free port.
    #[arg(long, default_value = "127.0.0.1:7878")]
    pub listen: String,
    #[arg(long, default_value = "1")]
    pub scheme: SchemeId,
    /// Only accept provers presenting this public key.
    #[arg(long = "pub")]
    pub public: Option<PathBuf>,
    /// Rounds k per session.
    #[arg(long, default_value_t = 3)]
    pub rounds: u16,
    /// Word length L of challenge braids.
    #[arg(long = "len", default_value_t = 128)]
    pub word_length: usize,
    #[arg(long)]
    pub minlen: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Serve a single connection, then exit with its verdict.
    #[arg(long)]
    pub once: bool,
}

#[derive(Debug, Args)]
pub struct RunLocalArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[arg(long, default_value_t = 3)]
    pub rounds: usize,
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    /// random | replay | root
    #[arg(long, default_value = "random")]
    pub strategy: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long = "len", default_value_t = 32)]
    pub word_length: usize,
    #[arg(long)]
    pub minlen: Option<usize>,
    /// Search bound for the root attack [default: L].
    #[arg(long)]
    pub bound: Option<usize>,
    /// Rounds per attempted session.
    #[arg(long, default_value_t = 1)]
    pub rounds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the report as key=value lines to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Run trials on one thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Comma-separated even strand counts for the size-dependent checks.
    #[arg(long, value_delimiter = ',', default_values_t = [4usize, 8])]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 40)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Run only checks whose name contains this string.
    #[arg(long)]
    pub only: Option<String>,
    #[arg(long)]
    pub sequential: bool,
    /// Swap in a deliberately broken normalizer (mutation smoke test).
    #[arg(long, hide = true)]
    pub mutate_normalize: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::seed_override().and_then(|seed| commands::dispatch(cli.command, seed));
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

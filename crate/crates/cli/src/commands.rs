use std::fmt;
use std::fs;
use std::io::Write as _;
use std::net::TcpListener;
use std::path::Path;

use braidauth_core::net::{self, ClientError, ServeError, ServerConfig};
use braidauth_core::oracle::{impersonation_experiment, AttackStrategy, ExperimentConfig};
use braidauth_core::protocol::{
    assemble_key_pair, parse_public_key, parse_secret_key, run_session, write_public_key, write_secret_key,
    HonestProver, KeyPair, ProtocolError, PublicKey, SchemeId, SessionConfig, Transcript, Verifier,
};
use braidauth_core::sampling::{stream_rng, SamplerConfig};
use braidauth_core::selftest::{self, SelftestConfig};
use braidauth_core::{BraidError, Execution};

use crate::{AttackArgs, Command, KeygenArgs, ProveArgs, RunLocalArgs, SchemeArgs, SelftestArgs, ServeArgs, SEED_ENV};

pub const ACCEPT: i32 = 0;
pub const REJECT: i32 = 1;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Network(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Network(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Network(m) => f.write_str(m),
        }
    }
}

impl From<ProtocolError> for CliError {
    fn from(e: ProtocolError) -> Self {
        match e {
            ProtocolError::InvalidParameter(m) => CliError::Usage(m),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<BraidError> for CliError {
    fn from(e: BraidError) -> Self {
        match e {
            BraidError::InvalidParameter(m) => CliError::Usage(m),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<ClientError> for CliError {
    fn from(e: ClientError) -> Self {
        CliError::Network(e.to_string())
    }
}

/// `BRAIDAUTH_SEED`, when set, replaces every `--seed`.
pub fn seed_override() -> Result<Option<u64>, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{SEED_ENV} must be an unsigned 64-bit integer, got {v:?}"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::Usage(format!("{SEED_ENV}: {e}"))),
    }
}

pub fn dispatch(command: Command, seed: Option<u64>) -> Result<i32, CliError> {
    match command {
        Command::Keygen(a) => keygen(a, seed),
        Command::Prove(a) => prove(a),
        Command::VerifyServe(a) => verify_serve(a, seed),
        Command::RunLocal(a) => run_local(a, seed),
        Command::Attack(a) => attack(a, seed),
        Command::Selftest(a) => selftest_cmd(a, seed),
    }
}

fn sampler(n: usize, word_length: usize, minlen: Option<usize>, seed: u64) -> Result<SamplerConfig, CliError> {
    let minlen = minlen.unwrap_or(SamplerConfig::DEMO_MIN_CANONICAL_LENGTH.min(word_length).max(1));
    Ok(SamplerConfig::new(n, word_length, minlen, seed)?)
}

fn exponents(args: &SchemeArgs) -> Result<(u32, u32), CliError> {
    match args.scheme {
        SchemeId::One => {
            if args.e.is_some() || args.f.is_some() {
                return Err(CliError::Usage("scheme 1 takes --r and --s, not --e/--f".into()));
            }
            Ok((args.r.unwrap_or(2), args.s.unwrap_or(3)))
        }
        SchemeId::Two => {
            if args.r.is_some() || args.s.is_some() {
                return Err(CliError::Usage("scheme 2 takes --e and --f, not --r/--s".into()));
            }
            Ok((args.e.unwrap_or(2), args.f.unwrap_or(3)))
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn generate(scheme: &SchemeArgs, sampler: &SamplerConfig) -> Result<KeyPair, CliError> {
    let exps = exponents(scheme)?;
    Ok(KeyPair::generate(scheme.scheme, sampler, exps, &mut stream_rng(sampler.seed(), 0))?)
}

fn keygen(a: KeygenArgs, seed: Option<u64>) -> Result<i32, CliError> {
    let s = &a.sampler;
    let cfg = sampler(s.n, s.word_length, s.minlen, seed.unwrap_or(s.seed))?;
    let keys = generate(&a.scheme, &cfg)?;
    write_file(&a.public, &write_public_key(&keys.public()))?;
    write_file(&a.secret, &write_secret_key(&keys))?;
    println!("{cfg}");
    println!("public key: {}", a.public.display());
    println!("secret key: {}", a.secret.display());
    Ok(ACCEPT)
}

fn load_public(path: &Path) -> Result<PublicKey, CliError> {
    parse_public_key(&read_file(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn prove(a: ProveArgs) -> Result<i32, CliError> {
    let public = load_public(&a.public)?;
    let secret = parse_secret_key(&read_file(&a.secret)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", a.secret.display())))?;
    let keys = assemble_key_pair(public, secret)?;
    let outcome = net::prove_tcp(a.connect.as_str(), &keys)?;
    for (round, ok) in &outcome.verdicts {
        println!("round {round}: verdict={}", u8::from(*ok));
    }
    Ok(verdict_line(outcome.accepted()))
}

fn verdict_line(accepted: bool) -> i32 {
    if accepted {
        println!("ACCEPTED");
        ACCEPT
    } else {
        println!("REJECTED");
        REJECT
    }
}

fn verify_serve(a: ServeArgs, seed: Option<u64>) -> Result<i32, CliError> {
    let minlen = a.minlen.unwrap_or(SamplerConfig::DEMO_MIN_CANONICAL_LENGTH.min(a.word_length).max(1));
    let mut cfg = ServerConfig::new(a.scheme, a.rounds, a.word_length, minlen, seed.unwrap_or(a.seed))?;
    if let Some(path) = &a.public {
        let key = load_public(path)?;
        if key.scheme() != a.scheme {
            return Err(CliError::Usage(format!("{} is a scheme {} key", path.display(), key.scheme())));
        }
        cfg = cfg.with_expected_key(key);
    }
    let listener =
        TcpListener::bind(a.listen.as_str()).map_err(|e| CliError::Network(format!("bind {}: {e}", a.listen)))?;
    let addr = listener.local_addr().map_err(|e| CliError::Network(e.to_string()))?;
    println!("listening on {addr}");
    let _ = std::io::stdout().flush();
    if a.once {
        let (stream, _) = listener.accept().map_err(|e| CliError::Network(e.to_string()))?;
        return match net::serve_tcp_connection(stream, &cfg, 0) {
            Ok(t) => {
                print!("{t}");
                Ok(verdict_line(t.accepted()))
            }
            Err(e) => Err(CliError::Network(e.to_string())),
        };
    }
    net::serve_forever(listener, cfg, |index, outcome: &Result<Transcript, ServeError>| {
        match outcome {
            Ok(t) => println!("connection {index}: {}", if t.accepted() { "ACCEPTED" } else { "REJECTED" }),
            Err(e) => println!("connection {index}: {e}"),
        }
        let _ = std::io::stdout().flush();
    })
    .map_err(|e| CliError::Network(e.to_string()))?;
    Ok(ACCEPT)
}

fn run_local(a: RunLocalArgs, seed: Option<u64>) -> Result<i32, CliError> {
    let s = &a.sampler;
    let cfg = sampler(s.n, s.word_length, s.minlen, seed.unwrap_or(s.seed))?;
    let keys = generate(&a.scheme, &cfg)?;
    let session = SessionConfig::new(a.scheme.scheme, a.rounds, cfg)?;
    let mut verifier = Verifier::new(keys.public(), cfg, stream_rng(cfg.seed(), 1))?;
    let transcript = run_session(&mut HonestProver::new(keys), &mut verifier, &session)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    println!("{cfg}");
    print!("{transcript}");
    Ok(verdict_line(transcript.accepted()))
}

fn parse_strategy(name: &str, bound: Option<usize>, word_length: usize) -> Result<AttackStrategy, CliError> {
    let strategy: AttackStrategy = name.parse().map_err(CliError::Usage)?;
    Ok(match strategy {
        AttackStrategy::RootAttack { bound: parsed } => {
            let explicit = name.contains(':') || name.contains('(');
            AttackStrategy::RootAttack { bound: bound.unwrap_or(if explicit { parsed } else { word_length }) }
        }
        other => other,
    })
}

fn attack(a: AttackArgs, seed: Option<u64>) -> Result<i32, CliError> {
    if a.n < 4 || !a.n.is_multiple_of(2) {
        return Err(CliError::Usage(format!(
            "n must be even and >= 4 for both schemes, got {}; the smallest toy setting is --n 4 --len 2",
            a.n
        )));
    }
    let seed = seed.unwrap_or(a.seed);
    let cfg = sampler(a.n, a.word_length, a.minlen, seed)?;
    let strategy = parse_strategy(&a.strategy, a.bound, a.word_length)?;
    let keys = generate(&a.scheme, &cfg)?;
    let execution = if a.sequential { Execution::Sequential } else { Execution::Parallel };
    let experiment = ExperimentConfig { trials: a.trials, rounds: a.rounds, sampler: cfg, seed, execution };
    let report = impersonation_experiment(&keys.public(), strategy, &experiment)?;
    println!("{cfg}");
    println!("{report}");
    if let Some(found) = report.key_recovered {
        println!("key recovered: {}", if found { "yes" } else { "no" });
    }
    if let Some(path) = &a.report {
        write_file(path, &report.to_key_values())?;
    }
    Ok(ACCEPT)
}

fn selftest_cmd(a: SelftestArgs, seed: Option<u64>) -> Result<i32, CliError> {
    let cfg = SelftestConfig {
        sizes: a.n,
        seed: seed.unwrap_or(a.seed),
        samples: a.samples,
        normalizer: if a.mutate_normalize {
            selftest::sign_dropping_normalizer
        } else {
            selftest::standard_normalizer
        },
        execution: if a.sequential { Execution::Sequential } else { Execution::Parallel },
    };
    cfg.validate().map_err(CliError::Usage)?;
    let only = a.only.unwrap_or_default();
    let outcomes = selftest::run_selected(&cfg, |name| name.contains(only.as_str()));
    if outcomes.is_empty() {
        return Err(CliError::Usage(format!("no check matches {only:?}")));
    }
    let mut failed = 0;
    for o in &outcomes {
        match &o.result {
            Ok(()) => println!("PASS {}", o.name),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}: {detail}", o.name);
            }
        }
    }
    println!("{} checks, {failed} failed", outcomes.len());
    Ok(if failed == 0 { ACCEPT } else { REJECT })
}

//! Acceptance suite. Runs every criterion at its stated size and prints one
//! PASS/FAIL line per criterion; exits nonzero if any fails.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::Instant;

use braidauth_core::braid::audit;
use braidauth_core::hash::{deserialize, hash_braid, serialize, GOLDEN_DIGESTS};
use braidauth_core::net::{self, encode_hello, ServerConfig};
use braidauth_core::oracle::{
    all_words, brute_force_root_with, impersonation_experiment, AttackStrategy, ExperimentConfig, RewritingClosure,
    RootQuery, SearchOptions,
};
use braidauth_core::protocol::{
    challenge, prover_braid1, prover_braid2, run_session, simulate_transcript, verifier_braid1, verifier_braid2,
    Challenge, HonestProver, KeyPair, SchemeId, SessionConfig, Verifier,
};
use braidauth_core::sampling::{sample_word_over, stream_rng, BraidRng, SamplerConfig};
use braidauth_core::{BraidWord, CanonicalForm, Execution};
use rand::Rng;

const SEED: u64 = 0x0acc_e97a_0ce5;
const SCHEMES: [SchemeId; 2] = [SchemeId::One, SchemeId::Two];
const EXPONENTS: [(u32, u32); 4] = [(2, 2), (2, 3), (3, 2), (3, 3)];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn exec() -> Execution {
    Execution::default()
}

fn sampler(n: usize, len: usize, seed: u64) -> SamplerConfig {
    SamplerConfig::new(n, len, SamplerConfig::TEST_MIN_CANONICAL_LENGTH.min(len), seed).expect("valid test sampler")
}

fn keys(scheme: SchemeId, cfg: &SamplerConfig, exps: (u32, u32), rng: &mut BraidRng) -> KeyPair {
    KeyPair::generate(scheme, cfg, exps, rng).expect("key generation")
}

fn random_braid(n: usize, len: usize, rng: &mut BraidRng) -> CanonicalForm {
    sample_word_over(n, 1..=n - 1, len, rng).expect("n >= 2").normalize()
}

fn tally(label: &str, failures: usize, total: usize) -> Outcome {
    if failures == 0 {
        Ok(format!("{label}: {total}/{total}"))
    } else {
        Err(format!("{label}: {failures} of {total} failed"))
    }
}

fn completeness() -> Outcome {
    const SESSIONS: usize = 1000;
    let mut parts = Vec::new();
    for (si, scheme) in SCHEMES.into_iter().enumerate() {
        for n in [4usize, 8, 16] {
            let cfg = sampler(n, 8, SEED);
            let session = SessionConfig::new(scheme, 1, cfg).unwrap();
            let stream = (si * 100 + n) as u64 * 1_000_000;
            let accepted = exec()
                .map(SESSIONS, |i| {
                    let mut rng = stream_rng(SEED, stream + i as u64);
                    let k = keys(scheme, &cfg, EXPONENTS[i % 4], &mut rng);
                    let mut verifier = Verifier::new(k.public(), cfg, rng).unwrap();
                    run_session(&mut HonestProver::new(k), &mut verifier, &session).map(|t| t.accepted()) == Ok(true)
                })
                .into_iter()
                .filter(|&ok| ok)
                .count();
            if accepted != SESSIONS {
                return Err(format!("scheme {scheme} n={n}: {accepted}/{SESSIONS} accepted"));
            }
            parts.push(format!("s{scheme}/n{n}"));
        }
    }
    Ok(format!("{SESSIONS}/{SESSIONS} honest sessions accepted for each of {}", parts.join(" ")))
}

fn verification_identity() -> Outcome {
    const INSTANCES: usize = 500;
    let mut failures = 0;
    for (si, scheme) in SCHEMES.into_iter().enumerate() {
        failures += exec()
            .map(INSTANCES, |i| {
                let mut rng = stream_rng(SEED ^ 2, (si * INSTANCES + i) as u64);
                let cfg = sampler([4, 8, 16][i % 3], 8, SEED);
                let k = keys(scheme, &cfg, EXPONENTS[i % 4], &mut rng);
                let ch = challenge(&k.public(), &cfg, &mut rng).unwrap();
                match (&k, &ch) {
                    (KeyPair::One(k), Challenge::One(c)) => {
                        prover_braid1(k, &c.y).ok() == Some(verifier_braid1(&k.public, &c.verifier_secret))
                    }
                    (KeyPair::Two(k), Challenge::Two(c)) => {
                        prover_braid2(k, &c.y).ok() == Some(verifier_braid2(&k.public, &c.verifier_secret))
                    }
                    _ => false,
                }
            })
            .into_iter()
            .filter(|&ok| !ok)
            .count();
    }
    tally("pre-hash braids equal (500 per scheme)", failures, 2 * INSTANCES)
}

fn normal_form_correctness() -> Outcome {
    const MAX_LEN: usize = 4;
    // every relation move stays within |w| + 2 letters; this margin lets
    // equal words of length 4 meet through longer intermediates
    const CLOSURE_LEN: usize = MAX_LEN + 4;
    let start = Instant::now();
    let mut closure = RewritingClosure::build(3, CLOSURE_LEN);
    let words: Vec<BraidWord> = (0..=MAX_LEN).flat_map(|l| all_words(3, l)).collect();
    let forms: Vec<CanonicalForm> = words.iter().map(BraidWord::normalize).collect();
    let mut disagreements = 0usize;
    let mut pairs = 0usize;
    for i in 0..words.len() {
        let ci = closure.class_of(&words[i]).expect("within closure bound");
        for j in i..words.len() {
            let cj = closure.class_of(&words[j]).expect("within closure bound");
            pairs += 1;
            if (ci == cj) != (forms[i] == forms[j]) {
                disagreements += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 60.0 {
        return Err(format!("took {secs:.1}s, limit 60s"));
    }
    if disagreements > 0 {
        return Err(format!("{disagreements} of {pairs} pairs disagree with the rewriting closure"));
    }
    Ok(format!("{pairs} word pairs at n=3, |w| <= {MAX_LEN}, 0 disagreements, {secs:.1}s"))
}

fn garside_identities() -> Outcome {
    const SAMPLES: usize = 200;
    let mut failures = Vec::new();
    for n in 3..=8usize {
        let delta = CanonicalForm::delta(n).unwrap();
        let delta2 = delta.power(2).unwrap();
        let bad = exec()
            .map(SAMPLES, |i| {
                let mut rng = stream_rng(SEED ^ 4, (n * SAMPLES + i) as u64);
                let b = random_braid(n, 20, &mut rng);
                let conj = delta.multiply(&b).unwrap() == b.tau().multiply(&delta).unwrap();
                let inv = b.tau().tau() == b;
                let central = delta2.multiply(&b).unwrap() == b.multiply(&delta2).unwrap();
                conj && inv && central
            })
            .into_iter()
            .filter(|&ok| !ok)
            .count();
        if bad > 0 {
            failures.push(format!("n={n}: {bad}"));
        }
    }
    if failures.is_empty() {
        Ok(format!("{SAMPLES} braids at each n in 3..=8: Δb = τ(b)Δ, τ² = id, Δ² central"))
    } else {
        Err(failures.join(", "))
    }
}

fn left_weightedness() -> Outcome {
    if !audit::is_active() {
        return Err("normal-form audit is compiled out; build with debug assertions or --features audit".into());
    }
    let c = audit::counts();
    if c.checked == 0 {
        return Err("no canonical forms were audited".into());
    }
    if c.violations > 0 {
        return Err(format!("{} of {} canonical forms violate left-weightedness", c.violations, c.checked));
    }
    Ok(format!("{} canonical forms audited during criteria 1-4, 0 violations", c.checked))
}

fn root_oracle() -> Outcome {
    const PLANTED: usize = 50;
    let opts = SearchOptions { execution: exec(), ..SearchOptions::default() };
    let mut rng = stream_rng(SEED ^ 6, 0);
    for _ in 0..PLANTED {
        let x = random_braid(3, rng.random_range(0..=2), &mut rng);
        let e: u32 = rng.random_range(2..=3);
        let y = x.power(e as i64).unwrap();
        let q = RootQuery::new(y.clone(), e, 2).unwrap();
        let out = brute_force_root_with(&q, &opts).map_err(|err| err.to_string())?;
        match out.root() {
            Some(r) if r.power(e as i64).unwrap() == y => {}
            Some(r) => return Err(format!("{r} returned as a root of {y} but is not one")),
            None => return Err(format!("no root found for planted {y} = ({x})^{e}")),
        }
    }
    let unfiltered = SearchOptions { exponent_filter: false, ..opts };
    let mut targets: Vec<CanonicalForm> = (0..=3).flat_map(|l| all_words(3, l)).map(|w| w.normalize()).collect();
    targets.sort_by_key(|x| serialize(x).unwrap());
    targets.dedup();
    let mut compared = 0;
    for y in &targets {
        for e in [2u32, 3] {
            let q = RootQuery::new(y.clone(), e, 3).unwrap();
            let filtered = brute_force_root_with(&q, &opts).map_err(|err| err.to_string())?;
            let plain = brute_force_root_with(&q, &unfiltered).map_err(|err| err.to_string())?;
            if filtered.root() != plain.root() {
                return Err(format!("filter changes the answer for {y}, e={e}"));
            }
            compared += 1;
        }
    }
    Ok(format!("{PLANTED}/{PLANTED} planted roots recovered; filter agrees with unfiltered search on {compared} queries"))
}

fn experiment(
    scheme: SchemeId,
    cfg: SamplerConfig,
    strategy: AttackStrategy,
    trials: usize,
    stream: u64,
) -> Result<usize, String> {
    let k = keys(scheme, &cfg, (2, 3), &mut stream_rng(SEED ^ 7, stream));
    let ex = ExperimentConfig { trials, rounds: 1, sampler: cfg, seed: SEED ^ stream, execution: exec() };
    impersonation_experiment(&k.public(), strategy, &ex).map(|r| r.successes).map_err(|e| e.to_string())
}

fn soundness() -> Outcome {
    let big = sampler(8, 32, SEED);
    let toy = SamplerConfig::new(4, 2, 1, SEED).unwrap();
    let mut lines = Vec::new();
    let mut failed = Vec::new();
    for (si, scheme) in SCHEMES.into_iter().enumerate() {
        let s = si as u64 * 10;
        let runs = [
            ("random-digest n=8 L=32", big, AttackStrategy::RandomDigest, 10_000, 0),
            ("replay n=8 L=32", big, AttackStrategy::Replay, 10_000, 0),
            ("root-attack n=4 L=2", toy, AttackStrategy::RootAttack { bound: 2 }, 20, 20),
            ("root-attack n=8 L=32 bound 8", big, AttackStrategy::RootAttack { bound: 8 }, 100, 0),
        ];
        for (i, (label, cfg, strategy, trials, want)) in runs.into_iter().enumerate() {
            let start = Instant::now();
            let got = experiment(scheme, cfg, strategy, trials, s + i as u64)?;
            let line = format!("scheme {scheme} {label}: {got}/{trials} ({:.1}s)", start.elapsed().as_secs_f64());
            if got != want {
                failed.push(format!("{line}, expected {want}/{trials}"));
            }
            lines.push(line);
        }
    }
    if failed.is_empty() {
        Ok(lines.join("; "))
    } else {
        Err(failed.join("; "))
    }
}

fn simulator() -> Outcome {
    const SESSIONS: usize = 100;
    let mut mismatches = 0;
    for (si, scheme) in SCHEMES.into_iter().enumerate() {
        mismatches += exec()
            .map(SESSIONS, |i| {
                let cfg = sampler([4, 8][i % 2], 8, SEED);
                let stream = (si * SESSIONS + i) as u64;
                let k = keys(scheme, &cfg, EXPONENTS[i % 4], &mut stream_rng(SEED ^ 8, stream));
                let session = SessionConfig::new(scheme, 3, cfg).unwrap();
                let coins = || stream_rng(SEED ^ 9, stream);
                let mut verifier = Verifier::new(k.public(), cfg, coins()).unwrap();
                let real = run_session(&mut HonestProver::new(k.clone()), &mut verifier, &session).unwrap();
                let sim = simulate_transcript(&k.public(), &cfg, 3, &mut coins()).unwrap();
                real.dump().into_bytes() == sim.dump().into_bytes()
            })
            .into_iter()
            .filter(|&ok| !ok)
            .count();
    }
    tally("simulated transcripts byte-identical to real ones (100 per scheme)", mismatches, 2 * SESSIONS)
}

fn serialization() -> Outcome {
    const FORMS: usize = 100_000;
    const FUZZ: usize = 10_000;
    let bad = exec()
        .map(FORMS, |i| {
            let mut rng = stream_rng(SEED ^ 10, i as u64);
            let n = rng.random_range(2..=16usize);
            let x = random_braid(n, rng.random_range(0..=24), &mut rng)
                .multiply(&CanonicalForm::delta_power(n, rng.random_range(-3..=3)).unwrap())
                .unwrap();
            let bytes = serialize(&x).unwrap();
            deserialize(&bytes).ok() != Some(x) || serialize(&deserialize(&bytes).unwrap()).unwrap() != bytes
        })
        .into_iter()
        .filter(|&b| b)
        .count();
    if bad > 0 {
        return Err(format!("{bad} of {FORMS} forms fail to round-trip"));
    }
    for (n, word, hex) in GOLDEN_DIGESTS {
        let got = hash_braid(&BraidWord::parse(n, word).unwrap().normalize()).to_hex();
        if got != hex {
            return Err(format!("golden digest of ({word}) on {n} strands changed: {got}"));
        }
    }
    let cfg = sampler(4, 8, SEED);
    let k = keys(SchemeId::One, &cfg, (2, 2), &mut stream_rng(SEED ^ 11, 0));
    let hello = encode_hello(&k.public()).unwrap();
    let server = ServerConfig::new(SchemeId::One, 2, 8, 3, SEED).unwrap();
    let crashes: Vec<String> = exec()
        .map(FUZZ, |i| net::check_server_survives(&net::fuzz_case(&mut stream_rng(SEED ^ 12, i as u64), &hello), &server))
        .into_iter()
        .filter_map(Result::err)
        .collect();
    if let Some(first) = crashes.first() {
        return Err(format!("{} of {FUZZ} fuzz frames broke the server, first: {first}", crashes.len()));
    }
    Ok(format!(
        "{FORMS} forms round-trip, {} golden digests stable, {FUZZ} fuzzed frames handled",
        GOLDEN_DIGESTS.len()
    ))
}

fn torsion() -> Outcome {
    const BRAIDS: usize = 100;
    let mut rng = stream_rng(SEED ^ 13, 0);
    let mut checked = 0;
    let mut seen = HashSet::new();
    while checked < BRAIDS {
        let n = rng.random_range(3..=8usize);
        let x = random_braid(n, 16, &mut rng);
        if x.is_identity() || !seen.insert(x.clone()) {
            continue;
        }
        for e in [2i64, 3] {
            if x.power(e).unwrap().is_identity() {
                return Err(format!("({x})^{e} is the identity"));
            }
        }
        checked += 1;
    }
    tally("nontrivial braids with x^2, x^3 != 1", 0, checked)
}

fn main() -> ExitCode {
    // criterion 5 reads the audit counters filled by 1-4, so order matters
    let criteria: [Criterion; 10] = [
        ("completeness", completeness),
        ("verification identity", verification_identity),
        ("normal-form correctness", normal_form_correctness),
        ("garside identities", garside_identities),
        ("left-weightedness", left_weightedness),
        ("root oracle", root_oracle),
        ("soundness experiments", soundness),
        ("simulator", simulator),
        ("serialization and wire", serialization),
        ("torsion-freeness", torsion),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let total = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let number = i + 1;
        if !only.is_empty() && !only.contains(&number) {
            continue;
        }
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {number:>2} {name} [{secs:.1}s]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {number:>2} {name} [{secs:.1}s]: {detail}");
            }
        }
    }
    println!("acceptance: {failed} failed, {:.1}s total", total.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

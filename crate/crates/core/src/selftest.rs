//! The invariant suite run by `braidauth selftest`: every listed property,
//! at test-scale parameters, each under a stable name.

use std::collections::HashSet;
use std::net::TcpListener;
use std::thread;

use rand::Rng;

use crate::braid::{BraidWord, CanonicalForm, Permutation};
use crate::exec::Execution;
use crate::hash::{deserialize, hash_braid, serialize, GOLDEN_DIGESTS};
use crate::net::{self, encode_hello, ServerConfig};
use crate::oracle::{
    all_words, brute_force_root_with, impersonation_experiment, random_rewrite, AttackStrategy, ExperimentConfig,
    RewritingClosure, RootQuery, SearchOptions,
};
use crate::protocol::{
    parse_public_key, prover_braid1, prover_braid2, run_session, simulate_transcript, verifier_braid1,
    verifier_braid2, write_public_key, Challenge, HonestProver, KeyPair, PublicKey, SchemeId, SessionConfig, Verifier,
};
use crate::sampling::{sample_subgroup_word, sample_word_over, stream_rng, BraidRng, SamplerConfig, SubgroupSide};

/// Maps a word to its canonical form. Swappable so the suite can be shown
/// to catch a broken normalizer.
pub type Normalizer = fn(&BraidWord) -> CanonicalForm;

pub fn standard_normalizer(w: &BraidWord) -> CanonicalForm {
    w.normalize()
}

/// Deliberately wrong: treats every letter as positive.
pub fn sign_dropping_normalizer(w: &BraidWord) -> CanonicalForm {
    let letters = w.letters().iter().map(|l| crate::GeneratorLetter::sigma(l.index())).collect();
    BraidWord::new(w.strands(), letters).expect("same indices").normalize()
}

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    /// Even strand counts `>= 4` for the protocol checks; the braid checks
    /// also run at `n = 3`.
    pub sizes: Vec<usize>,
    pub seed: u64,
    /// Random cases per check and size.
    pub samples: usize,
    pub normalizer: Normalizer,
    pub execution: Execution,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self { sizes: vec![4, 8], seed: 0, samples: 40, normalizer: standard_normalizer, execution: Execution::default() }
    }
}

impl SelftestConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.sizes.is_empty() {
            return Err("at least one size is required".into());
        }
        if let Some(n) = self.sizes.iter().find(|&&n| n < 4 || n % 2 != 0 || n > 64) {
            return Err(format!("sizes must be even and in 4..=64, got {n}"));
        }
        if self.samples == 0 {
            return Err("samples must be positive".into());
        }
        Ok(())
    }

    fn braid_sizes(&self) -> Vec<usize> {
        let mut v = vec![3];
        v.extend(self.sizes.iter().copied());
        v
    }

    fn sampler(&self, n: usize, word_length: usize) -> SamplerConfig {
        SamplerConfig::new(n, word_length, SamplerConfig::TEST_MIN_CANONICAL_LENGTH, self.seed).expect("validated size")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub result: Result<(), String>,
}

type Check = fn(&SelftestConfig, &mut BraidRng) -> Result<(), String>;

/// Every check, in execution order.
pub const CHECKS: &[(&str, Check)] = &[
    ("relation-invariance", relation_invariance),
    ("left-weightedness", left_weightedness),
    ("idempotence", idempotence),
    ("delta-commutation", delta_commutation),
    ("tau-involution", tau_involution),
    ("group-laws", group_laws),
    ("torsion-freeness", torsion_freeness),
    ("permutation-bijection", permutation_bijection),
    ("brute-force-equivalence", brute_force_equivalence),
    ("subgroup-closure", subgroup_closure),
    ("subgroup-commutation", subgroup_commutation),
    ("sampling-determinism", sampling_determinism),
    ("hash-well-definedness", hash_well_definedness),
    ("serialize-round-trip", serialize_round_trip),
    ("golden-digests", golden_digests),
    ("completeness", completeness),
    ("verification-identity", verification_identity),
    ("simulator-exactness", simulator_exactness),
    ("challenge-freshness", challenge_freshness),
    ("secret-independence", secret_independence),
    ("root-soundness", root_soundness),
    ("filter-soundness", filter_soundness),
    ("root-monotonicity", root_monotonicity),
    ("attack-asymmetry", attack_asymmetry),
    ("wire-round-trip", wire_round_trip),
    ("framing-robustness", framing_robustness),
];

pub fn check_names() -> impl Iterator<Item = &'static str> {
    CHECKS.iter().map(|(name, _)| *name)
}

/// Runs every check. Check `i` draws from `stream_rng(seed, i)`, so a single
/// check can be rerun in isolation with the same inputs.
pub fn run(cfg: &SelftestConfig) -> Vec<CheckOutcome> {
    run_selected(cfg, |_| true)
}

pub fn run_selected(cfg: &SelftestConfig, keep: impl Fn(&str) -> bool) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .enumerate()
        .filter(|(_, (name, _))| keep(name))
        .map(|(i, (name, check))| {
            let mut rng = stream_rng(cfg.seed, i as u64);
            let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| check(cfg, &mut rng)))
                .unwrap_or_else(|_| Err("panicked".into()));
            CheckOutcome { name, result }
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_word(n: usize, len: usize, rng: &mut BraidRng) -> BraidWord {
    sample_word_over(n, 1..=n - 1, len, rng).expect("n >= 2")
}

fn random_braid(n: usize, len: usize, rng: &mut BraidRng) -> CanonicalForm {
    random_word(n, len, rng).normalize()
}

fn relation_invariance(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    for n in cfg.braid_sizes() {
        for _ in 0..cfg.samples {
            let w = random_word(n, 12, rng);
            let v = random_rewrite(&w, 24, rng);
            let (x, y) = ((cfg.normalizer)(&w), (cfg.normalizer)(&v));
            ensure(x == y, || format!("n={n}: {w} and {v} normalize differently"))?;
        }
    }
    Ok(())
}

fn left_weightedness(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    for n in cfg.braid_sizes() {
        for _ in 0..cfg.samples {
            let x = (cfg.normalizer)(&random_word(n, 10, rng));
            let y = (cfg.normalizer)(&random_word(n, 10, rng));
            let products = [
                x.clone(),
                x.multiply(&y).map_err(|e| e.to_string())?,
                x.inverse(),
                x.power(3).map_err(|e| e.to_string())?,
                x.tau(),
            ];
            for p in &products {
                p.validate().map_err(|e| format!("n={n}: {e} in {p}"))?;
            }
        }
    }
    Ok(())
}

fn idempotence(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    for n in cfg.braid_sizes() {
        for _ in 0..cfg.samples {
            let x = (cfg.normalizer)(&random_word(n, 12, rng));
            let again = (cfg.normalizer)(&x.to_word());
            ensure(again == x, || format!("n={n}: {x} re-normalizes to {again}"))?;
        }
    }
    Ok(())
}

fn delta_commutation(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    for n in cfg.braid_sizes() {
        let delta = CanonicalForm::delta(n).map_err(|e| e.to_string())?;
        let delta2 = CanonicalForm::delta_power(n, 2).map_err(|e| e.to_string())?;
        for _ in 0..cfg.samples {
            let x = random_braid(n, 12, rng);
            let m = |a: &CanonicalForm, b: &CanonicalForm| a.multiply(b).expect("same n");
            ensure(m(&delta, &x) == m(&x.tau(), &delta), || format!("n={n}: Δx ≠ τ(x)Δ for {x}"))?;
            ensure(m(&delta2, &x) == m(&x, &delta2), || format!("n={n}: Δ² does not commute with {x}"))?;
        }
    }
    Ok(())
}

fn tau_involution(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    for n in cfg.braid_sizes() {
        for _ in 0..cfg.samples {
            let w = random_word(n, 12, rng);
            let x = w.normalize();
            ensure(x.tau().tau() == x, || format!("n={n}: τ² ≠ id on {x}"))?;
            ensure(x.tau() == w.flipped().normalize(), || format!("n={n}: τ disagrees with σ_i ↦ σ_(n-i) on {w}"))?;
        }
    }
    Ok(())
}

fn group_laws(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    for n in cfg.braid_sizes() {
        let id = CanonicalForm::identity(n).map_err(|e| e.to_string())?;
        for _ in 0..cfg.samples {
            let [x, y, z] = [0, 0, 0].map(|_| random_braid(n, 8, rng));
            let m = |a: &CanonicalForm, b: &CanonicalForm| a.multiply(b).expect("same n");
            ensure(m(&m(&x, &y), &z) == m(&x, &m(&y, &z)), || format!("n={n}: associativity fails"))?;
            ensure(m(&x, &x.inverse()) == id && m(&x.inverse(), &x) == id, || format!("n={n}: inverse law fails for {x}"))?;
            ensure(m(&x, &id) == x && m(&id, &x) == x, || format!("n={n}: identity law fails"))?;
            let mut acc = id.clone();
            for e in 0..5 {
                ensure(x.power(e).ok() == Some(acc.clone()), || format!("n={n}: power({e}) differs from repeated product"))?;
                acc = m(&acc, &x);
            }
        }
    }
    Ok(())
}

fn torsion_freeness(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    for n in cfg.braid_sizes() {
        for _ in 0..cfg.samples {
            let x = random_braid(n, rng.random_range(1..12), rng);
            if x.is_identity() {
                continue;
            }
            for e in [2, 3] {
                ensure(!x.power(e).map_err(|e| e.to_string())?.is_identity(), || format!("n={n}: ({x})^{e} = 1"))?;
            }
        }
    }
    Ok(())
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    fn extend(prefix: &mut Vec<u16>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        if prefix.len() == used.len() {
            out.push(Permutation::from_table(prefix.clone()).expect("bijection"));
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v as u16);
                extend(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

fn permutation_bijection(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    for n in 2..=5 {
        for p in all_permutations(n) {
            let w = p.to_braid_word();
            ensure(w.permutation() == p, || format!("round trip fails for {p}"))?;
            ensure(w.len() == p.inversions(), || format!("{p} expands to a non-minimal word"))?;
        }
    }
    for &n in &cfg.sizes {
        for _ in 0..cfg.samples {
            let mut table: Vec<u16> = (0..n as u16).collect();
            for i in (1..n).rev() {
                table.swap(i, rng.random_range(0..=i));
            }
            let p = Permutation::from_table(table).map_err(|e| e.to_string())?;
            ensure(p.to_braid_word().permutation() == p, || format!("round trip fails for {p}"))?;
        }
    }
    Ok(())
}

fn brute_force_equivalence(_cfg: &SelftestConfig, _rng: &mut BraidRng) -> Result<(), String> {
    const MAX_LEN: usize = 3;
    let mut closure = RewritingClosure::build(3, MAX_LEN + 4);
    let words: Vec<BraidWord> = (0..=MAX_LEN).flat_map(|l| all_words(3, l)).collect();
    let forms: Vec<CanonicalForm> = words.iter().map(BraidWord::normalize).collect();
    for i in 0..words.len() {
        for j in i..words.len() {
            let oracle = closure.same_class(&words[i], &words[j]).expect("within bound");
            ensure(oracle == (forms[i] == forms[j]), || {
                format!("{} vs {}: oracle says {oracle}", words[i], words[j])
            })?;
        }
    }
    Ok(())
}

/// `Δ` of the lower block `σ_1 … σ_(n/2-1)` as a word in B_n.
fn lower_delta_word(n: usize) -> BraidWord {
    let mut letters = Vec::new();
    for top in (1..n / 2).rev() {
        for i in 1..=top {
            letters.push(crate::GeneratorLetter::sigma(i));
        }
    }
    BraidWord::new(n, letters).expect("indices below n")
}

fn subgroup_closure(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    for &n in &cfg.sizes {
        let sampler = cfg.sampler(n, 10);
        let fixed = SubgroupSide::Lower.fixed_positions(n);
        let lower_delta = lower_delta_word(n);
        for _ in 0..cfg.samples {
            let u = sample_subgroup_word(SubgroupSide::Lower, &sampler, rng).map_err(|e| e.to_string())?;
            let v = sample_subgroup_word(SubgroupSide::Lower, &sampler, rng).map_err(|e| e.to_string())?;
            // multiply by a central power of the block's Δ to get a positive
            // braid in the block, whose normal form in B_n is then Δ-free
            let negatives = u.letters().iter().chain(v.letters()).filter(|l| !l.is_positive()).count();
            let mut w = u.concat(&v).map_err(|e| e.to_string())?;
            for _ in 0..negatives.div_ceil(2) * 2 {
                w = w.concat(&lower_delta).map_err(|e| e.to_string())?;
            }
            let x = (cfg.normalizer)(&w);
            ensure(x.inf() >= 0 && x.factors_fix(fixed.clone()), || format!("n={n}: {x} moves the upper block"))?;
        }
    }
    Ok(())
}

fn subgroup_commutation(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    for &n in &cfg.sizes {
        let sampler = cfg.sampler(n, 12);
        for _ in 0..cfg.samples {
            let a = sample_subgroup_word(SubgroupSide::Lower, &sampler, rng).map_err(|e| e.to_string())?.normalize();
            let b = sample_subgroup_word(SubgroupSide::Upper, &sampler, rng).map_err(|e| e.to_string())?.normalize();
            ensure(a.multiply(&b).ok() == b.multiply(&a).ok(), || format!("n={n}: {a} and {b} do not commute"))?;
        }
    }
    Ok(())
}

fn sampling_determinism(cfg: &SelftestConfig, _rng: &mut BraidRng) -> Result<(), String> {
    for &n in &cfg.sizes {
        let sampler = cfg.sampler(n, 32);
        let draw = |stream: u64| {
            let mut rng = stream_rng(cfg.seed, stream);
            (0..4).map(|_| crate::sampling::sample_word(&sampler, &mut rng)).collect::<Vec<_>>()
        };
        ensure(draw(1) == draw(1), || format!("n={n}: same seed gave different words"))?;
        ensure(draw(1) != draw(2), || format!("n={n}: distinct streams coincide"))?;
    }
    Ok(())
}

fn hash_well_definedness(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    for n in cfg.braid_sizes() {
        for _ in 0..cfg.samples {
            let w = random_word(n, 12, rng);
            let v = random_rewrite(&w, 24, rng);
            let (hw, hv) = (hash_braid(&(cfg.normalizer)(&w)), hash_braid(&(cfg.normalizer)(&v)));
            ensure(hw == hv, || format!("n={n}: H differs on {w} and {v}"))?;
        }
    }
    Ok(())
}

fn serialize_round_trip(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut distinct: HashSet<CanonicalForm> = HashSet::new();
    for n in cfg.braid_sizes() {
        for _ in 0..cfg.samples {
            let x = random_braid(n, rng.random_range(0..20), rng);
            let bytes = serialize(&x).map_err(|e| e.to_string())?;
            ensure(deserialize(&bytes).ok().as_ref() == Some(&x), || format!("{x} does not round-trip"))?;
            if distinct.insert(x.clone()) {
                ensure(seen.insert(bytes), || format!("{x} collides with another encoding"))?;
            }
        }
    }
    Ok(())
}

fn golden_digests(_cfg: &SelftestConfig, _rng: &mut BraidRng) -> Result<(), String> {
    for (n, word, hex) in GOLDEN_DIGESTS {
        let x = BraidWord::parse(n, word).map_err(|e| e.to_string())?.normalize();
        let got = hash_braid(&x).to_hex();
        ensure(got == hex, || format!("H({word}) = {got}, expected {hex}"))?;
    }
    Ok(())
}

const EXPONENTS: [(u32, u32); 4] = [(2, 2), (2, 3), (3, 2), (3, 3)];

fn keys_for(scheme: SchemeId, sampler: &SamplerConfig, exps: (u32, u32), rng: &mut BraidRng) -> Result<KeyPair, String> {
    KeyPair::generate(scheme, sampler, exps, rng).map_err(|e| e.to_string())
}

fn completeness(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    for &n in &cfg.sizes {
        let sampler = cfg.sampler(n, 8);
        for scheme in [SchemeId::One, SchemeId::Two] {
            for exps in EXPONENTS {
                let keys = keys_for(scheme, &sampler, exps, rng)?;
                let session = SessionConfig::new(scheme, 2, sampler).map_err(|e| e.to_string())?;
                let seed: u64 = rng.random();
                let failures = cfg
                    .execution
                    .map(cfg.samples.div_ceil(4), |i| {
                        let mut verifier = Verifier::new(keys.public(), sampler, stream_rng(seed, i as u64)).ok()?;
                        let t = run_session(&mut HonestProver::new(keys.clone()), &mut verifier, &session).ok()?;
                        t.accepted().then_some(())
                    })
                    .into_iter()
                    .filter(Option::is_none)
                    .count();
                ensure(failures == 0, || format!("n={n} scheme {scheme} {exps:?}: {failures} honest sessions rejected"))?;
            }
        }
    }
    Ok(())
}

fn verification_identity(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    for &n in &cfg.sizes {
        let sampler = cfg.sampler(n, 8);
        for scheme in [SchemeId::One, SchemeId::Two] {
            let keys = keys_for(scheme, &sampler, (2, 3), rng)?;
            for _ in 0..cfg.samples.div_ceil(2) {
                let ch = crate::protocol::challenge(&keys.public(), &sampler, rng).map_err(|e| e.to_string())?;
                let (lhs, rhs) = match (&keys, &ch) {
                    (KeyPair::One(k), Challenge::One(c)) => {
                        (prover_braid1(k, &c.y), Ok(verifier_braid1(&k.public, &c.verifier_secret)))
                    }
                    (KeyPair::Two(k), Challenge::Two(c)) => {
                        (prover_braid2(k, &c.y), Ok(verifier_braid2(&k.public, &c.verifier_secret)))
                    }
                    _ => return Err("scheme mismatch".into()),
                };
                let lhs = lhs.map_err(|e| e.to_string())?;
                let rhs: CanonicalForm = rhs.map_err(|e: String| e)?;
                ensure(lhs == rhs, || format!("n={n} scheme {scheme}: pre-hash braids differ"))?;
            }
        }
    }
    Ok(())
}

fn simulator_exactness(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    for &n in &cfg.sizes {
        let sampler = cfg.sampler(n, 8);
        for scheme in [SchemeId::One, SchemeId::Two] {
            let keys = keys_for(scheme, &sampler, (2, 2), rng)?;
            let session = SessionConfig::new(scheme, 3, sampler).map_err(|e| e.to_string())?;
            for i in 0..cfg.samples.div_ceil(4) as u64 {
                let mut verifier = Verifier::new(keys.public(), sampler, stream_rng(cfg.seed, i)).map_err(|e| e.to_string())?;
                let real = run_session(&mut HonestProver::new(keys.clone()), &mut verifier, &session)
                    .map_err(|e| e.to_string())?;
                let sim = simulate_transcript(&keys.public(), &sampler, 3, &mut stream_rng(cfg.seed, i))
                    .map_err(|e| e.to_string())?;
                ensure(real.dump() == sim.dump(), || format!("n={n} scheme {scheme}: transcript {i} differs"))?;
            }
        }
    }
    Ok(())
}

fn challenge_freshness(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    // at n=4 each block has a single generator, so a freely reduced word of
    // length L is one of two braids and challenges must repeat
    let mut sizes: Vec<usize> = cfg.sizes.iter().copied().filter(|&n| n >= 8).collect();
    if sizes.is_empty() {
        sizes.push(8);
    }
    for n in sizes {
        let sampler = cfg.sampler(n, 32);
        for scheme in [SchemeId::One, SchemeId::Two] {
            let public = keys_for(scheme, &sampler, (2, 2), rng)?.public();
            let mut seen = HashSet::new();
            for _ in 0..cfg.samples * 2 {
                let ch = crate::protocol::challenge(&public, &sampler, rng).map_err(|e| e.to_string())?;
                ensure(seen.insert(ch.y().clone()), || format!("n={n} scheme {scheme}: challenge repeated"))?;
            }
        }
    }
    Ok(())
}

fn secret_independence(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    // verification from a public key that went through the public file
    // format, which cannot carry a secret
    for &n in &cfg.sizes {
        let sampler = cfg.sampler(n, 8);
        for scheme in [SchemeId::One, SchemeId::Two] {
            let keys = keys_for(scheme, &sampler, (3, 2), rng)?;
            let public: PublicKey = parse_public_key(&write_public_key(&keys.public())).map_err(|e| e.to_string())?;
            for _ in 0..cfg.samples.div_ceil(4) {
                let ch = crate::protocol::challenge(&public, &sampler, rng).map_err(|e| e.to_string())?;
                let z = keys.respond(ch.y()).map_err(|e| e.to_string())?;
                ensure(crate::protocol::verify(&public, &ch, &z), || format!("n={n} scheme {scheme}: rejected"))?;
            }
        }
    }
    Ok(())
}

fn planted_root(rng: &mut BraidRng) -> (CanonicalForm, u32) {
    let x = random_word(3, rng.random_range(0..=2), rng).normalize();
    let e = rng.random_range(2..=3);
    (x.power(e as i64).expect("e >= 0"), e)
}

fn root_soundness(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    let opts = SearchOptions { execution: cfg.execution, ..SearchOptions::default() };
    for _ in 0..cfg.samples {
        let (y, e) = planted_root(rng);
        let q = RootQuery::new(y.clone(), e, 2).map_err(|e| e.to_string())?;
        let out = brute_force_root_with(&q, &opts).map_err(|e| e.to_string())?;
        let root = out.root().ok_or_else(|| format!("no root found for planted {y}, e={e}"))?;
        ensure(root.power(e as i64).ok().as_ref() == Some(&y), || format!("returned {root} is not a root of {y}"))?;
    }
    Ok(())
}

fn filter_soundness(cfg: &SelftestConfig, _rng: &mut BraidRng) -> Result<(), String> {
    let unfiltered = SearchOptions { exponent_filter: false, execution: cfg.execution, ..SearchOptions::default() };
    let mut targets: Vec<CanonicalForm> = (0..=3).flat_map(|l| all_words(3, l)).map(|w| w.normalize()).collect();
    targets.sort_by_key(|x| serialize(x).unwrap_or_default());
    targets.dedup();
    for y in targets {
        for e in [2u32, 3] {
            if y.exponent_sum() % e as i64 == 0 {
                continue;
            }
            let q = RootQuery::new(y.clone(), e, 3).map_err(|e| e.to_string())?;
            let out = brute_force_root_with(&q, &unfiltered).map_err(|e| e.to_string())?;
            ensure(out.root().is_none(), || format!("filter would prune {y} (e={e}) but a root exists"))?;
        }
    }
    Ok(())
}

fn root_monotonicity(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    let opts = SearchOptions { execution: cfg.execution, ..SearchOptions::default() };
    for _ in 0..cfg.samples.div_ceil(2) {
        let (y, e) = planted_root(rng);
        let mut previous: Option<CanonicalForm> = None;
        for bound in 0..=3 {
            let q = RootQuery::new(y.clone(), e, bound).map_err(|e| e.to_string())?;
            let found = brute_force_root_with(&q, &opts).map_err(|e| e.to_string())?.root().cloned();
            if let Some(p) = &previous {
                ensure(found.as_ref() == Some(p), || format!("bound {bound} lost the root of {y}"))?;
            }
            previous = found.or(previous);
        }
    }
    Ok(())
}

fn attack_asymmetry(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    let trials = cfg.samples.min(20);
    for scheme in [SchemeId::One, SchemeId::Two] {
        let toy = SamplerConfig::new(4, 2, 1, cfg.seed).map_err(|e| e.to_string())?;
        let keys = keys_for(scheme, &toy, (2, 2), rng)?;
        let ex = ExperimentConfig { trials, rounds: 1, sampler: toy, seed: rng.random(), execution: cfg.execution };
        let report = impersonation_experiment(&keys.public(), AttackStrategy::RootAttack { bound: 2 }, &ex)
            .map_err(|e| e.to_string())?;
        ensure(report.successes == trials, || format!("toy scheme {scheme}: {}/{trials}", report.successes))?;

        let big = cfg.sampler(8, 32);
        let keys = keys_for(scheme, &big, (2, 2), rng)?;
        let ex = ExperimentConfig { sampler: big, ..ex };
        let report = impersonation_experiment(&keys.public(), AttackStrategy::RootAttack { bound: 3 }, &ex)
            .map_err(|e| e.to_string())?;
        ensure(report.successes == 0, || format!("n=8 scheme {scheme}: {}/{trials}", report.successes))?;
    }
    Ok(())
}

fn wire_round_trip(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    let n = cfg.sizes[0];
    for scheme in [SchemeId::One, SchemeId::Two] {
        let keys = keys_for(scheme, &cfg.sampler(n, 8), (2, 3), rng)?;
        let server_cfg = ServerConfig::new(scheme, 3, 8, SamplerConfig::TEST_MIN_CANONICAL_LENGTH, cfg.seed)
            .map_err(|e| e.to_string())?;
        let listener = TcpListener::bind("127.0.0.1:0").map_err(|e| e.to_string())?;
        let addr = listener.local_addr().map_err(|e| e.to_string())?;
        let server = thread::spawn(move || {
            let (stream, _) = listener.accept().map_err(|e| e.to_string())?;
            net::serve_tcp_connection(stream, &server_cfg, 0).map_err(|e| e.to_string())
        });
        let outcome = net::prove_tcp(addr, &keys).map_err(|e| e.to_string())?;
        let transcript = server.join().map_err(|_| "server thread panicked".to_string())??;
        ensure(outcome.accepted() && transcript.accepted(), || format!("scheme {scheme}: honest session rejected"))?;
        for r in &transcript.rounds {
            let bytes = serialize(&r.challenge).map_err(|e| e.to_string())?;
            ensure(deserialize(&bytes).ok().as_ref() == Some(&r.challenge), || "challenge does not round-trip".into())?;
            ensure(keys.respond(&r.challenge).map(|z| z.z) == Ok(r.response), || "response altered in transit".into())?;
        }
        let hello = encode_hello(&keys.public()).map_err(|e| e.to_string())?;
        ensure(net::decode_hello(&hello).ok() == Some(keys.public()), || "HELLO does not round-trip".into())?;
    }
    Ok(())
}

fn framing_robustness(cfg: &SelftestConfig, rng: &mut BraidRng) -> Result<(), String> {
    let n = cfg.sizes[0];
    let keys = keys_for(SchemeId::One, &cfg.sampler(n, 8), (2, 2), rng)?;
    let hello = encode_hello(&keys.public()).map_err(|e| e.to_string())?;
    let server_cfg =
        ServerConfig::new(SchemeId::One, 2, 8, SamplerConfig::TEST_MIN_CANONICAL_LENGTH, 0).map_err(|e| e.to_string())?;
    for _ in 0..cfg.samples * 10 {
        net::check_server_survives(&net::fuzz_case(rng, &hello), &server_cfg)?;
    }
    Ok(())
}

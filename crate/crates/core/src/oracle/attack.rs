//! Impersonation experiments: a prover without the secret key tries to get
//! sessions accepted.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::root::{SearchOptions, WordSpace};
use crate::braid::{BraidWord, CanonicalForm};
use crate::exec::Execution;
use crate::hash::{hash_braid, Digest};
use crate::protocol::{
    run_session, simulate_transcript, HonestProver, KeyPair, ProtocolError, Prover, PublicKey, SchemeIIKeys,
    SchemeIKeys, SchemeId, SessionConfig, TransportError, Verifier,
};
use crate::sampling::{stream_rng, BraidRng, SamplerConfig, SubgroupSide};

/// How many honest rounds the replay attacker gets to observe.
pub const REPLAY_OBSERVATIONS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttackStrategy {
    /// Uniform 32 random bytes per round.
    RandomDigest,
    /// Answer with an eavesdropped `Z`, looked up by `Y` when possible.
    Replay,
    /// Search the secret-key subgroup(s) for words of length `<= bound`
    /// reproducing `X`, then play honestly with what was found.
    RootAttack { bound: usize },
}

impl AttackStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            AttackStrategy::RandomDigest => "random-digest",
            AttackStrategy::Replay => "replay",
            AttackStrategy::RootAttack { .. } => "root-attack",
        }
    }
}

impl fmt::Display for AttackStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttackStrategy::RootAttack { bound } => write!(f, "root-attack({bound})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for AttackStrategy {
    type Err = String;

    /// Accepts `random`, `random-digest`, `replay`, `root`, `root-attack`,
    /// and `root:<bound>` / `root-attack(<bound>)`. A bare `root` uses
    /// bound 2.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "random" | "random-digest" => return Ok(AttackStrategy::RandomDigest),
            "replay" => return Ok(AttackStrategy::Replay),
            "root" | "root-attack" => return Ok(AttackStrategy::RootAttack { bound: 2 }),
            _ => {}
        }
        let bound = s
            .strip_prefix("root:")
            .or_else(|| s.strip_prefix("root-attack(").and_then(|r| r.strip_suffix(')')))
            .ok_or_else(|| format!("unknown strategy {s:?}"))?;
        bound.parse().map(|bound| AttackStrategy::RootAttack { bound }).map_err(|_| format!("bad bound in {s:?}"))
    }
}

/// Experiment parameters. Trial `t` uses verifier coins from
/// `stream_rng(seed, 2t)` and attacker coins from `stream_rng(seed, 2t + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub trials: usize,
    pub rounds: usize,
    pub sampler: SamplerConfig,
    pub seed: u64,
    pub execution: Execution,
}

/// Outcome of an impersonation experiment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackReport {
    pub strategy: AttackStrategy,
    pub scheme: SchemeId,
    pub trials: usize,
    pub successes: usize,
    pub rounds: usize,
    pub parameters: SamplerConfig,
    /// For the root attack: whether a working key was found.
    pub key_recovered: Option<bool>,
}

impl AttackReport {
    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    pub const TABLE_HEADER: &'static str = "strategy          scheme  trials  successes  rate";

    /// Fixed-column row matching [`Self::TABLE_HEADER`].
    pub fn table_row(&self) -> String {
        format!(
            "{:<16}  {:>6}  {:>6}  {:>9}  {:.4}",
            self.strategy.to_string(),
            self.scheme.to_string(),
            self.trials,
            self.successes,
            self.rate()
        )
    }

    /// `key=value` lines.
    pub fn to_key_values(&self) -> String {
        let mut out = format!(
            "strategy={}\nscheme={}\ntrials={}\nsuccesses={}\nrate={:.6}\nrounds={}\nn={}\nword_length={}\nmin_canonical_length={}\nseed={}\n",
            self.strategy,
            self.scheme,
            self.trials,
            self.successes,
            self.rate(),
            self.rounds,
            self.parameters.n(),
            self.parameters.word_length(),
            self.parameters.min_canonical_length(),
            self.parameters.seed(),
        );
        if let Some(found) = self.key_recovered {
            out.push_str(&format!("key_recovered={}\n", u8::from(found)));
        }
        out
    }
}

impl fmt::Display for AttackReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", Self::TABLE_HEADER)?;
        write!(f, "{}", self.table_row())
    }
}

/// Scheme I key recovery by meet-in-the-middle: tabulate `X · (b'^s)⁻¹` for
/// every upper-block word `b'` of length `<= bound`, then look up `a'^r` for
/// lower-block words `a'`. Any hit gives a key that answers every challenge
/// correctly, since `a'` and `b'` still commute with the verifier's values.
///
/// `None` when nothing is found or the word count exceeds `opts.budget`.
pub fn recover_scheme1(public: &crate::protocol::SchemeIPublic, bound: usize, opts: &SearchOptions) -> Option<SchemeIKeys> {
    let n = public.n;
    let lower = WordSpace::side(n, SubgroupSide::Lower).ok()?;
    let upper = WordSpace::side(n, SubgroupSide::Upper).ok()?;
    if lower.count_up_to(bound).saturating_add(upper.count_up_to(bound)) > opts.budget {
        return None;
    }
    let (r, s) = (public.r as i64, public.s_exp as i64);
    let mut table: HashMap<Digest, BraidWord> = HashMap::new();
    for len in 0..=bound {
        let rows = upper.collect(len, opts.execution, &|word, b| {
            let rest = public.x.multiply(&b.power(s).ok()?.inverse()).ok()?;
            Some((hash_braid(&rest), word.clone()))
        });
        for (digest, word) in rows {
            table.entry(digest).or_insert(word);
        }
    }
    for len in 0..=bound {
        let hit = lower.find_first(len, opts.execution, &|_, a| {
            let b_word = table.get(&hash_braid(&a.power(r).ok()?))?;
            let keys = SchemeIKeys::from_secret(public.r, public.s_exp, a.clone(), b_word.normalize()).ok()?;
            (keys.public == *public).then_some(keys)
        });
        if hit.is_some() {
            return hit;
        }
    }
    None
}

/// Scheme II key recovery: lower-block words `a'` of length `<= bound` with
/// `a'^e · base · a'^f = X`, prefiltered by exponent sum.
pub fn recover_scheme2(public: &crate::protocol::SchemeIIPublic, bound: usize, opts: &SearchOptions) -> Option<SchemeIIKeys> {
    let lower = WordSpace::side(public.n, SubgroupSide::Lower).ok()?;
    if lower.count_up_to(bound) > opts.budget {
        return None;
    }
    let total = (public.e + public.f) as i64;
    let target = public.x.exponent_sum() - public.base.exponent_sum();
    if opts.exponent_filter && target % total != 0 {
        return None;
    }
    for len in 0..=bound {
        let hit = lower.find_first(len, opts.execution, &|word, a| {
            if opts.exponent_filter && word.exponent_sum() * total != target {
                return None;
            }
            let keys = SchemeIIKeys::from_secret(public.e, public.f, public.base.clone(), a.clone()).ok()?;
            (keys.public == *public).then_some(keys)
        });
        if hit.is_some() {
            return hit;
        }
    }
    None
}

/// Runs the root attack's key search against either scheme.
pub fn recover_key(public: &PublicKey, bound: usize, opts: &SearchOptions) -> Option<KeyPair> {
    match public {
        PublicKey::One(p) => recover_scheme1(p, bound, opts).map(KeyPair::One),
        PublicKey::Two(p) => recover_scheme2(p, bound, opts).map(KeyPair::Two),
    }
}

struct RandomDigestProver {
    rng: BraidRng,
}

impl Prover for RandomDigestProver {
    fn respond(&mut self, _round: usize, _: &CanonicalForm) -> Result<Digest, TransportError> {
        Ok(Digest(self.rng.random()))
    }
}

struct ReplayProver<'a> {
    seen: &'a HashMap<CanonicalForm, Digest>,
    fallback: Digest,
}

impl Prover for ReplayProver<'_> {
    fn respond(&mut self, _round: usize, y: &CanonicalForm) -> Result<Digest, TransportError> {
        Ok(self.seen.get(y).copied().unwrap_or(self.fallback))
    }
}

/// Plays `cfg.trials` sessions of `cfg.rounds` rounds each against an honest
/// verifier holding `public`, with the prover role taken by `strategy`, and
/// counts accepted sessions. The outcome does not depend on
/// `cfg.execution`.
pub fn impersonation_experiment(
    public: &PublicKey,
    strategy: AttackStrategy,
    cfg: &ExperimentConfig,
) -> Result<AttackReport, ProtocolError> {
    let session = SessionConfig::new(public.scheme(), cfg.rounds, cfg.sampler)?;
    Verifier::new(public.clone(), cfg.sampler, stream_rng(cfg.seed, 0))?;

    let mut key_recovered = None;
    let mut recovered = None;
    let mut seen = HashMap::new();
    let mut fallback = Digest([0; 32]);
    match strategy {
        AttackStrategy::RandomDigest => {}
        AttackStrategy::Replay => {
            // a passive eavesdropper's view has the simulator's distribution
            let mut rng = stream_rng(cfg.seed ^ 0x005e_ed0f_ea5e_d409, u64::MAX);
            let observed = simulate_transcript(public, &cfg.sampler, REPLAY_OBSERVATIONS, &mut rng)?;
            for r in &observed.rounds {
                seen.insert(r.challenge.clone(), r.response);
                fallback = r.response;
            }
        }
        AttackStrategy::RootAttack { bound } => {
            let opts = SearchOptions { execution: cfg.execution, ..SearchOptions::default() };
            recovered = recover_key(public, bound, &opts);
            key_recovered = Some(recovered.is_some());
        }
    }

    let outcomes = cfg.execution.map(cfg.trials, |t| -> Result<bool, ProtocolError> {
        let mut verifier = Verifier::new(public.clone(), cfg.sampler, stream_rng(cfg.seed, 2 * t as u64))?;
        let attacker_rng = stream_rng(cfg.seed, 2 * t as u64 + 1);
        let mut prover: Box<dyn Prover> = match (&strategy, &recovered) {
            (AttackStrategy::RootAttack { .. }, Some(keys)) => Box::new(HonestProver::new(keys.clone())),
            (AttackStrategy::Replay, _) => Box::new(ReplayProver { seen: &seen, fallback }),
            _ => Box::new(RandomDigestProver { rng: attacker_rng }),
        };
        match run_session(prover.as_mut(), &mut verifier, &session) {
            Ok(t) => Ok(t.accepted()),
            Err(crate::protocol::SessionError::Protocol(e)) => Err(e),
            Err(crate::protocol::SessionError::Aborted { .. }) => Ok(false),
        }
    });
    let mut successes = 0;
    for o in outcomes {
        successes += usize::from(o?);
    }
    Ok(AttackReport {
        strategy,
        scheme: public.scheme(),
        trials: cfg.trials,
        successes,
        rounds: cfg.rounds,
        parameters: cfg.sampler,
        key_recovered,
    })
}

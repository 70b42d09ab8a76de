use std::fmt;

use rand::Rng;
use thiserror::Error;

use super::keys::{challenge, expected_digest, verify, KeyPair, PublicKey, Response};
use super::{ProtocolError, SchemeId};
use crate::braid::CanonicalForm;
use crate::hash::{serialize, Digest};
use crate::sampling::SamplerConfig;

/// Failure of the channel between verifier and prover.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct TransportError(pub String);

/// The prover role as seen by the verifier: something that turns a
/// challenge into a digest. Implemented by the honest prover, by remote
/// provers behind a socket, and by the impersonation strategies.
pub trait Prover {
    fn respond(&mut self, round: usize, challenge: &CanonicalForm) -> Result<Digest, TransportError>;
}

/// The honest prover holding a key pair.
#[derive(Debug, Clone)]
pub struct HonestProver {
    keys: KeyPair,
}

impl HonestProver {
    pub fn new(keys: KeyPair) -> Self {
        Self { keys }
    }

    pub fn keys(&self) -> &KeyPair {
        &self.keys
    }
}

impl Prover for HonestProver {
    fn respond(&mut self, _round: usize, challenge: &CanonicalForm) -> Result<Digest, TransportError> {
        self.keys.respond(challenge).map(|r| r.z).map_err(|e| TransportError(e.to_string()))
    }
}

/// Session parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SessionConfig {
    pub scheme: SchemeId,
    pub rounds: usize,
    pub sampler: SamplerConfig,
}

impl SessionConfig {
    pub fn new(scheme: SchemeId, rounds: usize, sampler: SamplerConfig) -> Result<Self, ProtocolError> {
        if rounds == 0 {
            return Err(ProtocolError::InvalidParameter("rounds must be >= 1".into()));
        }
        Ok(Self { scheme, rounds, sampler })
    }
}

/// The verifier: a public key plus a private coin stream for challenges.
/// Per-round verifier values live only for the duration of the round.
pub struct Verifier<R> {
    public: PublicKey,
    sampler: SamplerConfig,
    rng: R,
}

impl<R: Rng> Verifier<R> {
    pub fn new(public: PublicKey, sampler: SamplerConfig, rng: R) -> Result<Self, ProtocolError> {
        if sampler.n() != public.n() {
            return Err(ProtocolError::InvalidParameter(format!(
                "sampler is configured for {} strands, key has {}",
                sampler.n(),
                public.n()
            )));
        }
        Ok(Self { public, sampler, rng })
    }

    pub fn public(&self) -> &PublicKey {
        &self.public
    }

    pub fn challenge(&mut self) -> Result<super::Challenge, ProtocolError> {
        challenge(&self.public, &self.sampler, &mut self.rng)
    }

    pub fn check(&self, challenge: &super::Challenge, z: &Digest) -> bool {
        verify(&self.public, challenge, &Response { z: *z })
    }
}

/// One challenge/response exchange.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub challenge: CanonicalForm,
    pub response: Digest,
    pub accepted: bool,
}

/// The observable record of a session.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Transcript {
    pub rounds: Vec<RoundRecord>,
}

impl Transcript {
    /// Accepted iff there was at least one round and every round verified.
    pub fn accepted(&self) -> bool {
        !self.rounds.is_empty() && self.rounds.iter().all(|r| r.accepted)
    }

    /// One line per round: `Y=<hex> Z=<hex> verdict=<0|1>`.
    pub fn dump(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rounds {
            let y = serialize(&r.challenge).map_err(|_| fmt::Error)?;
            writeln!(f, "Y={} Z={} verdict={}", hex::encode(y), r.response, u8::from(r.accepted))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error("session aborted in round {round}: {reason}")]
    Aborted { round: usize, reason: TransportError },
}

/// Runs `cfg.rounds` rounds of challenge → response → verify. Every round is
/// played; the session is accepted iff all of them verify.
pub fn run_session<P, R>(
    prover: &mut P,
    verifier: &mut Verifier<R>,
    cfg: &SessionConfig,
) -> Result<Transcript, SessionError>
where
    P: Prover + ?Sized,
    R: Rng,
{
    if cfg.rounds == 0 {
        return Err(ProtocolError::InvalidParameter("rounds must be >= 1".into()).into());
    }
    if cfg.scheme != verifier.public.scheme() {
        return Err(ProtocolError::SchemeMismatch.into());
    }
    let mut transcript = Transcript::default();
    for round in 0..cfg.rounds {
        let challenge = verifier.challenge()?;
        let z = prover
            .respond(round, challenge.y())
            .map_err(|reason| SessionError::Aborted { round, reason })?;
        let accepted = verifier.check(&challenge, &z);
        transcript.rounds.push(RoundRecord { challenge: challenge.y().clone(), response: z, accepted });
    }
    Ok(transcript)
}

/// Produces a transcript from public data alone: draws the verifier's values
/// exactly as [`Verifier::challenge`] does and outputs `(Y, H(c^r X d^s))`
/// (or `(Y, H(b^e X b^f))`). No secret key is an input.
pub fn simulate_transcript<R: Rng + ?Sized>(
    public: &PublicKey,
    sampler: &SamplerConfig,
    rounds: usize,
    rng: &mut R,
) -> Result<Transcript, ProtocolError> {
    if rounds == 0 {
        return Err(ProtocolError::InvalidParameter("rounds must be >= 1".into()));
    }
    let mut transcript = Transcript::default();
    for _ in 0..rounds {
        let ch = challenge(public, sampler, rng)?;
        let z = expected_digest(public, &ch)?;
        transcript.rounds.push(RoundRecord { challenge: ch.y().clone(), response: z, accepted: true });
    }
    Ok(transcript)
}

//! The two root-problem identification schemes.
//!
//! Scheme I: the prover holds `a ∈ LB_n`, `b ∈ UB_n` and publishes
//! `X = a^r b^s`. The verifier challenges with `Y = c^r d^s` for fresh
//! `c ∈ UB_n`, `d ∈ LB_n` and accepts `Z = H(a^r Y b^s)` iff it equals
//! `H(c^r X d^s)`.
//!
//! Scheme II: the prover holds `a ∈ LB_n` and publishes a base braid and
//! `X = a^e · base · a^f`. The verifier challenges with
//! `Y = b^e · base · b^f` for fresh `b ∈ UB_n` and accepts `Z = H(a^e Y a^f)`
//! iff it equals `H(b^e X b^f)`.
//!
//! Both work because every element of `LB_n` commutes with every element of
//! `UB_n`.

mod format;
mod keys;
mod session;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::error::BraidError;

pub use format::{
    assemble_key_pair, parse_public_key, parse_secret_key, write_public_key, write_secret_key, SecretKey,
};
pub use keys::{
    challenge, challenge1, challenge2, expected_digest, keygen1, keygen2, prover_braid1, prover_braid2, respond1,
    respond2, verifier_braid1, verifier_braid2, verify, verify1, verify2, Challenge, ChallengeI, ChallengeII,
    KeyPair, PublicKey, Response, SchemeIIKeys, SchemeIIPublic, SchemeIISecret, SchemeIKeys, SchemeIPublic,
    SchemeISecret, VerifierSecretI, VerifierSecretII,
};
pub use session::{
    run_session, simulate_transcript, HonestProver, Prover, RoundRecord, SessionConfig, SessionError, Transcript,
    TransportError, Verifier,
};

/// Which scheme a key or session belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    One = 1,
    Two = 2,
}

impl SchemeId {
    pub fn as_byte(self) -> u8 {
        self as u8
    }

    pub fn from_byte(b: u8) -> Option<SchemeId> {
        match b {
            1 => Some(SchemeId::One),
            2 => Some(SchemeId::Two),
            _ => None,
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_byte())
    }
}

impl FromStr for SchemeId {
    type Err = ProtocolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "1" => Ok(SchemeId::One),
            "2" => Ok(SchemeId::Two),
            other => Err(ProtocolError::InvalidParameter(format!("scheme must be 1 or 2, got {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("sampling failure: no hard {0} after {n} attempts", n = crate::sampling::MAX_HARDNESS_REJECTIONS)]
    SamplingFailure(&'static str),
    #[error("scheme mismatch")]
    SchemeMismatch,
    #[error("key file: {0}")]
    KeyFormat(String),
}

//! Bit-exact serialization of canonical forms and the hash `H` on B_n.
//!
//! Layout (all integers big-endian):
//!
//! ```text
//! "BCF1" | n: u16 | inf: i32 | l: u32 | l × (n × u16 table entries)
//! ```
//!
//! The same encoding is used for key files and for every braid on the wire.

use std::fmt;

use sha2::{Digest as _, Sha256};
use thiserror::Error;

use crate::braid::{CanonicalForm, Permutation, MAX_STRANDS};

pub const MAGIC: &[u8; 4] = b"BCF1";
const HEADER_LEN: usize = 4 + 2 + 4 + 4;

/// Parse and encode failures. Each variant has a stable numeric code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("bad magic")]
    BadMagic,
    #[error("truncated input: need {needed} bytes, have {available}")]
    Truncated { needed: usize, available: usize },
    #[error("strand count {0} out of range")]
    BadStrandCount(usize),
    #[error("factor {0} is not a bijection")]
    NonBijective(usize),
    #[error("factors are not in left canonical form: {0}")]
    NotCanonical(String),
    #[error("{0} trailing bytes")]
    TrailingBytes(usize),
    #[error("inf {0} does not fit in 32 bits")]
    Overflow(i64),
}

impl CodecError {
    pub fn code(&self) -> u8 {
        match self {
            CodecError::BadMagic => 1,
            CodecError::Truncated { .. } => 2,
            CodecError::BadStrandCount(_) => 3,
            CodecError::NonBijective(_) => 4,
            CodecError::NotCanonical(_) => 5,
            CodecError::TrailingBytes(_) => 6,
            CodecError::Overflow(_) => 7,
        }
    }
}

pub fn serialize(x: &CanonicalForm) -> Result<Vec<u8>, CodecError> {
    let inf = i32::try_from(x.inf()).map_err(|_| CodecError::Overflow(x.inf()))?;
    let n = x.strands();
    let mut out = Vec::with_capacity(HEADER_LEN + 2 * n * x.canonical_length());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(n as u16).to_be_bytes());
    out.extend_from_slice(&inf.to_be_bytes());
    out.extend_from_slice(&(x.canonical_length() as u32).to_be_bytes());
    for f in x.factors() {
        for &v in f.table() {
            out.extend_from_slice(&v.to_be_bytes());
        }
    }
    Ok(out)
}

/// Decodes exactly one canonical form; trailing bytes are an error.
pub fn deserialize(bytes: &[u8]) -> Result<CanonicalForm, CodecError> {
    let (x, used) = deserialize_prefix(bytes)?;
    if used != bytes.len() {
        return Err(CodecError::TrailingBytes(bytes.len() - used));
    }
    Ok(x)
}

/// Decodes one canonical form from the front of `bytes`, returning it with
/// the number of bytes consumed.
pub fn deserialize_prefix(bytes: &[u8]) -> Result<(CanonicalForm, usize), CodecError> {
    let need = |needed: usize| {
        if bytes.len() < needed {
            Err(CodecError::Truncated { needed, available: bytes.len() })
        } else {
            Ok(())
        }
    };
    need(4)?;
    if &bytes[..4] != MAGIC {
        return Err(CodecError::BadMagic);
    }
    need(HEADER_LEN)?;
    let n = u16::from_be_bytes([bytes[4], bytes[5]]) as usize;
    if !(2..=MAX_STRANDS).contains(&n) {
        return Err(CodecError::BadStrandCount(n));
    }
    let inf = i32::from_be_bytes(bytes[6..10].try_into().expect("4 bytes")) as i64;
    let l = u32::from_be_bytes(bytes[10..14].try_into().expect("4 bytes")) as usize;
    let total = l
        .checked_mul(2 * n)
        .and_then(|body| body.checked_add(HEADER_LEN))
        .ok_or(CodecError::Truncated { needed: usize::MAX, available: bytes.len() })?;
    need(total)?;
    let mut factors = Vec::with_capacity(l);
    for (k, chunk) in bytes[HEADER_LEN..total].chunks_exact(2 * n).enumerate() {
        let table = chunk.chunks_exact(2).map(|b| u16::from_be_bytes([b[0], b[1]])).collect();
        factors.push(Permutation::from_table(table).map_err(|_| CodecError::NonBijective(k))?);
    }
    let x = CanonicalForm::from_parts(n, inf, factors).map_err(|e| CodecError::NotCanonical(e.to_string()))?;
    Ok((x, total))
}

/// A 32-byte SHA-256 digest.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest(pub [u8; 32]);

impl Digest {
    pub const LEN: usize = 32;

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn from_slice(bytes: &[u8]) -> Option<Digest> {
        bytes.try_into().ok().map(Digest)
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({})", self.to_hex())
    }
}

/// Fixed `(n, word, SHA-256 of the serialized normal form)` triples. The
/// digests were computed from hand-assembled encodings, not by this crate.
pub const GOLDEN_DIGESTS: [(usize, &str, &str); 5] = [
    (3, "", "aab89d64c8a47494b59948b78b8268ee02345b8905eee69c3122ce0023a22948"),
    (3, "s1", "b8f8c41053bca2c2092ee64825462b6a49d3bd8cd0f8fceb3beb74f3a95e7b3e"),
    (3, "S1", "16a2e8a1de540e2cf69fceed7059b92f899f84544d3c09dc7a66351c156da7bd"),
    (3, "s1 s1", "e96ab50d0afa4bdae8731442fffe6198035f05bdfd85a4afa8d779f6459b9fc8"),
    (4, "s1 s2 s3 s1 s2 s1", "71c7004b074bd8cfa020b9e641ce597d57bb8275642260c96e4e44e4b76f8d35"),
];

/// `H(x) = SHA-256(serialize(x))`. Equal braids hash equal because the
/// serialization consumes the unique canonical form.
///
/// Panics only if `inf` leaves the 32-bit range, which no protocol
/// computation at supported sizes reaches.
pub fn hash_braid(x: &CanonicalForm) -> Digest {
    let bytes = serialize(x).expect("inf fits in 32 bits");
    Digest(Sha256::digest(&bytes).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::BraidWord;

    #[test]
    fn golden_digests() {
        for (n, word, hex) in GOLDEN_DIGESTS {
            let x = BraidWord::parse(n, word).unwrap().normalize();
            assert_eq!(hash_braid(&x).to_hex(), hex, "{word}");
        }
    }

    #[test]
    fn identity_encoding() {
        let id = CanonicalForm::identity(3).unwrap();
        assert_eq!(hex::encode(serialize(&id).unwrap()), "4243463100030000000000000000");
        let d = CanonicalForm::delta(3).unwrap();
        assert_eq!(hex::encode(serialize(&d).unwrap()), "4243463100030000000100000000");
        assert_eq!(deserialize(&serialize(&id).unwrap()).unwrap(), id);
    }

    #[test]
    fn overflow_is_reported() {
        let big = CanonicalForm::delta_power(3, 1 << 31).unwrap();
        assert_eq!(serialize(&big), Err(CodecError::Overflow(1 << 31)));
        let low = CanonicalForm::delta_power(3, -(1 << 31)).unwrap();
        assert!(serialize(&low).is_ok());
    }

    #[test]
    fn parse_errors_are_distinct() {
        let mut bytes = serialize(&BraidWord::parse(3, "s1 s1").unwrap().normalize()).unwrap();
        assert_eq!(deserialize(b"XCF1").unwrap_err().code(), 1);
        assert_eq!(deserialize(&bytes[..bytes.len() - 1]).unwrap_err().code(), 2);
        let mut extra = bytes.clone();
        extra.push(0);
        assert_eq!(deserialize(&extra).unwrap_err().code(), 6);
        // first factor table [1,0,2] → [0,0,2]
        bytes[14..16].copy_from_slice(&0u16.to_be_bytes());
        assert_eq!(deserialize(&bytes).unwrap_err().code(), 4);

        // σ1 followed by σ2 is not left-weighted
        let mut bad = b"BCF1".to_vec();
        bad.extend_from_slice(&[0, 3, 0, 0, 0, 0, 0, 0, 0, 2]);
        for v in [1u16, 0, 2, 0, 2, 1] {
            bad.extend_from_slice(&v.to_be_bytes());
        }
        assert_eq!(deserialize(&bad).unwrap_err().code(), 5);

        let mut tiny = b"BCF1".to_vec();
        tiny.extend_from_slice(&[0, 1, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(deserialize(&tiny).unwrap_err().code(), 3);
    }

    #[test]
    fn hash_respects_group_equality() {
        let a = BraidWord::parse(3, "s1 s2 s1").unwrap().normalize();
        let b = BraidWord::parse(3, "s2 s1 s2").unwrap().normalize();
        assert_eq!(hash_braid(&a), hash_braid(&b));
        let s1 = BraidWord::parse(3, "s1").unwrap().normalize();
        let s2 = BraidWord::parse(3, "s2").unwrap().normalize();
        assert_ne!(hash_braid(&s1), hash_braid(&s2));
    }
}

//! Payload codecs for HELLO and VERDICT.

use thiserror::Error;

use crate::braid::CanonicalForm;
use crate::hash::{deserialize, deserialize_prefix, serialize, CodecError};
use crate::protocol::{PublicKey, SchemeIIPublic, SchemeIPublic, SchemeId};

/// Strand counts above this are refused in HELLO.
pub const MAX_HELLO_STRANDS: usize = 256;
/// Exponents above this are refused in HELLO; they would only make the
/// verifier burn time on huge powers.
pub const MAX_HELLO_EXPONENT: u32 = 64;
/// Bound on `|inf|` of braids in HELLO, keeping every derived braid inside
/// the 32-bit `inf` field of the wire encoding.
pub const MAX_HELLO_INF: i64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HelloError {
    #[error("empty payload")]
    Empty,
    #[error("unknown scheme byte {0}")]
    UnknownScheme(u8),
    #[error("truncated header")]
    Truncated,
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("bad braid: {0}")]
    Braid(#[from] CodecError),
}

/// `scheme ‖ n: u16 ‖ exponents: 2 × u32 ‖ serialize(X) ‖ [serialize(base)]`,
/// big-endian.
pub fn encode_hello(public: &PublicKey) -> Result<Vec<u8>, CodecError> {
    let (e1, e2) = public.exponents();
    let mut out = vec![public.scheme().as_byte()];
    out.extend_from_slice(&(public.n() as u16).to_be_bytes());
    out.extend_from_slice(&e1.to_be_bytes());
    out.extend_from_slice(&e2.to_be_bytes());
    out.extend_from_slice(&serialize(public.x())?);
    if let Some(base) = public.base() {
        out.extend_from_slice(&serialize(base)?);
    }
    Ok(out)
}

fn check_braid(what: &str, n: usize, x: &CanonicalForm) -> Result<(), HelloError> {
    if x.strands() != n {
        return Err(HelloError::Unsupported(format!("{what} has {} strands, header says {n}", x.strands())));
    }
    if x.inf().abs() > MAX_HELLO_INF {
        return Err(HelloError::Unsupported(format!("{what} has inf {}", x.inf())));
    }
    Ok(())
}

pub fn decode_hello(payload: &[u8]) -> Result<PublicKey, HelloError> {
    let (&scheme_byte, rest) = payload.split_first().ok_or(HelloError::Empty)?;
    let scheme = SchemeId::from_byte(scheme_byte).ok_or(HelloError::UnknownScheme(scheme_byte))?;
    if rest.len() < 10 {
        return Err(HelloError::Truncated);
    }
    let n = u16::from_be_bytes([rest[0], rest[1]]) as usize;
    let e1 = u32::from_be_bytes(rest[2..6].try_into().expect("4 bytes"));
    let e2 = u32::from_be_bytes(rest[6..10].try_into().expect("4 bytes"));
    if n < 4 || !n.is_multiple_of(2) || n > MAX_HELLO_STRANDS {
        return Err(HelloError::Unsupported(format!("n = {n}")));
    }
    for e in [e1, e2] {
        if !(2..=MAX_HELLO_EXPONENT).contains(&e) {
            return Err(HelloError::Unsupported(format!("exponent {e}")));
        }
    }
    let braids = &rest[10..];
    Ok(match scheme {
        SchemeId::One => {
            let x = deserialize(braids)?;
            check_braid("X", n, &x)?;
            PublicKey::One(SchemeIPublic { n, r: e1, s_exp: e2, x })
        }
        SchemeId::Two => {
            let (x, used) = deserialize_prefix(braids)?;
            let base = deserialize(&braids[used..])?;
            check_braid("X", n, &x)?;
            check_braid("base", n, &base)?;
            PublicKey::Two(SchemeIIPublic { n, e: e1, f: e2, base, x })
        }
    })
}

/// `accept: u8 ‖ round: u16 BE` (rounds numbered from 0).
pub fn encode_verdict(accept: bool, round: u16) -> [u8; 3] {
    let r = round.to_be_bytes();
    [u8::from(accept), r[0], r[1]]
}

pub fn decode_verdict(payload: &[u8]) -> Option<(bool, u16)> {
    match payload {
        [a @ (0 | 1), hi, lo] => Some((*a == 1, u16::from_be_bytes([*hi, *lo]))),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::KeyPair;
    use crate::sampling::{rng_from_seed, SamplerConfig};

    #[test]
    fn hello_round_trips_for_both_schemes() {
        let sampler = SamplerConfig::new(8, 12, 2, 0).unwrap();
        for scheme in [SchemeId::One, SchemeId::Two] {
            let keys = KeyPair::generate(scheme, &sampler, (2, 3), &mut rng_from_seed(4)).unwrap();
            let public = keys.public();
            let bytes = encode_hello(&public).unwrap();
            assert_eq!(bytes[0], scheme.as_byte());
            assert_eq!(&bytes[1..3], &[0, 8]);
            assert_eq!(&bytes[3..11], &[0, 0, 0, 2, 0, 0, 0, 3]);
            assert_eq!(decode_hello(&bytes).unwrap(), public);
            for cut in 0..bytes.len() {
                assert!(decode_hello(&bytes[..cut]).is_err());
            }
        }
    }

    #[test]
    fn hello_limits() {
        let sampler = SamplerConfig::new(4, 4, 1, 0).unwrap();
        let keys = KeyPair::generate(SchemeId::One, &sampler, (2, 2), &mut rng_from_seed(1)).unwrap();
        let mut bytes = encode_hello(&keys.public()).unwrap();
        bytes[6] = 1; // r = 1
        assert!(matches!(decode_hello(&bytes), Err(HelloError::Unsupported(_))));
        bytes[6] = 2;
        bytes[2] = 6; // n disagrees with X
        assert!(matches!(decode_hello(&bytes), Err(HelloError::Unsupported(_))));
        bytes[0] = 7;
        assert_eq!(decode_hello(&bytes), Err(HelloError::UnknownScheme(7)));
    }

    #[test]
    fn verdict_codec() {
        assert_eq!(encode_verdict(true, 258), [1, 1, 2]);
        assert_eq!(decode_verdict(&[0, 0, 5]), Some((false, 5)));
        assert_eq!(decode_verdict(&[2, 0, 5]), None);
        assert_eq!(decode_verdict(&[1, 0]), None);
    }
}

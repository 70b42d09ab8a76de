//! Line-based key files: `field = value`, one field per line. Scalars are
//! decimal; braids are the lowercase hex of their canonical serialization.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::keys::{KeyPair, PublicKey, SchemeIIKeys, SchemeIIPublic, SchemeIISecret, SchemeIKeys, SchemeIPublic, SchemeISecret};
use super::{ProtocolError, SchemeId};
use crate::braid::CanonicalForm;
use crate::hash::{deserialize, serialize};

fn braid_hex(x: &CanonicalForm) -> String {
    hex::encode(serialize(x).expect("key braids fit the encoding"))
}

pub fn write_public_key(public: &PublicKey) -> String {
    let mut out = String::new();
    match public {
        PublicKey::One(p) => {
            let _ = writeln!(out, "scheme = 1\nn = {}\nr = {}\ns = {}", p.n, p.r, p.s_exp);
            let _ = writeln!(out, "X = {}", braid_hex(&p.x));
        }
        PublicKey::Two(p) => {
            let _ = writeln!(out, "scheme = 2\nn = {}\ne = {}\nf = {}", p.n, p.e, p.f);
            let _ = writeln!(out, "base = {}\nX = {}", braid_hex(&p.base), braid_hex(&p.x));
        }
    }
    out
}

/// The secret half of a key file, with the parameters needed to use it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SecretKey {
    One { n: usize, r: u32, s_exp: u32, secret: SchemeISecret },
    Two { n: usize, e: u32, f: u32, secret: SchemeIISecret },
}

impl SecretKey {
    pub fn scheme(&self) -> SchemeId {
        match self {
            SecretKey::One { .. } => SchemeId::One,
            SecretKey::Two { .. } => SchemeId::Two,
        }
    }
}

impl KeyPair {
    pub fn secret_key(&self) -> SecretKey {
        match self {
            KeyPair::One(k) => SecretKey::One {
                n: k.public.n,
                r: k.public.r,
                s_exp: k.public.s_exp,
                secret: k.secret.clone(),
            },
            KeyPair::Two(k) => {
                SecretKey::Two { n: k.public.n, e: k.public.e, f: k.public.f, secret: k.secret.clone() }
            }
        }
    }
}

pub fn write_secret_key(keys: &KeyPair) -> String {
    let mut out = String::new();
    match keys.secret_key() {
        SecretKey::One { n, r, s_exp, secret } => {
            let _ = writeln!(out, "scheme = 1\nn = {n}\nr = {r}\ns = {s_exp}");
            let _ = writeln!(out, "a = {}\nb = {}", braid_hex(&secret.a), braid_hex(&secret.b));
        }
        SecretKey::Two { n, e, f, secret } => {
            let _ = writeln!(out, "scheme = 2\nn = {n}\ne = {e}\nf = {f}");
            let _ = writeln!(out, "a = {}", braid_hex(&secret.a));
        }
    }
    out
}

struct Fields(BTreeMap<String, String>);

impl Fields {
    fn parse(text: &str) -> Result<Self, ProtocolError> {
        let mut map = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ProtocolError::KeyFormat(format!("line {}: expected `field = value`", lineno + 1)))?;
            let key = key.trim().to_string();
            if map.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(ProtocolError::KeyFormat(format!("duplicate field {key:?}")));
            }
        }
        Ok(Self(map))
    }

    fn take(&mut self, key: &str) -> Result<String, ProtocolError> {
        self.0.remove(key).ok_or_else(|| ProtocolError::KeyFormat(format!("missing field {key:?}")))
    }

    fn number<T: std::str::FromStr>(&mut self, key: &str) -> Result<T, ProtocolError> {
        let raw = self.take(key)?;
        raw.parse().map_err(|_| ProtocolError::KeyFormat(format!("field {key:?}: bad number {raw:?}")))
    }

    fn braid(&mut self, key: &str, n: usize) -> Result<CanonicalForm, ProtocolError> {
        let raw = self.take(key)?;
        let bytes = hex::decode(&raw).map_err(|e| ProtocolError::KeyFormat(format!("field {key:?}: {e}")))?;
        let x = deserialize(&bytes).map_err(|e| ProtocolError::KeyFormat(format!("field {key:?}: {e}")))?;
        if x.strands() != n {
            return Err(ProtocolError::KeyFormat(format!("field {key:?}: braid has {} strands, expected {n}", x.strands())));
        }
        Ok(x)
    }

    fn finish(self) -> Result<(), ProtocolError> {
        match self.0.keys().next() {
            Some(k) => Err(ProtocolError::KeyFormat(format!("unknown field {k:?}"))),
            None => Ok(()),
        }
    }
}

fn exponent(fields: &mut Fields, key: &str) -> Result<u32, ProtocolError> {
    let v = fields.number(key)?;
    super::keys::check_exponent(key, v)?;
    Ok(v)
}

pub fn parse_public_key(text: &str) -> Result<PublicKey, ProtocolError> {
    let mut fields = Fields::parse(text)?;
    let scheme: SchemeId = fields.take("scheme")?.parse()?;
    let n: usize = fields.number("n")?;
    let key = match scheme {
        SchemeId::One => {
            let r = exponent(&mut fields, "r")?;
            let s_exp = exponent(&mut fields, "s")?;
            let x = fields.braid("X", n)?;
            PublicKey::One(SchemeIPublic { n, r, s_exp, x })
        }
        SchemeId::Two => {
            let e = exponent(&mut fields, "e")?;
            let f = exponent(&mut fields, "f")?;
            let base = fields.braid("base", n)?;
            let x = fields.braid("X", n)?;
            PublicKey::Two(SchemeIIPublic { n, e, f, base, x })
        }
    };
    fields.finish()?;
    Ok(key)
}

pub fn parse_secret_key(text: &str) -> Result<SecretKey, ProtocolError> {
    let mut fields = Fields::parse(text)?;
    let scheme: SchemeId = fields.take("scheme")?.parse()?;
    let n: usize = fields.number("n")?;
    let key = match scheme {
        SchemeId::One => {
            let r = exponent(&mut fields, "r")?;
            let s_exp = exponent(&mut fields, "s")?;
            let a = fields.braid("a", n)?;
            let b = fields.braid("b", n)?;
            SecretKey::One { n, r, s_exp, secret: SchemeISecret { a, b } }
        }
        SchemeId::Two => {
            let e = exponent(&mut fields, "e")?;
            let f = exponent(&mut fields, "f")?;
            let a = fields.braid("a", n)?;
            SecretKey::Two { n, e, f, secret: SchemeIISecret { a } }
        }
    };
    fields.finish()?;
    Ok(key)
}

/// Pairs a public key with a secret key. Only the parameters are checked to
/// match; whether the secret actually opens the public key is left to the
/// verifier.
pub fn assemble_key_pair(public: PublicKey, secret: SecretKey) -> Result<KeyPair, ProtocolError> {
    let mismatch = |what: &str| ProtocolError::InvalidParameter(format!("public and secret keys disagree on {what}"));
    match (public, secret) {
        (PublicKey::One(p), SecretKey::One { n, r, s_exp, secret }) => {
            if p.n != n {
                return Err(mismatch("n"));
            }
            if (p.r, p.s_exp) != (r, s_exp) {
                return Err(mismatch("exponents"));
            }
            Ok(KeyPair::One(SchemeIKeys { public: p, secret }))
        }
        (PublicKey::Two(p), SecretKey::Two { n, e, f, secret }) => {
            if p.n != n {
                return Err(mismatch("n"));
            }
            if (p.e, p.f) != (e, f) {
                return Err(mismatch("exponents"));
            }
            Ok(KeyPair::Two(SchemeIIKeys { public: p, secret }))
        }
        _ => Err(ProtocolError::SchemeMismatch),
    }
}

use rand::Rng;

use super::{ProtocolError, SchemeId};
use crate::braid::{BraidWord, CanonicalForm};
use crate::hash::{hash_braid, Digest};
use crate::sampling::{sample_hard, sample_subgroup_word, SamplerConfig, SubgroupSide};

pub(crate) fn check_exponent(name: &str, value: u32) -> Result<(), ProtocolError> {
    if value < 2 {
        return Err(ProtocolError::InvalidParameter(format!("{name} must be ≥ 2, got {value}")));
    }
    Ok(())
}

fn check_side(side: SubgroupSide, name: &str, word: &BraidWord) -> Result<(), ProtocolError> {
    if !side.contains_word(word) {
        return Err(ProtocolError::InvalidParameter(format!("{name} must lie in the {side:?} subgroup")));
    }
    Ok(())
}

fn check_strands(expected: usize, y: &CanonicalForm) -> Result<(), ProtocolError> {
    if y.strands() != expected {
        return Err(ProtocolError::InvalidParameter(format!(
            "challenge has {} strands, key has {expected}",
            y.strands()
        )));
    }
    Ok(())
}

fn hard_subgroup_element<R: Rng + ?Sized>(
    side: SubgroupSide,
    what: &'static str,
    sampler: &SamplerConfig,
    rng: &mut R,
) -> Result<CanonicalForm, ProtocolError> {
    side.generators(sampler.n())?;
    sample_hard(sampler, rng, |rng| sample_subgroup_word(side, sampler, rng).expect("n checked above"))
        .ok_or(ProtocolError::SamplingFailure(what))
}

/// Public part of a Scheme I key: `X = a^r b^s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeIPublic {
    pub n: usize,
    pub r: u32,
    /// The exponent the scheme calls `s`; renamed to keep it apart from
    /// Scheme II's base braid.
    pub s_exp: u32,
    pub x: CanonicalForm,
}

/// Secret part of a Scheme I key: `a ∈ LB_n`, `b ∈ UB_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeISecret {
    pub a: CanonicalForm,
    pub b: CanonicalForm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeIKeys {
    pub public: SchemeIPublic,
    pub secret: SchemeISecret,
}

impl SchemeIKeys {
    /// Builds a key pair from explicit secret words, checking that `a` is a
    /// lower-block word and `b` an upper-block word.
    pub fn from_words(r: u32, s_exp: u32, a: &BraidWord, b: &BraidWord) -> Result<Self, ProtocolError> {
        check_exponent("r", r)?;
        check_exponent("s", s_exp)?;
        check_side(SubgroupSide::Lower, "a", a)?;
        check_side(SubgroupSide::Upper, "b", b)?;
        Self::from_secret(r, s_exp, a.normalize(), b.normalize())
    }

    /// Computes `X = a^r · b^s` from the secret.
    pub fn from_secret(r: u32, s_exp: u32, a: CanonicalForm, b: CanonicalForm) -> Result<Self, ProtocolError> {
        check_exponent("r", r)?;
        check_exponent("s", s_exp)?;
        let x = a.power(r as i64)?.multiply(&b.power(s_exp as i64)?)?;
        Ok(Self { public: SchemeIPublic { n: x.strands(), r, s_exp, x }, secret: SchemeISecret { a, b } })
    }

    /// Whether the public key is recomputable from the secret.
    pub fn is_consistent(&self) -> bool {
        Self::from_secret(self.public.r, self.public.s_exp, self.secret.a.clone(), self.secret.b.clone())
            .map(|k| k.public == self.public)
            .unwrap_or(false)
    }
}

/// Scheme I key generation: hard `a ∈ LB_n`, `b ∈ UB_n`, `X = a^r b^s`.
pub fn keygen1<R: Rng + ?Sized>(
    sampler: &SamplerConfig,
    r: u32,
    s_exp: u32,
    rng: &mut R,
) -> Result<SchemeIKeys, ProtocolError> {
    check_exponent("r", r)?;
    check_exponent("s", s_exp)?;
    let a = hard_subgroup_element(SubgroupSide::Lower, "secret a", sampler, rng)?;
    let b = hard_subgroup_element(SubgroupSide::Upper, "secret b", sampler, rng)?;
    SchemeIKeys::from_secret(r, s_exp, a, b)
}

/// Public part of a Scheme II key: `X = a^e · base · a^f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeIIPublic {
    pub n: usize,
    pub e: u32,
    pub f: u32,
    /// The public braid the scheme calls `s`.
    pub base: CanonicalForm,
    pub x: CanonicalForm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeIISecret {
    pub a: CanonicalForm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeIIKeys {
    pub public: SchemeIIPublic,
    pub secret: SchemeIISecret,
}

impl SchemeIIKeys {
    pub fn from_words(e: u32, f: u32, base: &BraidWord, a: &BraidWord) -> Result<Self, ProtocolError> {
        check_side(SubgroupSide::Lower, "a", a)?;
        Self::from_secret(e, f, base.normalize(), a.normalize())
    }

    pub fn from_secret(e: u32, f: u32, base: CanonicalForm, a: CanonicalForm) -> Result<Self, ProtocolError> {
        check_exponent("e", e)?;
        check_exponent("f", f)?;
        let x = a.power(e as i64)?.multiply(&base)?.multiply(&a.power(f as i64)?)?;
        Ok(Self { public: SchemeIIPublic { n: x.strands(), e, f, base, x }, secret: SchemeIISecret { a } })
    }

    pub fn is_consistent(&self) -> bool {
        Self::from_secret(self.public.e, self.public.f, self.public.base.clone(), self.secret.a.clone())
            .map(|k| k.public == self.public)
            .unwrap_or(false)
    }
}

/// Scheme II key generation: hard base braid from all of B_n, hard
/// `a ∈ LB_n`, `X = a^e · base · a^f`.
pub fn keygen2<R: Rng + ?Sized>(
    sampler: &SamplerConfig,
    e: u32,
    f: u32,
    rng: &mut R,
) -> Result<SchemeIIKeys, ProtocolError> {
    check_exponent("e", e)?;
    check_exponent("f", f)?;
    let base = sample_hard(sampler, rng, |rng| crate::sampling::sample_word(sampler, rng))
        .ok_or(ProtocolError::SamplingFailure("base braid"))?;
    let a = hard_subgroup_element(SubgroupSide::Lower, "secret a", sampler, rng)?;
    SchemeIIKeys::from_secret(e, f, base, a)
}

/// The verifier's ephemeral Scheme I values `c ∈ UB_n`, `d ∈ LB_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifierSecretI {
    pub c: CanonicalForm,
    pub d: CanonicalForm,
}

/// A Scheme I challenge `Y = c^r d^s` together with the verifier's `(c, d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChallengeI {
    pub y: CanonicalForm,
    pub verifier_secret: VerifierSecretI,
}

impl ChallengeI {
    pub fn from_secret(public: &SchemeIPublic, c: CanonicalForm, d: CanonicalForm) -> Result<Self, ProtocolError> {
        let y = c.power(public.r as i64)?.multiply(&d.power(public.s_exp as i64)?)?;
        Ok(Self { y, verifier_secret: VerifierSecretI { c, d } })
    }
}

/// Scheme I challenge: fresh `c ∈ UB_n` and `d ∈ LB_n` of length `L`.
pub fn challenge1<R: Rng + ?Sized>(
    public: &SchemeIPublic,
    sampler: &SamplerConfig,
    rng: &mut R,
) -> Result<ChallengeI, ProtocolError> {
    check_sampler(public.n, sampler)?;
    let c = sample_subgroup_word(SubgroupSide::Upper, sampler, rng)?.normalize();
    let d = sample_subgroup_word(SubgroupSide::Lower, sampler, rng)?.normalize();
    ChallengeI::from_secret(public, c, d)
}

/// The prover's braid `a^r · Y · b^s`, before hashing.
pub fn prover_braid1(keys: &SchemeIKeys, y: &CanonicalForm) -> Result<CanonicalForm, ProtocolError> {
    check_strands(keys.public.n, y)?;
    let SchemeIKeys { public, secret } = keys;
    Ok(secret.a.power(public.r as i64)?.multiply(y)?.multiply(&secret.b.power(public.s_exp as i64)?)?)
}

/// `Z = H(a^r · Y · b^s)`.
pub fn respond1(keys: &SchemeIKeys, y: &CanonicalForm) -> Result<Response, ProtocolError> {
    Ok(Response { z: hash_braid(&prover_braid1(keys, y)?) })
}

/// The verifier's braid `c^r · X · d^s`. Reads only public data and the
/// verifier's own values.
pub fn verifier_braid1(public: &SchemeIPublic, vs: &VerifierSecretI) -> CanonicalForm {
    let lhs = vs.c.power(public.r as i64).expect("r >= 0");
    let rhs = vs.d.power(public.s_exp as i64).expect("s >= 0");
    lhs.multiply(&public.x)
        .and_then(|t| t.multiply(&rhs))
        .expect("verifier values share the key's strand count")
}

/// Accepts iff `Z = H(c^r · X · d^s)`.
pub fn verify1(public: &SchemeIPublic, vs: &VerifierSecretI, response: &Response) -> bool {
    hash_braid(&verifier_braid1(public, vs)) == response.z
}

/// The verifier's Scheme II value `b ∈ UB_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifierSecretII {
    pub b: CanonicalForm,
}

/// A Scheme II challenge `Y = b^e · base · b^f` with the verifier's `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChallengeII {
    pub y: CanonicalForm,
    pub verifier_secret: VerifierSecretII,
}

impl ChallengeII {
    pub fn from_secret(public: &SchemeIIPublic, b: CanonicalForm) -> Result<Self, ProtocolError> {
        let y = b.power(public.e as i64)?.multiply(&public.base)?.multiply(&b.power(public.f as i64)?)?;
        Ok(Self { y, verifier_secret: VerifierSecretII { b } })
    }
}

pub fn challenge2<R: Rng + ?Sized>(
    public: &SchemeIIPublic,
    sampler: &SamplerConfig,
    rng: &mut R,
) -> Result<ChallengeII, ProtocolError> {
    check_sampler(public.n, sampler)?;
    let b = sample_subgroup_word(SubgroupSide::Upper, sampler, rng)?.normalize();
    ChallengeII::from_secret(public, b)
}

/// The prover's braid `a^e · Y · a^f`, before hashing.
pub fn prover_braid2(keys: &SchemeIIKeys, y: &CanonicalForm) -> Result<CanonicalForm, ProtocolError> {
    check_strands(keys.public.n, y)?;
    let SchemeIIKeys { public, secret } = keys;
    Ok(secret.a.power(public.e as i64)?.multiply(y)?.multiply(&secret.a.power(public.f as i64)?)?)
}

/// `Z = H(a^e · Y · a^f)`.
pub fn respond2(keys: &SchemeIIKeys, y: &CanonicalForm) -> Result<Response, ProtocolError> {
    Ok(Response { z: hash_braid(&prover_braid2(keys, y)?) })
}

/// The verifier's braid `b^e · X · b^f`.
pub fn verifier_braid2(public: &SchemeIIPublic, vs: &VerifierSecretII) -> CanonicalForm {
    let lhs = vs.b.power(public.e as i64).expect("e >= 0");
    let rhs = vs.b.power(public.f as i64).expect("f >= 0");
    lhs.multiply(&public.x)
        .and_then(|t| t.multiply(&rhs))
        .expect("verifier values share the key's strand count")
}

/// Accepts iff `Z = H(b^e · X · b^f)`.
pub fn verify2(public: &SchemeIIPublic, vs: &VerifierSecretII, response: &Response) -> bool {
    hash_braid(&verifier_braid2(public, vs)) == response.z
}

fn check_sampler(n: usize, sampler: &SamplerConfig) -> Result<(), ProtocolError> {
    if sampler.n() != n {
        return Err(ProtocolError::InvalidParameter(format!(
            "sampler is configured for {} strands, key has {n}",
            sampler.n()
        )));
    }
    Ok(())
}

/// The prover's answer to one challenge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Response {
    pub z: Digest,
}

/// A public key of either scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PublicKey {
    One(SchemeIPublic),
    Two(SchemeIIPublic),
}

impl PublicKey {
    pub fn scheme(&self) -> SchemeId {
        match self {
            PublicKey::One(_) => SchemeId::One,
            PublicKey::Two(_) => SchemeId::Two,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            PublicKey::One(p) => p.n,
            PublicKey::Two(p) => p.n,
        }
    }

    /// `(r, s)` for Scheme I, `(e, f)` for Scheme II.
    pub fn exponents(&self) -> (u32, u32) {
        match self {
            PublicKey::One(p) => (p.r, p.s_exp),
            PublicKey::Two(p) => (p.e, p.f),
        }
    }

    pub fn x(&self) -> &CanonicalForm {
        match self {
            PublicKey::One(p) => &p.x,
            PublicKey::Two(p) => &p.x,
        }
    }

    pub fn base(&self) -> Option<&CanonicalForm> {
        match self {
            PublicKey::One(_) => None,
            PublicKey::Two(p) => Some(&p.base),
        }
    }
}

/// A complete key pair of either scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeyPair {
    One(SchemeIKeys),
    Two(SchemeIIKeys),
}

impl KeyPair {
    pub fn generate<R: Rng + ?Sized>(
        scheme: SchemeId,
        sampler: &SamplerConfig,
        exponents: (u32, u32),
        rng: &mut R,
    ) -> Result<KeyPair, ProtocolError> {
        Ok(match scheme {
            SchemeId::One => KeyPair::One(keygen1(sampler, exponents.0, exponents.1, rng)?),
            SchemeId::Two => KeyPair::Two(keygen2(sampler, exponents.0, exponents.1, rng)?),
        })
    }

    pub fn public(&self) -> PublicKey {
        match self {
            KeyPair::One(k) => PublicKey::One(k.public.clone()),
            KeyPair::Two(k) => PublicKey::Two(k.public.clone()),
        }
    }

    pub fn scheme(&self) -> SchemeId {
        match self {
            KeyPair::One(_) => SchemeId::One,
            KeyPair::Two(_) => SchemeId::Two,
        }
    }

    pub fn respond(&self, y: &CanonicalForm) -> Result<Response, ProtocolError> {
        match self {
            KeyPair::One(k) => respond1(k, y),
            KeyPair::Two(k) => respond2(k, y),
        }
    }

    pub fn is_consistent(&self) -> bool {
        match self {
            KeyPair::One(k) => k.is_consistent(),
            KeyPair::Two(k) => k.is_consistent(),
        }
    }
}

/// A challenge of either scheme, still holding the verifier's secret values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Challenge {
    One(ChallengeI),
    Two(ChallengeII),
}

impl Challenge {
    pub fn y(&self) -> &CanonicalForm {
        match self {
            Challenge::One(c) => &c.y,
            Challenge::Two(c) => &c.y,
        }
    }
}

/// Draws a fresh challenge for `public`.
pub fn challenge<R: Rng + ?Sized>(
    public: &PublicKey,
    sampler: &SamplerConfig,
    rng: &mut R,
) -> Result<Challenge, ProtocolError> {
    Ok(match public {
        PublicKey::One(p) => Challenge::One(challenge1(p, sampler, rng)?),
        PublicKey::Two(p) => Challenge::Two(challenge2(p, sampler, rng)?),
    })
}

/// The digest an honest prover must return, computed from public data and
/// the verifier's values only.
pub fn expected_digest(public: &PublicKey, challenge: &Challenge) -> Result<Digest, ProtocolError> {
    match (public, challenge) {
        (PublicKey::One(p), Challenge::One(c)) => Ok(hash_braid(&verifier_braid1(p, &c.verifier_secret))),
        (PublicKey::Two(p), Challenge::Two(c)) => Ok(hash_braid(&verifier_braid2(p, &c.verifier_secret))),
        _ => Err(ProtocolError::SchemeMismatch),
    }
}

pub fn verify(public: &PublicKey, challenge: &Challenge, response: &Response) -> bool {
    match (public, challenge) {
        (PublicKey::One(p), Challenge::One(c)) => verify1(p, &c.verifier_secret, response),
        (PublicKey::Two(p), Challenge::Two(c)) => verify2(p, &c.verifier_secret, response),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::rng_from_seed;

    fn w(n: usize, text: &str) -> BraidWord {
        BraidWord::parse(n, text).unwrap()
    }

    fn nf(n: usize, text: &str) -> CanonicalForm {
        w(n, text).normalize()
    }

    #[test]
    fn scheme_one_fixture() {
        let keys = SchemeIKeys::from_words(2, 2, &w(4, "s1"), &w(4, "s3")).unwrap();
        assert_eq!(keys.public.x, nf(4, "s1 s1 s3 s3"));
        assert!(keys.is_consistent());

        let ch = ChallengeI::from_secret(&keys.public, nf(4, "s3"), nf(4, "s1")).unwrap();
        assert_eq!(ch.y, nf(4, "s3 s3 s1 s1"));
        let z = respond1(&keys, &ch.y).unwrap();
        assert_eq!(z.z, hash_braid(&verifier_braid1(&keys.public, &ch.verifier_secret)));
        assert!(verify1(&keys.public, &ch.verifier_secret, &z));
        assert_eq!(respond1(&keys, &ch.y).unwrap(), z);

        let id = CanonicalForm::identity(4).unwrap();
        assert_eq!(respond1(&keys, &id).unwrap().z, hash_braid(&keys.public.x));
        assert!(respond1(&keys, &CanonicalForm::identity(6).unwrap()).is_err());
    }

    #[test]
    fn exponent_and_subgroup_checks() {
        assert!(SchemeIKeys::from_words(1, 2, &w(4, "s1"), &w(4, "s3")).is_err());
        assert!(SchemeIKeys::from_words(2, 1, &w(4, "s1"), &w(4, "s3")).is_err());
        assert!(SchemeIKeys::from_words(2, 2, &w(4, "s3"), &w(4, "s3")).is_err());
        assert!(SchemeIKeys::from_words(2, 2, &w(4, "s1"), &w(4, "s2")).is_err());
        assert!(SchemeIIKeys::from_words(1, 2, &w(4, "s2"), &w(4, "s1")).is_err());
        assert!(SchemeIIKeys::from_words(2, 2, &w(4, "s2"), &w(4, "s2")).is_err());
        let sampler = SamplerConfig::new(4, 8, 3, 0).unwrap();
        let mut rng = sampler.rng();
        assert!(matches!(keygen1(&sampler, 1, 2, &mut rng), Err(ProtocolError::InvalidParameter(_))));
        assert!(matches!(keygen2(&sampler, 2, 1, &mut rng), Err(ProtocolError::InvalidParameter(_))));
    }

    #[test]
    fn scheme_two_fixture() {
        let keys = SchemeIIKeys::from_words(2, 2, &w(4, "s2"), &w(4, "s1")).unwrap();
        assert_eq!(keys.public.x, nf(4, "s1 s1 s2 s1 s1"));
        let ch = ChallengeII::from_secret(&keys.public, nf(4, "s3")).unwrap();
        assert_eq!(ch.y, nf(4, "s3 s3 s2 s3 s3"));
        let z = respond2(&keys, &ch.y).unwrap();
        assert!(verify2(&keys.public, &ch.verifier_secret, &z));
        assert_eq!(respond2(&keys, &keys.public.base).unwrap().z, hash_braid(&keys.public.x));

        let tampered = ch.y.multiply(&nf(4, "s2")).unwrap();
        assert!(!verify2(&keys.public, &ch.verifier_secret, &respond2(&keys, &tampered).unwrap()));
    }

    #[test]
    fn sampled_keys_are_in_their_subgroups() {
        let sampler = SamplerConfig::new(8, 16, 3, 11).unwrap();
        let mut rng = sampler.rng();
        let keys = keygen1(&sampler, 3, 2, &mut rng).unwrap();
        assert!(keys.is_consistent());
        // commuting blocks: a·b = b·a
        let ab = keys.secret.a.multiply(&keys.secret.b).unwrap();
        let ba = keys.secret.b.multiply(&keys.secret.a).unwrap();
        assert_eq!(ab, ba);
        let ch = challenge1(&keys.public, &sampler, &mut rng).unwrap();
        assert_eq!(prover_braid1(&keys, &ch.y).unwrap(), verifier_braid1(&keys.public, &ch.verifier_secret));

        let keys2 = keygen2(&sampler, 2, 3, &mut rng).unwrap();
        assert!(keys2.is_consistent());
        let ch = challenge2(&keys2.public, &sampler, &mut rng).unwrap();
        assert_eq!(prover_braid2(&keys2, &ch.y).unwrap(), verifier_braid2(&keys2.public, &ch.verifier_secret));
    }

    #[test]
    fn random_and_cross_key_digests_rejected() {
        let sampler = SamplerConfig::new(8, 16, 3, 2).unwrap();
        let mut rng = rng_from_seed(2);
        let keys = keygen1(&sampler, 2, 2, &mut rng).unwrap();
        let other = keygen1(&sampler, 2, 2, &mut rng).unwrap();
        let ch = challenge1(&keys.public, &sampler, &mut rng).unwrap();
        let forged = respond1(&other, &ch.y).unwrap();
        assert!(!verify1(&keys.public, &ch.verifier_secret, &forged));
        let random = Response { z: Digest(rng.random()) };
        assert!(!verify1(&keys.public, &ch.verifier_secret, &random));
    }

    #[test]
    fn sampler_must_match_key() {
        let keys = SchemeIKeys::from_words(2, 2, &w(4, "s1"), &w(4, "s3")).unwrap();
        let sampler = SamplerConfig::new(8, 8, 3, 0).unwrap();
        assert!(challenge1(&keys.public, &sampler, &mut sampler.rng()).is_err());
    }
}

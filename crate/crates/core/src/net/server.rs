//! The verifier side: one sequential session per connection.

use std::io::{self, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::Arc;
use std::thread;
use std::time::Duration;

use thiserror::Error;

use super::frame::{error_code, read_frame, write_frame, FrameError, MessageType};
use super::message::{decode_hello, encode_verdict};
use crate::hash::{serialize, Digest};
use crate::protocol::{ProtocolError, PublicKey, RoundRecord, SchemeId, Transcript, Verifier};
use crate::sampling::{stream_rng, SamplerConfig};

/// Socket read/write timeout used by the TCP helpers.
pub const IO_TIMEOUT: Duration = Duration::from_secs(30);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServerConfig {
    pub scheme: SchemeId,
    /// When set, HELLO must carry exactly this key.
    pub expected_key: Option<PublicKey>,
    pub rounds: u16,
    pub word_length: usize,
    pub min_canonical_length: usize,
    /// Connection `i` draws its challenges from `stream_rng(seed, i)`.
    pub seed: u64,
}

impl ServerConfig {
    pub fn new(
        scheme: SchemeId,
        rounds: u16,
        word_length: usize,
        min_canonical_length: usize,
        seed: u64,
    ) -> Result<Self, ProtocolError> {
        if rounds == 0 {
            return Err(ProtocolError::InvalidParameter("rounds must be >= 1".into()));
        }
        SamplerConfig::new(4, word_length, min_canonical_length, seed)?;
        Ok(Self { scheme, expected_key: None, rounds, word_length, min_canonical_length, seed })
    }

    pub fn with_expected_key(mut self, key: PublicKey) -> Self {
        self.expected_key = Some(key);
        self
    }
}

#[derive(Debug, Error)]
pub enum ServeError {
    /// An ERROR frame with `code` was sent and the session ended.
    #[error("sent error code {code:#04x}: {reason}")]
    Rejected { code: u8, reason: String },
    #[error("client went away: {0}")]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl ServeError {
    /// The ERROR code sent to the client, if any.
    pub fn code(&self) -> Option<u8> {
        match self {
            ServeError::Rejected { code, .. } => Some(*code),
            _ => None,
        }
    }
}

fn reject<W: Write + ?Sized>(w: &mut W, code: u8, reason: impl Into<String>) -> ServeError {
    // best effort: the peer may already be gone
    let _ = write_frame(w, MessageType::Error, &[code]);
    ServeError::Rejected { code, reason: reason.into() }
}

/// Reads a frame of type `want`, answering anything else with an ERROR.
fn expect_frame<R: Read + ?Sized, W: Write + ?Sized>(
    r: &mut R,
    w: &mut W,
    want: MessageType,
) -> Result<Vec<u8>, ServeError> {
    let frame = match read_frame(r) {
        Ok(f) => f,
        Err(FrameError::BadLength(len)) => return Err(reject(w, error_code::BAD_LENGTH, format!("length {len}"))),
        Err(e) => return Err(e.into()),
    };
    match frame.kind() {
        None => Err(reject(w, error_code::UNKNOWN_TYPE, format!("type {:#04x}", frame.msg_type))),
        Some(k) if k != want => Err(reject(w, error_code::UNEXPECTED, format!("{k:?} while waiting for {want:?}"))),
        Some(_) => Ok(frame.payload),
    }
}

/// Runs one verifier session over `r`/`w`: HELLO, then `cfg.rounds` rounds
/// of CHALLENGE → RESPONSE → VERDICT. Every round is played even after a
/// rejection. Malformed input ends the session with an ERROR frame.
pub fn serve_connection<R: Read + ?Sized, W: Write + ?Sized>(
    r: &mut R,
    w: &mut W,
    cfg: &ServerConfig,
    connection: u64,
) -> Result<Transcript, ServeError> {
    let hello = expect_frame(r, w, MessageType::Hello)?;
    let public = match decode_hello(&hello) {
        Ok(p) => p,
        Err(super::message::HelloError::UnknownScheme(b)) => {
            return Err(reject(w, error_code::SCHEME_MISMATCH, format!("scheme byte {b}")))
        }
        Err(e) => return Err(reject(w, error_code::MALFORMED, e.to_string())),
    };
    if public.scheme() != cfg.scheme {
        return Err(reject(w, error_code::SCHEME_MISMATCH, format!("client scheme {}", public.scheme())));
    }
    if cfg.expected_key.as_ref().is_some_and(|k| *k != public) {
        return Err(reject(w, error_code::KEY_MISMATCH, "public key differs from the configured one"));
    }
    let sampler = SamplerConfig::new(public.n(), cfg.word_length, cfg.min_canonical_length, cfg.seed)
        .map_err(|e| reject(w, error_code::MALFORMED, e.to_string()))?;
    let mut verifier = Verifier::new(public, sampler, stream_rng(cfg.seed, connection))
        .map_err(|e| reject(w, error_code::MALFORMED, e.to_string()))?;

    let mut transcript = Transcript::default();
    for round in 0..cfg.rounds {
        let challenge = verifier.challenge().map_err(|e| reject(w, error_code::MALFORMED, e.to_string()))?;
        let y = serialize(challenge.y()).map_err(|e| reject(w, error_code::MALFORMED, e.to_string()))?;
        write_frame(w, MessageType::Challenge, &y)?;
        let payload = expect_frame(r, w, MessageType::Response)?;
        let z = Digest::from_slice(&payload).ok_or_else(|| {
            reject(w, error_code::BAD_LENGTH, format!("response payload of {} bytes", payload.len()))
        })?;
        let accepted = verifier.check(&challenge, &z);
        write_frame(w, MessageType::Verdict, &encode_verdict(accepted, round))?;
        transcript.rounds.push(RoundRecord { challenge: challenge.y().clone(), response: z, accepted });
    }
    Ok(transcript)
}

/// [`serve_connection`] on a TCP stream, with [`IO_TIMEOUT`] applied.
pub fn serve_tcp_connection(stream: TcpStream, cfg: &ServerConfig, connection: u64) -> Result<Transcript, ServeError> {
    stream.set_read_timeout(Some(IO_TIMEOUT))?;
    stream.set_write_timeout(Some(IO_TIMEOUT))?;
    stream.set_nodelay(true)?;
    let mut reader = stream.try_clone()?;
    let mut writer = stream;
    serve_connection(&mut reader, &mut writer, cfg, connection)
}

/// Accepts connections forever, one thread per connection. `report` sees
/// each finished session.
pub fn serve_forever<F>(listener: TcpListener, cfg: ServerConfig, report: F) -> io::Result<()>
where
    F: Fn(u64, &Result<Transcript, ServeError>) + Send + Sync + 'static,
{
    let cfg = Arc::new(cfg);
    let report = Arc::new(report);
    for (index, stream) in listener.incoming().enumerate() {
        let stream = stream?;
        let (cfg, report) = (Arc::clone(&cfg), Arc::clone(&report));
        thread::spawn(move || {
            let outcome = serve_tcp_connection(stream, &cfg, index as u64);
            report(index as u64, &outcome);
        });
    }
    Ok(())
}

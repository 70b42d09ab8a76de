//! The prover side.

use std::io::{self, Read, Write};
use std::net::{TcpStream, ToSocketAddrs};

use thiserror::Error;

use super::frame::{read_frame, write_frame, FrameError, MessageType};
use super::message::{decode_verdict, encode_hello};
use super::server::IO_TIMEOUT;
use crate::hash::deserialize;
use crate::protocol::Prover;
use crate::protocol::{HonestProver, KeyPair};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProveOutcome {
    /// `(round, accepted)` in arrival order.
    pub verdicts: Vec<(u16, bool)>,
}

impl ProveOutcome {
    pub fn accepted(&self) -> bool {
        !self.verdicts.is_empty() && self.verdicts.iter().all(|&(_, ok)| ok)
    }
}

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("server sent error code {0:#04x}")]
    Remote(u8),
    #[error("protocol violation: {0}")]
    Protocol(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Sends HELLO with the public key, answers every CHALLENGE, and collects
/// verdicts until the server closes the connection.
pub fn prove<R: Read + ?Sized, W: Write + ?Sized>(
    r: &mut R,
    w: &mut W,
    keys: &KeyPair,
) -> Result<ProveOutcome, ClientError> {
    let hello = encode_hello(&keys.public()).map_err(|e| ClientError::Protocol(e.to_string()))?;
    write_frame(w, MessageType::Hello, &hello)?;
    let mut prover = HonestProver::new(keys.clone());
    let mut verdicts = Vec::new();
    let mut pending = false;
    loop {
        let frame = match read_frame(r) {
            Ok(f) => f,
            Err(FrameError::Closed) if !pending && !verdicts.is_empty() => break,
            Err(FrameError::Closed) => return Err(ClientError::Protocol("connection closed early".into())),
            Err(e) => return Err(e.into()),
        };
        match frame.kind() {
            Some(MessageType::Challenge) if !pending => {
                let y = deserialize(&frame.payload).map_err(|e| ClientError::Protocol(format!("challenge: {e}")))?;
                if y.strands() != keys.public().n() {
                    return Err(ClientError::Protocol(format!("challenge has {} strands", y.strands())));
                }
                let z = prover
                    .respond(verdicts.len(), &y)
                    .map_err(|e| ClientError::Protocol(e.to_string()))?;
                write_frame(w, MessageType::Response, z.as_bytes())?;
                pending = true;
            }
            Some(MessageType::Verdict) if pending => {
                let v = decode_verdict(&frame.payload).ok_or_else(|| ClientError::Protocol("bad verdict".into()))?;
                verdicts.push((v.1, v.0));
                pending = false;
            }
            Some(MessageType::Error) => return Err(ClientError::Remote(frame.payload.first().copied().unwrap_or(0))),
            _ => return Err(ClientError::Protocol(format!("unexpected frame type {:#04x}", frame.msg_type))),
        }
    }
    Ok(ProveOutcome { verdicts })
}

/// [`prove`] over a fresh TCP connection to `addr`.
pub fn prove_tcp<A: ToSocketAddrs>(addr: A, keys: &KeyPair) -> Result<ProveOutcome, ClientError> {
    let stream = TcpStream::connect(addr)?;
    stream.set_read_timeout(Some(IO_TIMEOUT))?;
    stream.set_write_timeout(Some(IO_TIMEOUT))?;
    stream.set_nodelay(true)?;
    let mut reader = stream.try_clone()?;
    let mut writer = stream;
    prove(&mut reader, &mut writer, keys)
}
